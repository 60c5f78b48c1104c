/*
 * Copyright 2026 The cwtvc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cwtvc/error.h"
#include "cwtvc/matrix.h"

namespace cwtvc {

inline constexpr double kDefaultFramePeriodMs = 5.0;
inline constexpr std::size_t kDefaultMcepDim = 24;

/// Frame-synchronous vocoder features of one utterance.
///
/// Construction enforces the structural invariants: at least one frame,
/// f0/mcep/ap sharing the frame count, positive sample rate and frame
/// period. Value invariants (finite entries, f0 either 0 or positive) are
/// checked by check_values(), so that validate() can still report on
/// damaged data.
class UtteranceFeatures {
 public:
  UtteranceFeatures(double frame_period_ms, std::uint32_t sample_rate_hz,
                    std::vector<double> f0, Matrix mcep, Matrix ap);

  double frame_period_ms() const { return frame_period_ms_; }
  std::uint32_t sample_rate_hz() const { return sample_rate_hz_; }
  std::size_t frames() const { return f0_.size(); }
  std::size_t mcep_dim() const { return mcep_.cols(); }
  std::size_t ap_dim() const { return ap_.cols(); }

  const std::vector<double>& f0() const { return f0_; }
  const Matrix& mcep() const { return mcep_; }
  const Matrix& ap() const { return ap_; }

  /// Throws InvalidArgument naming the first offending field.
  void check_values() const;

 private:
  double frame_period_ms_;
  std::uint32_t sample_rate_hz_;
  std::vector<double> f0_;
  Matrix mcep_;
  Matrix ap_;
};

/// Per-frame voicing decision; voiced[t] is f0[t] > 0.
struct VoicingMask {
  std::vector<bool> voiced;

  std::size_t size() const { return voiced.size(); }
  std::size_t count_voiced() const;
  friend bool operator==(const VoicingMask&, const VoicingMask&) = default;
};

VoicingMask voicing_of(const std::vector<double>& f0);

struct FieldCounts {
  std::size_t finite = 0;
  std::size_t nan = 0;
  std::size_t inf = 0;
};

struct FeatureDiagnostics {
  std::size_t frame_count = 0;
  std::size_t voiced_count = 0;
  double voiced_fraction = 0.0;
  std::size_t negative_f0 = 0;
  FieldCounts f0;
  FieldCounts mcep;
  FieldCounts ap;

  bool ok() const {
    return negative_f0 == 0 && f0.nan + f0.inf + mcep.nan + mcep.inf + ap.nan + ap.inf == 0;
  }
};

FeatureDiagnostics validate(const UtteranceFeatures& feat);

// ---------------------------------------------------------------------------
// VCF1 binary format. Little-endian throughout:
//   "VCF1" | u32 version | f64 frame_period_ms | u32 sample_rate_hz | u32 T |
//   u32 D_mcep | u32 D_ap | f64 f0[T] | f64 mcep[T*D_mcep] | f64 ap[T*D_ap]
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kVcfVersion = 1;
inline constexpr std::size_t kVcfHeaderBytes = 32;

class FormatError : public Error {
 public:
  enum class Code { kBadMagic, kUnsupportedVersion, kBadHeader, kTruncated, kTrailingBytes, kNonFinite, kInvalidValue };

  FormatError(Code code, const std::string& what) : Error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

std::string encode_features(const UtteranceFeatures& feat);
UtteranceFeatures decode_features(std::string_view bytes);

/// Emits nothing when the value invariants fail.
void write_features(const UtteranceFeatures& feat, std::ostream& sink);
UtteranceFeatures read_features(std::istream& source);

void save_features(const UtteranceFeatures& feat, const std::string& path);
UtteranceFeatures load_features(const std::string& path);

}  // namespace cwtvc
