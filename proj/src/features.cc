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

#include "cwtvc/features.h"

#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "byte_io.h"

namespace cwtvc {

UtteranceFeatures::UtteranceFeatures(double frame_period_ms, std::uint32_t sample_rate_hz,
                                     std::vector<double> f0, Matrix mcep, Matrix ap)
    : frame_period_ms_(frame_period_ms),
      sample_rate_hz_(sample_rate_hz),
      f0_(std::move(f0)),
      mcep_(std::move(mcep)),
      ap_(std::move(ap)) {
  if (f0_.empty()) throw InvalidArgument("UtteranceFeatures: at least one frame required");
  if (mcep_.rows() != f0_.size())
    throw InvalidArgument("UtteranceFeatures: mcep frame count differs from f0");
  // A zero-width AP matrix still carries the frame count.
  if (ap_.cols() > 0 && ap_.rows() != f0_.size())
    throw InvalidArgument("UtteranceFeatures: ap frame count differs from f0");
  if (ap_.cols() == 0) ap_ = Matrix(f0_.size(), 0);
  if (!(frame_period_ms_ > 0.0) || !std::isfinite(frame_period_ms_))
    throw InvalidArgument("UtteranceFeatures: frame period must be positive");
  if (sample_rate_hz_ == 0) throw InvalidArgument("UtteranceFeatures: sample rate must be positive");
}

void UtteranceFeatures::check_values() const {
  for (std::size_t t = 0; t < f0_.size(); ++t) {
    if (!std::isfinite(f0_[t])) throw InvalidArgument("f0 is not finite at frame " + std::to_string(t));
    if (f0_[t] < 0.0) throw InvalidArgument("f0 is negative at frame " + std::to_string(t));
  }
  for (double v : mcep_.data())
    if (!std::isfinite(v)) throw InvalidArgument("mcep contains a non-finite value");
  for (double v : ap_.data())
    if (!std::isfinite(v)) throw InvalidArgument("ap contains a non-finite value");
}

std::size_t VoicingMask::count_voiced() const {
  std::size_t n = 0;
  for (bool v : voiced) n += v ? 1 : 0;
  return n;
}

VoicingMask voicing_of(const std::vector<double>& f0) {
  VoicingMask mask;
  mask.voiced.reserve(f0.size());
  for (double v : f0) mask.voiced.push_back(v > 0.0);
  return mask;
}

namespace {

void count_into(FieldCounts& c, double v) {
  if (std::isnan(v))
    ++c.nan;
  else if (std::isinf(v))
    ++c.inf;
  else
    ++c.finite;
}

}  // namespace

FeatureDiagnostics validate(const UtteranceFeatures& feat) {
  FeatureDiagnostics d;
  d.frame_count = feat.frames();
  for (double v : feat.f0()) {
    count_into(d.f0, v);
    if (v > 0.0) ++d.voiced_count;
    if (v < 0.0) ++d.negative_f0;
  }
  for (double v : feat.mcep().data()) count_into(d.mcep, v);
  for (double v : feat.ap().data()) count_into(d.ap, v);
  d.voiced_fraction = static_cast<double>(d.voiced_count) / static_cast<double>(d.frame_count);
  return d;
}

std::string encode_features(const UtteranceFeatures& feat) {
  feat.check_values();
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (feat.frames() > kMax || feat.mcep_dim() > kMax || feat.ap_dim() > kMax)
    throw InvalidArgument("encode_features: dimensions exceed u32 range");

  std::string out;
  out.reserve(kVcfHeaderBytes +
              8 * feat.frames() * (1 + feat.mcep_dim() + feat.ap_dim()));
  out.append("VCF1", 4);
  detail::put_u32(out, kVcfVersion);
  detail::put_f64(out, feat.frame_period_ms());
  detail::put_u32(out, feat.sample_rate_hz());
  detail::put_u32(out, static_cast<std::uint32_t>(feat.frames()));
  detail::put_u32(out, static_cast<std::uint32_t>(feat.mcep_dim()));
  detail::put_u32(out, static_cast<std::uint32_t>(feat.ap_dim()));
  for (double v : feat.f0()) detail::put_f64(out, v);
  for (double v : feat.mcep().data()) detail::put_f64(out, v);
  for (double v : feat.ap().data()) detail::put_f64(out, v);
  return out;
}

UtteranceFeatures decode_features(std::string_view bytes) {
  using Code = FormatError::Code;
  detail::ByteReader in(bytes);

  char magic[4];
  if (!in.take(magic, 4)) throw FormatError(Code::kTruncated, "VCF1: truncated header");
  if (std::string_view(magic, 4) != "VCF1") throw FormatError(Code::kBadMagic, "VCF1: bad magic");

  auto version = in.get_u32();
  auto period = in.get_f64();
  auto rate = in.get_u32();
  auto frames = in.get_u32();
  auto d_mcep = in.get_u32();
  auto d_ap = in.get_u32();
  if (!d_ap) throw FormatError(Code::kTruncated, "VCF1: truncated header");
  if (*version != kVcfVersion)
    throw FormatError(Code::kUnsupportedVersion, "VCF1: unsupported version " + std::to_string(*version));
  if (*frames == 0) throw FormatError(Code::kBadHeader, "VCF1: zero frames");
  if (*rate == 0) throw FormatError(Code::kBadHeader, "VCF1: zero sample rate");
  if (!std::isfinite(*period) || !(*period > 0.0))
    throw FormatError(Code::kBadHeader, "VCF1: invalid frame period");

  const std::uint64_t t = *frames;
  const std::uint64_t expected = 8 * t * (1 + std::uint64_t{*d_mcep} + std::uint64_t{*d_ap});
  if (in.remaining() < expected)
    throw FormatError(Code::kTruncated, "VCF1: payload holds " + std::to_string(in.remaining()) +
                                            " bytes, header promises " + std::to_string(expected));
  if (in.remaining() > expected) throw FormatError(Code::kTrailingBytes, "VCF1: trailing bytes after payload");

  auto read_block = [&](std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) {
      x = *in.get_f64();
      if (!std::isfinite(x)) throw FormatError(Code::kNonFinite, "VCF1: non-finite value in payload");
    }
    return v;
  };
  std::vector<double> f0 = read_block(t);
  for (double v : f0)
    if (v < 0.0) throw FormatError(Code::kInvalidValue, "VCF1: negative f0");
  Matrix mcep(t, *d_mcep, read_block(t * *d_mcep));
  Matrix ap(t, *d_ap, read_block(t * *d_ap));
  return UtteranceFeatures(*period, *rate, std::move(f0), std::move(mcep), std::move(ap));
}

void write_features(const UtteranceFeatures& feat, std::ostream& sink) {
  const std::string bytes = encode_features(feat);
  sink.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!sink) throw IoError("write_features: sink write failed");
}

UtteranceFeatures read_features(std::istream& source) {
  std::string bytes{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
  if (source.bad()) throw IoError("read_features: source read failed");
  return decode_features(bytes);
}

void save_features(const UtteranceFeatures& feat, const std::string& path) {
  const std::string bytes = encode_features(feat);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

UtteranceFeatures load_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_features(in);
}

}  // namespace cwtvc
