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

#include <atomic>
#include <chrono>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "cwtvc/features.h"

namespace cwtvc::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("cwtvc_test_" + std::to_string(::getpid()) + "_" + std::to_string(stamp) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& leaf = "") const { return leaf.empty() ? path_.string() : (path_ / leaf).string(); }

 private:
  std::filesystem::path path_;
};

/// Random utterance with voiced runs around 100-300 Hz and at least one
/// voiced frame.
inline UtteranceFeatures random_utterance(std::mt19937_64& rng, std::size_t frames, std::size_t mcep_dim = 24,
                                          std::size_t ap_dim = 2, double voiced_prob = 0.8) {
  std::uniform_real_distribution<double> hz(100.0, 300.0);
  std::bernoulli_distribution voiced(voiced_prob);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<double> f0(frames);
  for (auto& v : f0) v = voiced(rng) ? hz(rng) : 0.0;
  f0[frames / 2] = hz(rng);
  Matrix mcep(frames, mcep_dim), ap(frames, ap_dim);
  for (auto& v : mcep.data()) v = n01(rng);
  for (auto& v : ap.data()) v = n01(rng);
  return UtteranceFeatures(5.0, 16000, std::move(f0), std::move(mcep), std::move(ap));
}

}  // namespace cwtvc::testing
