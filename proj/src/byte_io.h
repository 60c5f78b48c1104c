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

// Little-endian byte packing shared by the binary formats.

#include <bit>
#include <cstdint>
#include <cstring>
#include <optional>
#include <string>
#include <string_view>

namespace cwtvc::detail {

inline void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

template <typename U>
void put_uint(std::string& out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

inline void put_u16(std::string& out, std::uint16_t v) { put_uint(out, v); }
inline void put_u32(std::string& out, std::uint32_t v) { put_uint(out, v); }
inline void put_f64(std::string& out, double v) { put_uint(out, std::bit_cast<std::uint64_t>(v)); }

// Sequential reader over a byte buffer. Every getter returns nullopt once
// the buffer is exhausted.
class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }

  bool take(void* dst, std::size_t n) {
    if (remaining() < n) return false;
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
    return true;
  }

  template <typename U>
  std::optional<U> get_uint() {
    unsigned char buf[sizeof(U)];
    if (!take(buf, sizeof(U))) return std::nullopt;
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf[i]) << (8 * i);
    return v;
  }

  std::optional<std::uint8_t> get_u8() { return get_uint<std::uint8_t>(); }
  std::optional<std::uint16_t> get_u16() { return get_uint<std::uint16_t>(); }
  std::optional<std::uint32_t> get_u32() { return get_uint<std::uint32_t>(); }
  std::optional<double> get_f64() {
    auto bits = get_uint<std::uint64_t>();
    if (!bits) return std::nullopt;
    return std::bit_cast<double>(*bits);
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace cwtvc::detail
