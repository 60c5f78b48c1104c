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

#include "cwtvc/nn/checkpoint.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>

#include "../byte_io.h"
#include "cwtvc/features.h"

namespace cwtvc::nn {

std::string encode_checkpoint(const std::vector<Parameter>& params) {
  std::string out("VCM1", 4);
  detail::put_u32(out, kVcmVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& p : params) {
    if (p.name.size() > std::numeric_limits<std::uint16_t>::max())
      throw InvalidArgument("checkpoint: parameter name too long");
    if (p.value.rank() > std::numeric_limits<std::uint8_t>::max())
      throw InvalidArgument("checkpoint: rank too large");
    detail::put_u16(out, static_cast<std::uint16_t>(p.name.size()));
    out += p.name;
    detail::put_u8(out, static_cast<std::uint8_t>(p.value.rank()));
    for (auto d : p.value.shape()) detail::put_u32(out, static_cast<std::uint32_t>(d));
    for (double v : p.value.values()) detail::put_f64(out, v);
  }
  return out;
}

std::vector<Parameter> decode_checkpoint(std::string_view bytes) {
  using Code = FormatError::Code;
  detail::ByteReader in(bytes);
  auto truncated = [] { return FormatError(Code::kTruncated, "VCM1: truncated"); };

  char magic[4];
  if (!in.take(magic, 4)) throw truncated();
  if (std::string_view(magic, 4) != "VCM1") throw FormatError(Code::kBadMagic, "VCM1: bad magic");
  auto version = in.get_u32();
  auto count = in.get_u32();
  if (!count) throw truncated();
  if (*version != kVcmVersion)
    throw FormatError(Code::kUnsupportedVersion, "VCM1: unsupported version " + std::to_string(*version));

  std::vector<Parameter> params;
  for (std::uint32_t k = 0; k < *count; ++k) {
    auto len = in.get_u16();
    if (!len) throw truncated();
    std::string name(*len, '\0');
    if (!in.take(name.data(), *len)) throw truncated();
    auto rank = in.get_u8();
    if (!rank) throw truncated();
    if (*rank == 0) throw FormatError(Code::kBadHeader, "VCM1: rank 0 for '" + name + "'");
    Shape shape;
    std::uint64_t n = 1;
    for (std::uint8_t r = 0; r < *rank; ++r) {
      auto d = in.get_u32();
      if (!d) throw truncated();
      if (*d == 0) throw FormatError(Code::kBadHeader, "VCM1: zero extent for '" + name + "'");
      shape.push_back(*d);
      n *= *d;
    }
    if (in.remaining() / 8 < n) throw truncated();
    std::vector<double> data(n);
    for (auto& v : data) {
      v = *in.get_f64();
      if (!std::isfinite(v)) throw FormatError(Code::kNonFinite, "VCM1: non-finite value in '" + name + "'");
    }
    Parameter p{std::move(name), Tensor(std::move(shape), std::move(data)), Tensor()};
    p.zero_grad();
    params.push_back(std::move(p));
  }
  if (in.remaining() != 0) throw FormatError(Code::kTrailingBytes, "VCM1: trailing bytes");
  return params;
}

void assign_parameters(Network& net, const std::vector<Parameter>& loaded) {
  std::map<std::string, const Parameter*> by_name;
  for (const auto& p : loaded)
    if (!by_name.emplace(p.name, &p).second) throw InvalidArgument("checkpoint: duplicate parameter '" + p.name + "'");
  if (by_name.size() != net.parameters().size())
    throw InvalidArgument("checkpoint: holds " + std::to_string(by_name.size()) + " parameters, network has " +
                          std::to_string(net.parameters().size()));
  for (const auto& p : net.parameters()) {
    auto it = by_name.find(p.name);
    if (it == by_name.end()) throw InvalidArgument("checkpoint: missing parameter '" + p.name + "'");
    if (it->second->value.shape() != p.value.shape())
      throw InvalidArgument("checkpoint: shape mismatch for '" + p.name + "': " +
                            shape_string(it->second->value.shape()) + " vs " + shape_string(p.value.shape()));
  }
  for (auto& p : net.parameters()) {
    p.value = by_name.at(p.name)->value;
    p.zero_grad();
  }
}

void save_checkpoint(const Network& net, const std::string& path) {
  const std::string bytes = encode_checkpoint(net.parameters());
  // Write-then-rename: an interrupted save leaves the previous file intact.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw IoError("cannot rename " + tmp + " to " + path);
}

void load_checkpoint(Network& net, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  assign_parameters(net, decode_checkpoint(bytes));
}

}  // namespace cwtvc::nn
