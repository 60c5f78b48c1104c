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

// Flat "key = value" text shared by the stats files and the config format.

#include <cstdint>
#include <string>
#include <vector>

namespace cwtvc {

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

/// Splits text into key/value entries. Blank lines and '#' comments are
/// skipped; a line without '=' or with an empty key throws InvalidArgument.
/// Duplicate keys throw as well.
std::vector<KeyValue> parse_key_values(const std::string& text);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

double parse_double(const std::string& key, const std::string& value);
std::int64_t parse_int(const std::string& key, const std::string& value);
std::uint64_t parse_uint(const std::string& key, const std::string& value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace cwtvc
