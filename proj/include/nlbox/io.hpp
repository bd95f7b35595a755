// Copyright 2026 The nlbox Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Number formatting shared by the CSV writers and the CLI.

#ifndef NLBOX_IO_HPP_
#define NLBOX_IO_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace nlbox {

inline constexpr int kFullPrecision = 17;

// Shortest "%g"-style rendering with at most `digits` significant digits.
// Negative zero prints as "0".
std::string format_double(double value, int digits = kFullPrecision);

// Strict full-string parse; throws std::invalid_argument on trailing junk.
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

std::vector<std::string> split(std::string_view line, char sep);
std::string_view trim(std::string_view text);

}  // namespace nlbox

#endif  // NLBOX_IO_HPP_
