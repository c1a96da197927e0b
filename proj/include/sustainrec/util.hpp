/**
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing,
 *  software distributed under the License is distributed on an "AS
 *  IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either
 *  express or implied.  See the License for the specific language
 *  governing permissions and limitations under the License.
 */

#ifndef SUSTAINREC_UTIL_HPP
#define SUSTAINREC_UTIL_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sustainrec {

/// Splits `s` on `sep`, keeping empty fields. Views point into `s`.
std::vector<std::string_view> split_view(std::string_view s, char sep);

bool parse_int64(std::string_view s, std::int64_t& out);
bool parse_double(std::string_view s, double& out);

/// Fixed-point formatting: format_fixed(1.5, 6) == "1.500000".
std::string format_fixed(double value, int decimals);

/// 17 significant digits; round-trips a double exactly through text.
std::string format_g17(double value);

/// Shortest decimal form that still round-trips the double exactly.
std::string format_shortest(double value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
bool file_exists(const std::string& path);

}  // namespace sustainrec

#endif  // SUSTAINREC_UTIL_HPP
