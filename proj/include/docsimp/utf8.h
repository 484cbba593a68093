// Copyright 2026 The docsimp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DOCSIMP_UTF8_H_
#define DOCSIMP_UTF8_H_

#include <string>
#include <string_view>
#include <vector>

namespace docsimp::utf8 {

// Byte length of the code point starting at s[i]. Malformed sequences are
// consumed one byte at a time.
std::size_t sequence_length(std::string_view s, std::size_t i);

// Splits into code points, each returned as its UTF-8 byte string.
std::vector<std::string> split_code_points(std::string_view s);

// Decodes to UTF-32; malformed bytes map to U+FFFD.
std::u32string decode(std::string_view s);

std::string encode(char32_t cp);

}  // namespace docsimp::utf8

#endif  // DOCSIMP_UTF8_H_
