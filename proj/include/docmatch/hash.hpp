// Copyright 2026 The docmatch Authors.
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

#pragma once

#include <string>
#include <string_view>

namespace docmatch {

// Hex SHA-1 of `bytes`.
std::string sha1_hex(std::string_view bytes);

// Hex SHA-1 in git blob form ("blob <len>\0" + bytes), matching `git hash-object`.
std::string git_blob_hash(std::string_view bytes);

}  // namespace docmatch
