// Copyright 2026 The phonctx Authors
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

#ifndef PHONCTX_TOOLS_CLI_H_
#define PHONCTX_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace phonctx::cli {

// args follows argv: args[0] is the program name. Exit status: 0 success,
// 1 domain error, 2 usage error.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phonctx::cli

#endif  // PHONCTX_TOOLS_CLI_H_
