/*
   Copyright 2026 The gpreg Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gpreg {

enum ExitCode { kExitOk = 0, kExitUsage = 2, kExitEvaluation = 3 };

// args excludes the program name; reports go to --out or `out`, diagnostics to `err`
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// GPREG_WORKERS, or 0 (hardware concurrency) when unset; throws ParseError when malformed
int workers_from_environment();

}  // namespace gpreg
