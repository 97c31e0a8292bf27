// Copyright 2026 The ksep Authors
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

#ifndef KSEP_CLI_H
#define KSEP_CLI_H

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "ksep/states.h"

namespace ksep::cli {

/// Process exit codes. These are part of the command-line interface.
enum ExitCode : int {
    kInconclusive = 0,
    kCheckFailed = 1,
    kInputError = 2,
    kDetected = 10,
};

/// A parsed family descriptor such as "ghz:n=3,d=2" or "mixed:I,n=3".
struct FamilySpec {
    std::string name;
    std::map<std::string, std::string> params;
    std::vector<std::string> flags;

    /// Throws FormatError on malformed text.
    static FamilySpec parse(const std::string &text);
};

/// Builds the state named by a family descriptor. Supported families:
///   ghz:n=N[,d=D]            mixed:I,n=N[,d=D]       product:n=N[,d=D]
///   w:n=N                    noisy-ghz:n=N,p=P[,d=D]  noisy-w:n=N,p=P
///   separable:n=N[,d=D][,terms=T][,seed=S]   random:n=N[,d=D][,rank=R][,seed=S]
DensityMatrix build_family(const std::string &descriptor);

/// Runs the command line `args` (args[0] is the program name). Machine
/// output goes to `out`, diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace ksep::cli

#endif
