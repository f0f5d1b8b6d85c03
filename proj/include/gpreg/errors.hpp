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

#include <stdexcept>
#include <string>

namespace gpreg {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct NotDifferentiable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoSpectralDensity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoBRepresentation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmbeddingFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConditionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace gpreg
