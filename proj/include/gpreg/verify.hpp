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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpreg/report.hpp"

namespace gpreg {

struct Check {
    std::string name;
    double value = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    std::string relation;  // how value, target and tolerance are compared
    bool passed = false;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool skipped = false;
    std::string skip_reason;
    std::vector<Check> checks;
    Json data = Json::object();
    double seconds = 0.0;
    double budget_seconds = 0.0;

    bool checks_passed() const;
    bool within_budget() const { return seconds <= budget_seconds; }
    bool passed() const { return !skipped && checks_passed() && within_budget(); }
};

struct VerifyOptions {
    std::uint64_t seed = 0;
    int workers = 0;
    int paths = 100000;
    int grid = 2048;
    // empty: the fixed acceptance kernels; otherwise every kernel-dependent check runs on this kernel
    std::optional<std::string> kernel;
};

constexpr int kCriteria = 10;

const char* criterion_title(int id);
// criteria 1..10; 11 compares two CLI runs and lives in the acceptance driver
CriterionResult run_criterion(int id, const VerifyOptions& opt);
std::vector<CriterionResult> run_suite(const VerifyOptions& opt);

Json to_json(const Check& c);
// timing and pass/fail are kept under "timing" and "passed"; "checks" and "data" are reproducible
Json to_json(const CriterionResult& r);
// verify-report/1
Json verify_report_json(const std::vector<CriterionResult>& results, const RunConfig& config);

}  // namespace gpreg
