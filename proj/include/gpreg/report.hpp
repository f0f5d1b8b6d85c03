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
#include <string>
#include <string_view>

#include "json.hpp"

#include "gpreg/asymptotics.hpp"
#include "gpreg/chaos.hpp"
#include "gpreg/conditions.hpp"
#include "gpreg/covstruct.hpp"
#include "gpreg/montecarlo.hpp"

namespace gpreg {

using Json = nlohmann::ordered_json;

const char* library_version();

struct RunConfig {
    std::string command;
    std::string kernel;
    Json params = Json::object();  // command-specific
    std::string output_format = "json";
    std::uint64_t seed = 0;
    int workers = 0;
};

Json to_json(const RunConfig& c);
RunConfig run_config_from_json(const Json& j);

// {"schema", "version", "seed", "config"} in that order
Json report_header(std::string_view schema, const RunConfig& config);

Json to_json(const NormCheck& c);
Json to_json(const A1Report& r);
Json to_json(const A2Report& r);
Json to_json(const GemanReport& r);
// condition-report/1
Json condition_report_json(const ConditionReport& r, const RunConfig& config);

Json to_json(const DecaySeries& s, bool with_entries = true);
Json to_json(const ChaosSpectrum& s);
Json to_json(const SobolevNorm& s);
Json to_json(const HsExpansion& h);
Json to_json(const QuadraticBoundFit& f);

Json to_json(const EmbeddingInfo& e);
Json to_json(const CrossingStats& s);
Json to_json(const MomentEstimate& m);
Json to_json(const MsResidual& m);

}  // namespace gpreg
