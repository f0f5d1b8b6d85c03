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

#include "gpreg/report.hpp"

#include "gpreg/errors.hpp"

#ifndef GPREG_VERSION
#define GPREG_VERSION "0.0.0"
#endif

namespace gpreg {

const char* library_version() { return GPREG_VERSION; }

Json to_json(const RunConfig& c) {
    Json j;
    j["command"] = c.command;
    j["kernel"] = c.kernel;
    j["params"] = c.params;
    j["output_format"] = c.output_format;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    return j;
}

RunConfig run_config_from_json(const Json& j) {
    try {
        RunConfig c;
        c.command = j.at("command").get<std::string>();
        c.kernel = j.value("kernel", std::string());
        c.params = j.value("params", Json::object());
        c.output_format = j.value("output_format", std::string("json"));
        c.seed = j.value("seed", std::uint64_t(0));
        c.workers = j.value("workers", 0);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("run config: ") + e.what());
    }
}

Json report_header(std::string_view schema, const RunConfig& config) {
    Json j;
    j["schema"] = std::string(schema);
    j["version"] = library_version();
    j["seed"] = config.seed;
    j["config"] = to_json(config);
    return j;
}

Json to_json(const NormCheck& c) {
    return Json{{"finite", c.finite}, {"value", c.value}, {"error", c.error}, {"method", c.method}};
}

Json to_json(const A1Report& r) {
    Json j;
    j["b_in_L1"] = to_json(r.b_in_L1);
    j["b_in_L2"] = to_json(r.b_in_L2);
    j["b_in_Linf"] = to_json(r.b_in_Linf);
    j["bprime_in_L1"] = to_json(r.bprime_in_L1);
    j["bprime_in_L2"] = to_json(r.bprime_in_L2);
    j["bprime_in_Linf"] = to_json(r.bprime_in_Linf);
    j["b_L2_positive"] = r.b_L2_positive;
    j["holds"] = r.holds;
    j["representation"] = r.representation;
    return j;
}

Json to_json(const A2Report& r) {
    Json j;
    j["r2"] = r.r2_available ? Json(r.r2) : Json(nullptr);
    j["r4"] = r.r4_available ? Json(r.r4) : Json(nullptr);
    j["discriminant"] = r.r2_available && r.r4_available ? Json(r.discriminant) : Json(nullptr);
    j["r2_available"] = r.r2_available;
    j["r4_available"] = r.r4_available;
    j["holds"] = r.holds;
    return j;
}

Json to_json(const GemanReport& r) {
    Json j;
    j["delta"] = r.delta;
    j["integral"] = r.integral ? Json(*r.integral) : Json(nullptr);
    j["holds"] = r.holds;
    j["refinements"] = r.refinements;
    j["last_increment"] = r.last_increment;
    return j;
}

Json condition_report_json(const ConditionReport& r, const RunConfig& config) {
    Json j = report_header("condition-report/1", config);
    j["kernel"] = r.kernel;
    j["a1"] = to_json(r.a1);
    j["a2"] = to_json(r.a2);
    j["geman"] = to_json(r.geman);
    j["notes"] = r.notes;
    return j;
}

Json to_json(const DecaySeries& s, bool with_entries) {
    Json j;
    j["fitted_slope"] = s.fitted_slope;
    j["fitted_log_constant"] = s.fitted_log_constant;
    j["fit_window"] = {s.fit_window.first, s.fit_window.second};
    j["residual"] = s.residual;
    j["pinned_slope"] = s.pinned_slope;
    j["pinned_constant"] = s.pinned_constant;
    j["points"] = s.points;
    if (with_entries) {
        Json e = Json::array();
        for (const auto& [n, v] : s.entries) e.push_back({n, v});
        j["entries"] = e;
    }
    return j;
}

Json to_json(const ChaosSpectrum& s) {
    Json j;
    j["functional"] = s.functional;
    j["kernel"] = s.kernel;
    j["n_max"] = s.n_max;
    j["point_norms"] = s.point_norms;
    j["integrated_norms"] = s.integrated_norms;
    j["truncation_tail_bound"] = s.truncation_tail_bound;
    return j;
}

Json to_json(const SobolevNorm& s) {
    return Json{{"value", s.value}, {"converged", s.converged}, {"tail_change", s.tail_change}};
}

Json to_json(const HsExpansion& h) {
    Json j;
    j["first"] = h.first;
    j["second"] = h.second;
    j["second_error"] = h.second_error;
    j["second_analytic"] = h.second_analytic;
    j["second_printed"] = h.second_printed;
    return j;
}

Json to_json(const QuadraticBoundFit& f) {
    Json j;
    j["norm"] = f.norm == BoundNorm::Operator ? "operator" : "normalized_hs";
    j["c_hat"] = f.c_hat;
    j["c_prime"] = f.c_prime;
    j["intercept"] = f.intercept;
    j["slope"] = f.slope;
    j["std_error"] = f.std_error;
    j["min_ratio"] = f.min_ratio;
    j["max_ratio"] = f.max_ratio;
    j["samples"] = f.samples;
    j["holds"] = f.holds;
    return j;
}

Json to_json(const EmbeddingInfo& e) {
    Json j;
    j["grid_points"] = e.grid_points;
    j["size"] = e.size;
    j["period"] = e.period;
    j["tail_r"] = e.tail_r;
    j["tail_dr"] = e.tail_dr;
    j["min_eigen_ratio"] = e.min_eigen_ratio;
    j["clipped"] = e.clipped;
    j["clipped_mass"] = e.clipped_mass;
    j["doublings"] = e.doublings;
    j["tapered"] = e.tapered;
    return j;
}

Json to_json(const CrossingStats& s) {
    Json j;
    j["level"] = s.level;
    j["n_paths"] = s.n_paths;
    j["grid_points"] = s.grid_points;
    j["mean"] = s.mean;
    j["variance"] = s.variance;
    j["std_error"] = s.std_error;
    j["second_moment"] = s.second_moment;
    j["second_moment_std_error"] = s.second_moment_std_error;
    j["rice_mean"] = s.rice_mean;
    j["embedding"] = to_json(s.embedding);
    return j;
}

Json to_json(const MomentEstimate& m) {
    Json j;
    j["functional"] = m.functional;
    j["n_paths"] = m.n_paths;
    j["grid_points"] = m.grid_points;
    j["mean"] = m.mean;
    j["mean_std_error"] = m.mean_std_error;
    j["second_moment"] = m.second_moment;
    j["std_error"] = m.std_error;
    j["embedding"] = to_json(m.embedding);
    return j;
}

Json to_json(const MsResidual& m) {
    Json j;
    j["h"] = m.h;
    j["analytic"] = m.analytic;
    j["mc_mean"] = m.mc_mean;
    j["mc_std_error"] = m.mc_std_error;
    j["n_paths"] = m.n_paths;
    j["grid_points"] = m.grid_points;
    return j;
}

}  // namespace gpreg
