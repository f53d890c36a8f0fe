// SPDX-License-Identifier: Apache-2.0
//
// lis-assign: user assignment for distributed large intelligent surfaces
// Copyright (C) 2026 The lis-assign authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "lis/assign.hpp"
#include "lis/config.hpp"
#include "lis/field.hpp"
#include "lis/scenario.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace lis
{

std::string_view version_string();

// ---- SIR study --------------------------------------------------------------

class EmpiricalCdf
{
public:
    explicit EmpiricalCdf(std::vector<double> samples);

    const std::vector<double> &sorted() const { return sorted_; }
    std::size_t size() const { return sorted_.size(); }

    // Fraction of samples strictly below x.
    double fraction_below(double x) const;
    // Smallest sample s with fraction_at_or_below(s) >= p, p in (0, 1].
    double quantile(double p) const;

private:
    std::vector<double> sorted_;
};

EmpiricalCdf run_sir_study(const SirConfig &config, std::size_t n_trials, std::uint64_t seed, std::size_t jobs = 1);

// Columns: rank, inv_sir_db, cdf.
void emit_sir_csv(const EmpiricalCdf &cdf, const std::filesystem::path &path);

// ---- rate sweeps ------------------------------------------------------------

enum class Method : std::size_t
{
    lsap,
    lbap,
    brute_sum,
    brute_min,
    random_sum,
    random_min,
    center_lsap,
    center_lbap,
};

inline constexpr std::size_t method_count = 8;
inline constexpr std::array<Method, method_count> all_methods{Method::lsap,       Method::lbap,       Method::brute_sum,
                                                              Method::brute_min,  Method::random_sum, Method::random_min,
                                                              Method::center_lsap, Method::center_lbap};

std::string_view to_string(Method method);

// True sum-rate for sum-type methods, true min-rate for min-type methods.
bool is_sum_method(Method method);

enum class SweepVariable
{
    side,     // L in meters
    power_db, // transmit power in dB
};

std::string_view to_string(SweepVariable variable);

enum class RssMode
{
    full,   // quadrature self-coupling only
    center, // additionally run the center-point estimate
};

struct TrialReport
{
    std::uint64_t seed = 0;
    std::uint64_t scenario_digest = 0;
    double sweep_value = 0.0;
    bool failed = false;
    std::string error;

    // NaN when the method was not run.
    std::array<double, method_count> value{};
    // Per-user true rates under the method's assignment (empty for random baselines).
    std::array<std::vector<double>, method_count> user_rates;
    std::array<std::vector<std::size_t>, method_count> mapping;

    double operator[](Method m) const { return value[static_cast<std::size_t>(m)]; }
    bool has(Method m) const;
};

// Evaluates every method for one realization. The tensor must belong to the scenario.
TrialReport evaluate_trial(const Scenario &scenario, const CouplingTensor &tensor, bool with_center,
                           std::uint64_t cap = default_enumeration_cap);

struct SweepConfig
{
    ScenarioConfig scenario;
    SweepVariable variable = SweepVariable::side;
    std::vector<double> grid{0.1, 0.2, 0.3, 0.5, 0.75, 1.0};
    RssMode rss_mode = RssMode::full;
    std::size_t trials = 2000;
    std::uint64_t seed = 1;
    QuadratureSpec quad;
    std::uint64_t cap = default_enumeration_cap;
    std::size_t jobs = 1;

    void validate() const;
};

inline const std::vector<double> default_side_grid{0.1, 0.2, 0.3, 0.5, 0.75, 1.0};
inline const std::vector<double> default_power_grid_db{0, 5, 10, 15, 20, 25, 30};

struct MethodStat
{
    double mean = 0.0;          // raw mean of the rate objective
    double mean_norm = 0.0;     // mean / (K L^2)
    double ci_half_width = 0.0; // 95% normal approximation, normalized units
    std::size_t n_trials = 0;
};

struct SweepPoint
{
    double value = 0.0; // L or P_dB
    double side = 0.0;
    std::array<std::optional<MethodStat>, method_count> stats;
    std::size_t failed = 0;

    const MethodStat &operator[](Method m) const;
    bool has(Method m) const { return stats[static_cast<std::size_t>(m)].has_value(); }
};

struct SweepResult
{
    SweepVariable variable = SweepVariable::side;
    std::vector<SweepPoint> points;
    std::size_t trials = 0;
    std::size_t failed = 0;
    std::size_t unconverged_entries = 0;
    // reports[point][trial], trial order.
    std::vector<std::vector<TrialReport>> reports;
};

SweepResult run_rate_sweep(const SweepConfig &config);

// One row per (grid point, method): sweep_var, method, mean_rate_norm, ci_half_width, n_trials.
void emit_csv(const SweepResult &result, const std::filesystem::path &path);
std::string sweep_csv(const SweepResult &result);

struct CsvRow
{
    double sweep_var = 0.0;
    std::string method;
    double mean_rate_norm = 0.0;
    double ci_half_width = 0.0;
    std::size_t n_trials = 0;
};

std::vector<CsvRow> parse_sweep_csv(std::string_view text);

nlohmann::json to_json(const SweepConfig &config);

// Writes the config echo, seed and version next to a CSV.
void write_manifest(const std::filesystem::path &path, const nlohmann::json &config, const nlohmann::json &summary);
std::filesystem::path manifest_path_for(const std::filesystem::path &csv_path);

// Sweep keys on top of the scenario keys: sweep, grid, trials, rss_mode, cap,
// panel_fraction, nodes_per_panel, rel_tol, check_refinement, jobs.
SweepConfig sweep_config_from(const KeyValueDocument &doc);

} // namespace lis
