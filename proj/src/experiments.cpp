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

#include "lis/experiments.hpp"
#include "lis/errors.hpp"
#include "lis/parallel.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#ifndef LIS_ASSIGN_VERSION
#define LIS_ASSIGN_VERSION "0.0.0-dev"
#endif

namespace lis
{

namespace
{

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double z95 = 1.959963984540054;

std::string format_double(double v)
{
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{})
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// RFC 4180 record splitter; `pos` advances past the record's line break.
std::vector<std::string> next_record(std::string_view text, std::size_t &pos)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    while (pos < text.size())
    {
        const char c = text[pos++];
        if (quoted)
        {
            if (c == '"')
            {
                if (pos < text.size() && text[pos] == '"')
                {
                    fields.back() += '"';
                    ++pos;
                }
                else
                    quoted = false;
            }
            else
                fields.back() += c;
        }
        else if (c == '"')
            quoted = true;
        else if (c == ',')
            fields.emplace_back();
        else if (c == '\r')
            continue;
        else if (c == '\n')
            return fields;
        else
            fields.back() += c;
    }
    if (quoted)
        throw domain_error("csv: unterminated quoted field");
    return fields;
}

void write_text(const std::filesystem::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out)
        throw std::runtime_error("failed writing '" + path.string() + "'");
}

template <class T>
void hash_bytes(std::uint64_t &h, const T &value)
{
    const auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    for (unsigned char b : bits)
    {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
}

std::uint64_t scenario_digest(const Scenario &s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    hash_bytes(h, s.wavelength);
    hash_bytes(h, s.noise_density);
    for (const auto &u : s.units)
    {
        hash_bytes(h, u.center.x);
        hash_bytes(h, u.center.y);
        hash_bytes(h, u.side);
    }
    for (const auto &u : s.users)
    {
        hash_bytes(h, u.position.x);
        hash_bytes(h, u.position.y);
        hash_bytes(h, u.position.z);
        hash_bytes(h, u.power);
    }
    hash_bytes(h, static_cast<unsigned char>(s.hall.has_value()));
    return h;
}

std::size_t idx(Method m) { return static_cast<std::size_t>(m); }

void record(TrialReport &r, Method m, const CostMatrix &rates, std::span<const std::size_t> mapping)
{
    auto &ur = r.user_rates[idx(m)];
    ur.resize(mapping.size());
    for (std::size_t k = 0; k < mapping.size(); ++k)
        ur[k] = rates(k, mapping[k]);
    r.mapping[idx(m)].assign(mapping.begin(), mapping.end());
    if (is_sum_method(m))
        r.value[idx(m)] = std::accumulate(ur.begin(), ur.end(), 0.0);
    else
        r.value[idx(m)] = ur.empty() ? 0.0 : *std::min_element(ur.begin(), ur.end());
}

TrialReport failed_report(std::uint64_t seed, double sweep_value, const std::exception &e)
{
    TrialReport r;
    r.seed = seed;
    r.sweep_value = sweep_value;
    r.failed = true;
    r.error = e.what();
    r.value.fill(nan);
    return r;
}

} // namespace

std::string_view version_string() { return LIS_ASSIGN_VERSION; }

// ---- SIR ------------------------------------------------------------------

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples))
{
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::fraction_below(double x) const
{
    if (sorted_.empty())
        return 0.0;
    const auto n = std::lower_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
    return static_cast<double>(n) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::quantile(double p) const
{
    if (sorted_.empty())
        throw domain_error("quantile: empty sample");
    if (!(p > 0.0 && p <= 1.0))
        throw domain_error("quantile: p must lie in (0, 1]");
    const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted_.size())));
    return sorted_[std::clamp<std::size_t>(rank, 1, sorted_.size()) - 1];
}

EmpiricalCdf run_sir_study(const SirConfig &config, std::size_t n_trials, std::uint64_t seed, std::size_t jobs)
{
    if (n_trials == 0)
        throw domain_error("run_sir_study: need at least one trial");
    return EmpiricalCdf(sir_samples(config, n_trials, seed, jobs));
}

void emit_sir_csv(const EmpiricalCdf &cdf, const std::filesystem::path &path)
{
    std::string out = "rank,inv_sir_db,cdf\n";
    const auto n = cdf.size();
    for (std::size_t i = 0; i < n; ++i)
        out += std::to_string(i + 1) + "," + format_double(cdf.sorted()[i]) + "," +
               format_double(static_cast<double>(i + 1) / static_cast<double>(n)) + "\n";
    write_text(path, out);
}

// ---- methods ----------------------------------------------------------------

std::string_view to_string(Method method)
{
    switch (method)
    {
    case Method::lsap:
        return "lsap";
    case Method::lbap:
        return "lbap";
    case Method::brute_sum:
        return "brute_sum";
    case Method::brute_min:
        return "brute_min";
    case Method::random_sum:
        return "random_sum";
    case Method::random_min:
        return "random_min";
    case Method::center_lsap:
        return "center_lsap";
    case Method::center_lbap:
        return "center_lbap";
    }
    return "unknown";
}

bool is_sum_method(Method method)
{
    return method == Method::lsap || method == Method::brute_sum || method == Method::random_sum ||
           method == Method::center_lsap;
}

std::string_view to_string(SweepVariable variable)
{
    return variable == SweepVariable::side ? "side" : "power";
}

bool TrialReport::has(Method m) const { return !failed && !std::isnan(value[idx(m)]); }

TrialReport evaluate_trial(const Scenario &scenario, const CouplingTensor &tensor, bool with_center,
                           std::uint64_t cap)
{
    TrialReport r;
    r.value.fill(nan);
    r.scenario_digest = scenario_digest(scenario);

    const auto powers = user_powers(scenario);
    const double n0 = scenario.noise_density;
    const CostMatrix rates = rate_matrix(tensor, n0, powers);
    const CostMatrix cost = build_cost_matrix(tensor);

    record(r, Method::lsap, rates, solve_lsap(cost).assignment.unit_of_user);
    record(r, Method::lbap, rates, solve_lbap(cost).assignment.unit_of_user);
    record(r, Method::brute_sum, rates,
           brute_force_assign(tensor, Objective::sum_rate, n0, powers, cap).assignment.unit_of_user);
    record(r, Method::brute_min, rates,
           brute_force_assign(tensor, Objective::min_rate, n0, powers, cap).assignment.unit_of_user);
    r.value[idx(Method::random_sum)] = random_baseline(tensor, Objective::sum_rate, n0, powers, cap);
    r.value[idx(Method::random_min)] = random_baseline(tensor, Objective::min_rate, n0, powers, cap);

    if (with_center)
    {
        const CostMatrix center = build_cost_matrix_center(scenario);
        record(r, Method::center_lsap, rates, solve_lsap(center).assignment.unit_of_user);
        record(r, Method::center_lbap, rates, solve_lbap(center).assignment.unit_of_user);
    }
    return r;
}

// ---- sweeps ---------------------------------------------------------------

void SweepConfig::validate() const
{
    scenario.validate();
    quad.validate();
    if (grid.empty())
        throw domain_error("sweep: grid must not be empty");
    if (trials == 0)
        throw domain_error("sweep: trials must be at least 1");
    for (double v : grid)
    {
        if (!std::isfinite(v))
            throw domain_error("sweep: grid values must be finite");
        if (variable == SweepVariable::side && !(v > 0.0))
            throw domain_error("sweep: side grid values must be positive");
    }
    const auto size = assignment_space_size(scenario.num_users, scenario.num_units);
    if (size > cap)
        throw enumeration_cap_error(size, cap);
}

const MethodStat &SweepPoint::operator[](Method m) const
{
    const auto &s = stats[idx(m)];
    if (!s)
        throw domain_error("sweep point has no statistics for method " + std::string(to_string(m)));
    return *s;
}

SweepResult run_rate_sweep(const SweepConfig &config)
{
    config.validate();
    const std::size_t n_points = config.grid.size();
    const std::size_t T = config.trials;
    const bool center = config.rss_mode == RssMode::center;

    SweepResult result;
    result.variable = config.variable;
    result.trials = T;
    result.reports.assign(n_points, std::vector<TrialReport>(T));
    std::vector<std::size_t> unconverged(T, 0);

    parallel_for(T, config.jobs, [&](std::size_t t) {
        const std::uint64_t seed = trial_seed(config.seed, t);
        const auto users = sample_users(seed, config.scenario);

        auto run_point = [&](std::size_t i, const Scenario &scenario, const CouplingTensor &tensor) {
            auto &slot = result.reports[i][t];
            try
            {
                slot = evaluate_trial(scenario, tensor, center, config.cap);
            }
            catch (const std::exception &e)
            {
                slot = failed_report(seed, config.grid[i], e);
            }
            slot.seed = seed;
            slot.sweep_value = config.grid[i];
        };

        if (config.variable == SweepVariable::side)
        {
            for (std::size_t i = 0; i < n_points; ++i)
            {
                try
                {
                    ScenarioConfig cfg = config.scenario;
                    cfg.side = config.grid[i];
                    const Scenario scenario = make_scenario(cfg, users);
                    const CouplingTensor tensor = coupling_tensor(scenario, config.quad);
                    unconverged[t] += tensor.unconverged;
                    run_point(i, scenario, tensor);
                }
                catch (const std::exception &e)
                {
                    result.reports[i][t] = failed_report(seed, config.grid[i], e);
                }
            }
            return;
        }

        // Power sweep: the couplings do not depend on transmit power.
        std::optional<Scenario> base;
        std::optional<CouplingTensor> tensor;
        try
        {
            base = make_scenario(config.scenario, users);
            tensor = coupling_tensor(*base, config.quad);
            unconverged[t] += tensor->unconverged;
        }
        catch (const std::exception &e)
        {
            for (std::size_t i = 0; i < n_points; ++i)
                result.reports[i][t] = failed_report(seed, config.grid[i], e);
            return;
        }
        for (std::size_t i = 0; i < n_points; ++i)
        {
            Scenario scenario = *base;
            for (auto &u : scenario.users)
                u.power = db_to_linear(config.grid[i]);
            run_point(i, scenario, *tensor);
        }
    });

    result.unconverged_entries = std::accumulate(unconverged.begin(), unconverged.end(), std::size_t{0});
    const double K = static_cast<double>(config.scenario.num_users);
    for (std::size_t i = 0; i < n_points; ++i)
    {
        SweepPoint point;
        point.value = config.grid[i];
        point.side = config.variable == SweepVariable::side ? config.grid[i] : config.scenario.side;
        const double norm = K * point.side * point.side;
        const auto &reports = result.reports[i];
        point.failed = static_cast<std::size_t>(
            std::count_if(reports.begin(), reports.end(), [](const TrialReport &r) { return r.failed; }));
        result.failed += point.failed;

        for (Method m : all_methods)
        {
            std::vector<double> v;
            for (const auto &r : reports)
                if (r.has(m))
                    v.push_back(r[m]);
            if (v.empty())
                continue;
            const double n = static_cast<double>(v.size());
            const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
            double ss = 0.0;
            for (double x : v)
                ss += (x - mean) * (x - mean);
            const double sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
            point.stats[idx(m)] = MethodStat{mean, mean / norm, z95 * sd / std::sqrt(n) / norm, v.size()};
        }
        result.points.push_back(std::move(point));
    }
    return result;
}

// ---- CSV / manifest -------------------------------------------------------

std::string sweep_csv(const SweepResult &result)
{
    std::string out = "sweep_var,method,mean_rate_norm,ci_half_width,n_trials\n";
    for (const auto &p : result.points)
        for (Method m : all_methods)
        {
            if (!p.has(m))
                continue;
            const auto &s = p[m];
            out += format_double(p.value) + "," + csv_field(to_string(m)) + "," + format_double(s.mean_norm) + "," +
                   format_double(s.ci_half_width) + "," + std::to_string(s.n_trials) + "\n";
        }
    return out;
}

void emit_csv(const SweepResult &result, const std::filesystem::path &path) { write_text(path, sweep_csv(result)); }

std::vector<CsvRow> parse_sweep_csv(std::string_view text)
{
    std::size_t pos = 0;
    const auto header = next_record(text, pos);
    const std::vector<std::string> expected{"sweep_var", "method", "mean_rate_norm", "ci_half_width", "n_trials"};
    if (header != expected)
        throw domain_error("csv: unexpected header");

    auto number = [](const std::string &s) {
        double v{};
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw domain_error("csv: bad number '" + s + "'");
        return v;
    };

    std::vector<CsvRow> rows;
    while (pos < text.size())
    {
        const auto f = next_record(text, pos);
        if (f.size() == 1 && f[0].empty())
            continue;
        if (f.size() != 5)
            throw domain_error("csv: expected 5 fields per row");
        rows.push_back({number(f[0]), f[1], number(f[2]), number(f[3]), static_cast<std::size_t>(number(f[4]))});
    }
    return rows;
}

nlohmann::json to_json(const SweepConfig &c)
{
    const auto &s = c.scenario;
    nlohmann::json j;
    j["M"] = s.num_units;
    j["K"] = s.num_users;
    j["L"] = s.side;
    j["lambda"] = s.wavelength;
    j["n0"] = s.noise_density;
    j["power_linear"] = s.power;
    j["user_box"] = {s.user_box.x_min, s.user_box.x_max, s.user_box.y_min, s.user_box.y_max, s.user_box.z_max};
    if (s.hall)
        j["hall"] = {s.hall->x_min, s.hall->x_max, s.hall->y_min, s.hall->y_max, s.hall->z_back,
                     s.hall->attenuation_db};
    else
        j["hall"] = nullptr;
    j["sweep"] = std::string(to_string(c.variable));
    j["grid"] = c.grid;
    j["rss_mode"] = c.rss_mode == RssMode::center ? "center" : "full";
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["panel_fraction"] = c.quad.panel_fraction;
    j["nodes_per_panel"] = c.quad.nodes_per_panel;
    j["rel_tol"] = c.quad.rel_tol;
    j["check_refinement"] = c.quad.check_refinement;
    j["cap"] = c.cap;
    return j;
}

std::filesystem::path manifest_path_for(const std::filesystem::path &csv_path)
{
    auto p = csv_path;
    p += ".manifest.json";
    return p;
}

void write_manifest(const std::filesystem::path &path, const nlohmann::json &config, const nlohmann::json &summary)
{
    nlohmann::json j;
    j["version"] = std::string(version_string());
    j["seed"] = config.contains("seed") ? config["seed"] : nlohmann::json(nullptr);
    j["config"] = config;
    j["summary"] = summary;
    write_text(path, j.dump(2) + "\n");
}

SweepConfig sweep_config_from(const KeyValueDocument &doc)
{
    doc.require_known({"M", "K", "L", "lambda", "n0", "power_db", "user_box", "hall", "seed", "sweep", "grid",
                       "trials", "rss_mode", "cap", "panel_fraction", "nodes_per_panel", "rel_tol",
                       "check_refinement", "jobs"});
    if (doc.contains("user"))
        throw domain_error(doc.source() + ": sweeps sample their own users; 'user' lines are not allowed");

    SweepConfig c;
    const auto file = scenario_file_from(doc);
    c.scenario = file.config;
    c.seed = file.seed;

    if (auto v = doc.get("sweep"))
    {
        if (*v == "side" || *v == "L")
            c.variable = SweepVariable::side;
        else if (*v == "power" || *v == "power_db")
            c.variable = SweepVariable::power_db;
        else
            throw domain_error(doc.source() + ": sweep must be 'side' or 'power'");
    }
    c.grid = c.variable == SweepVariable::side ? default_side_grid : default_power_grid_db;
    if (auto v = doc.get_doubles("grid"))
        c.grid = *v;
    if (auto v = doc.get("rss_mode"))
    {
        if (*v == "full")
            c.rss_mode = RssMode::full;
        else if (*v == "center")
            c.rss_mode = RssMode::center;
        else
            throw domain_error(doc.source() + ": rss_mode must be 'full' or 'center'");
    }
    if (auto v = doc.get_size("trials"))
        c.trials = *v;
    if (auto v = doc.get_u64("cap"))
        c.cap = *v;
    if (auto v = doc.get_double("panel_fraction"))
        c.quad.panel_fraction = *v;
    if (auto v = doc.get_size("nodes_per_panel"))
        c.quad.nodes_per_panel = *v;
    if (auto v = doc.get_double("rel_tol"))
        c.quad.rel_tol = *v;
    if (auto v = doc.get_bool("check_refinement"))
        c.quad.check_refinement = *v;
    if (auto v = doc.get_size("jobs"))
        c.jobs = *v;
    c.validate();
    return c;
}

} // namespace lis
