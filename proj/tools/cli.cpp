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

#include "cli.hpp"

#include "lis/assign.hpp"
#include "lis/config.hpp"
#include "lis/errors.hpp"
#include "lis/experiments.hpp"
#include "lis/parallel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <numeric>

namespace lis::cli
{

namespace
{

struct QuadFlags
{
    double panel_fraction = QuadratureSpec{}.panel_fraction;
    std::size_t nodes_per_panel = QuadratureSpec{}.nodes_per_panel;
    double rel_tol = QuadratureSpec{}.rel_tol;
    bool no_refinement = false;

    void add_to(CLI::App &app)
    {
        app.add_option("--panel-fraction", panel_fraction, "Max quadrature panel side as a fraction of lambda")
            ->capture_default_str()
            ->check(CLI::Range(1e-6, 1.0));
        app.add_option("--nodes-per-panel", nodes_per_panel, "Gauss-Legendre nodes per panel and dimension")
            ->capture_default_str()
            ->check(CLI::Range(2, 64));
        app.add_option("--rel-tol", rel_tol, "Relative tolerance of the refinement check")->capture_default_str();
        app.add_flag("--no-refinement-check", no_refinement, "Skip the panel-doubling accuracy check");
    }

    QuadratureSpec spec() const
    {
        QuadratureSpec q;
        q.panel_fraction = panel_fraction;
        q.nodes_per_panel = nodes_per_panel;
        q.rel_tol = rel_tol;
        q.check_refinement = !no_refinement;
        return q;
    }
};

void print_table_row(std::ostream &out, const std::vector<std::string> &cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i)
        out << (i == 0 ? "" : "  ") << std::setw(i == 0 ? 10 : 14) << cells[i];
    out << "\n";
}

std::string fixed(double v, int digits = 6)
{
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

// ---- sir --------------------------------------------------------------------

struct SirOptions
{
    SirConfig config;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::string out = "sir_cdf.csv";
    std::size_t jobs = default_jobs();
    double threshold_db = -20.0;
    QuadFlags quad;
};

int cmd_sir(const SirOptions &o, std::ostream &out)
{
    SirConfig cfg = o.config;
    cfg.quad = o.quad.spec();
    const auto cdf = run_sir_study(cfg, o.trials, o.seed, o.jobs);
    emit_sir_csv(cdf, o.out);

    nlohmann::json config{{"side", cfg.side},
                          {"lambda", cfg.wavelength},
                          {"half_width", cfg.half_width},
                          {"z_max", cfg.z_max},
                          {"trials", o.trials},
                          {"seed", o.seed},
                          {"panel_fraction", cfg.quad.panel_fraction},
                          {"nodes_per_panel", cfg.quad.nodes_per_panel}};
    const double fraction = cdf.fraction_below(o.threshold_db);
    write_manifest(manifest_path_for(o.out), config,
                   {{"threshold_db", o.threshold_db}, {"fraction_below", fraction}, {"median_db", cdf.quantile(0.5)}});

    out << "trials: " << o.trials << "\n";
    out << "fraction of 1/SIR below " << o.threshold_db << " dB: " << fixed(fraction, 4) << "\n";
    out << "median 1/SIR: " << fixed(cdf.quantile(0.5), 2) << " dB\n";
    out << "wrote " << o.out << "\n";
    return exit_ok;
}

// ---- assign -----------------------------------------------------------------

struct AssignOptions
{
    std::string scenario_path;
    std::string objective = "sum_rate";
    std::string method = "lsap";
    std::string out;
    std::uint64_t cap = default_enumeration_cap;
    std::optional<std::uint64_t> seed;
    QuadFlags quad;
};

int cmd_assign(const AssignOptions &o, std::ostream &out)
{
    const auto doc = KeyValueDocument::load(o.scenario_path);
    doc.require_known(scenario_keys);
    auto file = scenario_file_from(doc);
    if (o.seed)
        file.seed = *o.seed;
    const Scenario scenario = file.build();
    const Objective objective = parse_objective(o.objective);
    if (objective == Objective::sum_cost || objective == Objective::bottleneck_cost)
        throw domain_error("assign: --objective must be sum_rate, min_rate, sum_rss or min_rss");
    const bool sum_type = objective == Objective::sum_rate || objective == Objective::sum_rss;

    // Refuse before spending time on quadrature.
    if (o.method == "brute")
    {
        const auto size = assignment_space_size(scenario.num_users(), scenario.num_units());
        if (size > o.cap)
            throw enumeration_cap_error(size, o.cap);
    }

    const auto quad = o.quad.spec();
    const auto tensor = coupling_tensor(scenario, quad);
    const auto powers = user_powers(scenario);
    const auto rates = rate_matrix(tensor, scenario.noise_density, powers);

    Assignment assignment;
    std::optional<std::uint64_t> evaluated;
    if (o.method == "lsap")
        assignment = solve_lsap(build_cost_matrix(tensor)).assignment;
    else if (o.method == "lbap")
        assignment = solve_lbap(build_cost_matrix(tensor)).assignment;
    else if (o.method == "center")
    {
        const auto cost = build_cost_matrix_center(scenario);
        assignment = sum_type ? solve_lsap(cost).assignment : solve_lbap(cost).assignment;
    }
    else
    {
        auto bf = brute_force_assign(tensor, objective, scenario.noise_density, powers, o.cap);
        assignment = std::move(bf.assignment);
        evaluated = bf.evaluated;
    }

    std::vector<double> user_rates;
    for (std::size_t k = 0; k < assignment.unit_of_user.size(); ++k)
        user_rates.push_back(rates(k, assignment.unit_of_user[k]));
    const double sum_rate = std::accumulate(user_rates.begin(), user_rates.end(), 0.0);
    const double min_rate = user_rates.empty() ? 0.0 : *std::min_element(user_rates.begin(), user_rates.end());

    out << "method: " << o.method << "\n";
    out << "users: " << scenario.num_users() << ", units: " << scenario.num_units() << "\n";
    for (std::size_t k = 0; k < assignment.unit_of_user.size(); ++k)
        out << "user " << k << " -> unit " << assignment.unit_of_user[k] << "  rate " << fixed(user_rates[k]) << "\n";
    out << "objective (" << to_string(assignment.kind) << "): " << std::setprecision(17) << assignment.objective
        << "\n";
    out << "sum-rate: " << fixed(sum_rate) << "\n";
    out << "min-rate: " << fixed(min_rate) << "\n";
    if (evaluated)
        out << "evaluated assignments: " << *evaluated << "\n";
    if (tensor.unconverged > 0)
        out << "warning: " << tensor.unconverged << " coupling entries failed the refinement check (max change "
            << tensor.max_refinement_change << ")\n";

    if (!o.out.empty())
    {
        nlohmann::json users = nlohmann::json::array();
        for (const auto &u : scenario.users)
            users.push_back({{"x", u.position.x}, {"y", u.position.y}, {"z", u.position.z}, {"power", u.power}});
        nlohmann::json record{{"version", std::string(version_string())},
                              {"method", o.method},
                              {"objective_kind", std::string(to_string(assignment.kind))},
                              {"objective", assignment.objective},
                              {"mapping", assignment.unit_of_user},
                              {"user_rates", user_rates},
                              {"sum_rate", sum_rate},
                              {"min_rate", min_rate},
                              {"seed", file.seed},
                              {"users", users},
                              {"unconverged_entries", tensor.unconverged}};
        if (evaluated)
            record["evaluated"] = *evaluated;
        std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
        if (!f)
            throw std::runtime_error("cannot open '" + o.out + "' for writing");
        f << record.dump(2) << "\n";
        if (!f)
            throw std::runtime_error("failed writing '" + o.out + "'");
    }
    return exit_ok;
}

// ---- sweep ------------------------------------------------------------------

struct SweepOptions
{
    std::string config_path;
    std::string out = "sweep.csv";
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> jobs;
    std::optional<std::string> rss_mode;
};

int cmd_sweep(const SweepOptions &o, std::ostream &out)
{
    const auto doc = KeyValueDocument::load(o.config_path);
    auto config = sweep_config_from(doc);
    if (!doc.contains("jobs"))
        config.jobs = default_jobs();
    if (o.trials)
        config.trials = *o.trials;
    if (o.seed)
        config.seed = *o.seed;
    if (o.jobs)
        config.jobs = *o.jobs;
    if (o.rss_mode)
        config.rss_mode = *o.rss_mode == "center" ? RssMode::center : RssMode::full;
    config.validate();

    const auto result = run_rate_sweep(config);
    emit_csv(result, o.out);
    write_manifest(manifest_path_for(o.out), to_json(config),
                   {{"trials", result.trials},
                    {"failed_trials", result.failed},
                    {"unconverged_entries", result.unconverged_entries}});

    std::vector<std::string> header{std::string(to_string(config.variable))};
    std::vector<Method> shown;
    for (Method m : all_methods)
        if (!result.points.empty() && result.points.front().has(m))
        {
            header.emplace_back(to_string(m));
            shown.push_back(m);
        }
    print_table_row(out, header);
    for (const auto &p : result.points)
    {
        std::vector<std::string> row{fixed(p.value, 3)};
        for (Method m : shown)
            row.push_back(p.has(m) ? fixed(p[m].mean_norm, 5) : "-");
        print_table_row(out, row);
    }
    out << "trials: " << result.trials << ", failed: " << result.failed << "\n";
    if (result.unconverged_entries > 0)
        out << "warning: " << result.unconverged_entries << " coupling entries failed the refinement check\n";
    out << "wrote " << o.out << "\n";
    return exit_ok;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"User assignment for distributed large intelligent surfaces", "lis-assign"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    SirOptions sir;
    auto *sir_cmd = app.add_subcommand("sir", "1/SIR study for two users in front of one unit");
    sir_cmd->add_option("--side", sir.config.side, "Unit side L in meters")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sir_cmd->add_option("--lambda", sir.config.wavelength, "Wavelength in meters")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sir_cmd->add_option("--trials", sir.trials, "Number of random two-user draws")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
    sir_cmd->add_option("--seed", sir.seed, "Random seed")->capture_default_str();
    sir_cmd->add_option("--out", sir.out, "CDF samples CSV path")->capture_default_str();
    sir_cmd->add_option("--jobs", sir.jobs, "Worker threads (default: available cores)")
        ->check(CLI::PositiveNumber);
    sir_cmd->add_option("--threshold-db", sir.threshold_db, "Reported CDF point in dB")->capture_default_str();
    sir_cmd->add_option("--half-width", sir.config.half_width, "Users drawn with |x|, |y| <= half-width")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sir_cmd->add_option("--z-max", sir.config.z_max, "Users drawn with 0 < z <= z-max")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sir.quad.add_to(*sir_cmd);

    AssignOptions assign;
    auto *assign_cmd = app.add_subcommand("assign", "Assign the users of one scenario to LIS-Units");
    assign_cmd->add_option("--scenario", assign.scenario_path, "Scenario key/value file")->required();
    assign_cmd->add_option("--objective", assign.objective, "sum_rate | min_rate | sum_rss | min_rss")
        ->capture_default_str()
        ->check(CLI::IsMember({"sum_rate", "min_rate", "sum_rss", "min_rss"}));
    assign_cmd->add_option("--method", assign.method, "lsap | lbap | brute | center")
        ->capture_default_str()
        ->check(CLI::IsMember({"lsap", "lbap", "brute", "center"}));
    assign_cmd->add_option("--out", assign.out, "Write a JSON result record to this path");
    assign_cmd->add_option("--cap", assign.cap, "Enumeration cap for brute force")->capture_default_str();
    assign_cmd->add_option("--seed", assign.seed, "Override the scenario file's seed");
    assign.quad.add_to(*assign_cmd);

    SweepOptions sweep;
    auto *sweep_cmd = app.add_subcommand("sweep", "Monte Carlo rate sweep over L or transmit power");
    sweep_cmd->add_option("--config", sweep.config_path, "Sweep key/value file")->required();
    sweep_cmd->add_option("--out", sweep.out, "CSV path; a .manifest.json is written next to it")
        ->capture_default_str();
    sweep_cmd->add_option("--trials", sweep.trials, "Override trials from the file")
        ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
    sweep_cmd->add_option("--seed", sweep.seed, "Override seed from the file");
    sweep_cmd->add_option("--jobs", sweep.jobs, "Worker threads (default: file value, else available cores)")
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--rss-mode", sweep.rss_mode, "Override rss_mode: full | center")
        ->check(CLI::IsMember({"full", "center"}));

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if (*sir_cmd)
            return cmd_sir(sir, out);
        if (*assign_cmd)
            return cmd_assign(assign, out);
        return cmd_sweep(sweep, out);
    }
    catch (const domain_error &e)
    {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    }
    catch (const enumeration_cap_error &e)
    {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << "\n";
        return exit_runtime;
    }
}

} // namespace lis::cli
