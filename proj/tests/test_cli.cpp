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

#include <doctest.h>

#include "cli.hpp"
#include "lis/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace
{

struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = lis::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch()
{
    const auto dir = fs::temp_directory_path() / "lis_assign_cli_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const std::string &name, const std::string &text)
{
    const auto p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("usage errors and help")
{
    CHECK(run({}).code == lis::cli::exit_usage);
    CHECK(run({"frobnicate"}).code == lis::cli::exit_usage);
    CHECK(run({"sir", "--trials", "0"}).code == lis::cli::exit_usage);
    CHECK(run({"sir", "--side", "abc"}).code == lis::cli::exit_usage);
    CHECK(run({"assign"}).code == lis::cli::exit_usage); // --scenario is required
    CHECK(run({"--help"}).code == lis::cli::exit_ok);
    for (const char *sub : {"sir", "assign", "sweep"})
    {
        const auto r = run({sub, "--help"});
        CHECK(r.code == lis::cli::exit_ok);
        CHECK(r.out.find("--") != std::string::npos);
    }
    CHECK(run({"assign", "--scenario", "/nonexistent.cfg"}).code == lis::cli::exit_runtime);
}

TEST_CASE("sir writes a deterministic CDF")
{
    const auto a = scratch() / "sir_a.csv";
    const auto b = scratch() / "sir_b.csv";
    const auto ra = run({"sir", "--trials", "30", "--seed", "3", "--jobs", "1", "--out", a.string()});
    const auto rb = run({"sir", "--trials", "30", "--seed", "3", "--jobs", "2", "--out", b.string()});
    REQUIRE(ra.code == 0);
    REQUIRE(rb.code == 0);
    CHECK(ra.out.find("fraction of 1/SIR below -20 dB: ") != std::string::npos);
    CHECK(slurp(a) == slurp(b));
    CHECK(fs::exists(lis::manifest_path_for(a)));

    CHECK(run({"sir", "--trials", "5", "--side", "-1", "--out", a.string()}).code == lis::cli::exit_usage);
}

TEST_CASE("assign with a single user picks the strongest unit")
{
    // user hovering over the fourth of five units
    const auto cfg = write_file("single.cfg", "M = 5\nL = 0.5\nuser = 0.5 0 0.8\n");
    for (const char *method : {"lsap", "lbap", "brute", "center"})
    {
        const auto r = run({"assign", "--scenario", cfg.string(), "--method", method});
        REQUIRE(r.code == 0);
        CHECK(r.out.find("user 0 -> unit 3") != std::string::npos);
    }
}

TEST_CASE("assign: brute force, records and refusal")
{
    const auto cfg = write_file("seven.cfg", "M = 7\nK = 2\nseed = 5\n");

    const auto brute = run({"assign", "--scenario", cfg.string(), "--method", "brute", "--objective", "sum_rss"});
    REQUIRE(brute.code == 0);
    CHECK(brute.out.find("evaluated assignments: 42") != std::string::npos);

    const auto lsap = run({"assign", "--scenario", cfg.string(), "--method", "lsap"});
    REQUIRE(lsap.code == 0);
    const auto mapping = [](const std::string &text) {
        std::string lines;
        std::istringstream in(text);
        for (std::string line; std::getline(in, line);)
            if (line.rfind("user ", 0) == 0)
                lines += line.substr(0, line.find("  rate")) + "\n";
        return lines;
    };
    CHECK(mapping(lsap.out) == mapping(brute.out));

    const auto record = scratch() / "record.json";
    REQUIRE(run({"assign", "--scenario", cfg.string(), "--method", "lbap", "--out", record.string()}).code == 0);
    const auto j = nlohmann::json::parse(slurp(record));
    CHECK(j.at("mapping").size() == 2);
    CHECK(j.at("method") == "lbap");
    CHECK(j.at("objective_kind") == "bottleneck_cost");

    const auto refused = run({"assign", "--scenario", cfg.string(), "--method", "brute", "--cap", "10"});
    CHECK(refused.code == lis::cli::exit_validation);
    CHECK(refused.err.find("42") != std::string::npos);

    const auto crowded = write_file("crowded.cfg", "M = 2\nK = 3\n");
    CHECK(run({"assign", "--scenario", crowded.string()}).code == lis::cli::exit_validation);
    const auto unknown = write_file("unknown.cfg", "M = 2\ncolour = red\n");
    CHECK(run({"assign", "--scenario", unknown.string()}).code == lis::cli::exit_validation);
    CHECK(run({"assign", "--scenario", cfg.string(), "--objective", "sum_cost"}).code == lis::cli::exit_usage);
}

TEST_CASE("sweep writes rows for every grid point and method")
{
    const auto los = write_file("los.cfg", "M = 4\nK = 2\ngrid = 0.2, 0.5\ntrials = 6\nseed = 2\n");
    const auto hall =
        write_file("hall.cfg", "M = 4\nK = 2\ngrid = 0.2, 0.5\ntrials = 6\nseed = 2\nhall = -2 2 -2 2 4 -3\n");
    const auto los_csv = scratch() / "los.csv";
    const auto hall_csv = scratch() / "hall.csv";

    const auto r = run({"sweep", "--config", los.string(), "--out", los_csv.string(), "--jobs", "2"});
    REQUIRE(r.code == 0);
    auto rows = lis::parse_sweep_csv(slurp(los_csv));
    CHECK(rows.size() == 2 * 6);
    CHECK(fs::exists(lis::manifest_path_for(los_csv)));

    REQUIRE(run({"sweep", "--config", hall.string(), "--out", hall_csv.string()}).code == 0);
    CHECK(slurp(hall_csv) != slurp(los_csv));

    // flags override the file
    const auto center_csv = scratch() / "center.csv";
    REQUIRE(run({"sweep", "--config", los.string(), "--out", center_csv.string(), "--rss-mode", "center", "--trials",
                 "3"})
                .code == 0);
    rows = lis::parse_sweep_csv(slurp(center_csv));
    CHECK(rows.size() == 2 * 8);
    for (const auto &row : rows)
        CHECK(row.n_trials == 3);

    const auto bad = write_file("bad_sweep.cfg", "M = 4\nuser = 0 0 1\n");
    CHECK(run({"sweep", "--config", bad.string(), "--out", center_csv.string()}).code == lis::cli::exit_validation);
    CHECK(run({"sweep", "--config", los.string(), "--rss-mode", "partial"}).code == lis::cli::exit_usage);
}
