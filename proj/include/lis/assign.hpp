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

#include "lis/field.hpp"
#include "lis/scenario.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace lis
{

// Dense K x M real matrix, row k = user, column m = unit.
class CostMatrix
{
public:
    CostMatrix() = default;
    CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double &operator()(std::size_t k, std::size_t m) { return entries_[k * cols_ + m]; }
    double operator()(std::size_t k, std::size_t m) const { return entries_[k * cols_ + m]; }

    std::span<const double> row(std::size_t k) const { return {entries_.data() + k * cols_, cols_}; }
    const std::vector<double> &entries() const { return entries_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

enum class Objective
{
    sum_cost,        // LSAP: minimize sum of costs
    bottleneck_cost, // LBAP: minimize the largest cost used
    sum_rate,        // maximize true sum-rate
    min_rate,        // maximize the smallest user rate
    sum_rss,         // maximize sum of self-couplings
    min_rss          // maximize the smallest self-coupling
};

std::string_view to_string(Objective objective);
Objective parse_objective(std::string_view name);

struct Assignment
{
    std::vector<std::size_t> unit_of_user; // p(k)
    double objective = 0.0;
    Objective kind = Objective::sum_cost;

    // w_{k,m} in {0, 1}
    bool serves(std::size_t k, std::size_t m) const { return unit_of_user[k] == m; }
};

// Every user gets exactly one unit in [0, num_units) and no unit is shared.
bool satisfies_constraints(std::span<const std::size_t> unit_of_user, std::size_t num_units);

double sum_cost(const CostMatrix &cost, std::span<const std::size_t> unit_of_user);
double bottleneck_cost(const CostMatrix &cost, std::span<const std::size_t> unit_of_user);

// ---- rates and cost matrices --------------------------------------------

// log2(1 + P_k phi_kk^2 / (N0 phi_kk + sum_{l != k} P_l |phi_kl|^2)).
double user_rate(std::span<const cplx> phi_row, std::size_t k, double noise_density, std::span<const double> powers);

// R[k][m]: rate of user k when served by unit m (K x M).
CostMatrix rate_matrix(const CouplingTensor &tensor, double noise_density, std::span<const double> powers);

std::vector<double> user_powers(const Scenario &scenario);

CostMatrix build_cost_matrix(const CouplingTensor &tensor);
CostMatrix build_cost_matrix_center(const Scenario &scenario);

// ---- Kuhn-Munkres ---------------------------------------------------------

struct LsapSolution
{
    Assignment assignment;
    // Vertex potentials in maximization form on weights = -cost.
    std::vector<double> user_labels;
    std::vector<double> unit_labels;
};

LsapSolution solve_lsap(const CostMatrix &cost);

struct LsapCertificate
{
    double max_feasibility_violation = 0.0; // max over pairs of weight - (lx + ly), clipped at 0
    double max_tightness_gap = 0.0;         // max over matched pairs of |lx + ly - weight|
    double min_unit_label = 0.0;            // labels of units must stay >= 0
    double max_free_unit_label = 0.0;       // unmatched units must carry label 0
};

LsapCertificate check_lsap_certificate(const CostMatrix &cost, const LsapSolution &solution);

// ---- bipartite matching ---------------------------------------------------

struct BipartiteGraph
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::vector<std::size_t>> adjacency; // row -> ascending columns

    BipartiteGraph() = default;
    BipartiteGraph(std::size_t rows, std::size_t cols) : rows(rows), cols(cols), adjacency(rows) {}

    void add_edge(std::size_t r, std::size_t c) { adjacency[r].push_back(c); }
    bool has_edge(std::size_t r, std::size_t c) const;
};

inline constexpr std::size_t unmatched = static_cast<std::size_t>(-1);

struct Matching
{
    std::vector<std::size_t> col_of_row;
    std::vector<std::size_t> row_of_col;

    std::size_t size() const;
};

Matching max_matching(const BipartiteGraph &graph);

struct VertexCover
{
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;

    std::size_t size() const { return rows.size() + cols.size(); }
};

// Konig cover from a maximum matching; throws contract_error if the
// matching admits an augmenting path.
VertexCover min_vertex_cover(const BipartiteGraph &graph, const Matching &matching);

// ---- Threshold algorithm --------------------------------------------------

struct LbapSolution
{
    Assignment assignment;
    std::vector<double> thresholds; // sequence visited, strictly increasing
};

LbapSolution solve_lbap(const CostMatrix &cost);

// ---- exhaustive oracles ---------------------------------------------------

inline constexpr std::uint64_t default_enumeration_cap = 10'000'000;

// M! / (M - K)!, saturating at UINT64_MAX.
std::uint64_t assignment_space_size(std::size_t num_users, std::size_t num_units);

struct BruteForceResult
{
    Assignment assignment;
    std::uint64_t evaluated = 0;
};

BruteForceResult brute_force_lsap(const CostMatrix &cost, std::uint64_t cap = default_enumeration_cap);
BruteForceResult brute_force_lbap(const CostMatrix &cost, std::uint64_t cap = default_enumeration_cap);

BruteForceResult brute_force_assign(const CouplingTensor &tensor, Objective objective, double noise_density,
                                    std::span<const double> powers, std::uint64_t cap = default_enumeration_cap);

double random_baseline(const CouplingTensor &tensor, Objective objective, double noise_density,
                       std::span<const double> powers, std::uint64_t cap = default_enumeration_cap);

} // namespace lis
