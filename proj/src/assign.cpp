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

#include "lis/assign.hpp"
#include "lis/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace lis
{

namespace
{

void require_solvable(const CostMatrix &cost, const char *who)
{
    if (cost.empty())
        throw domain_error(std::string(who) + ": empty cost matrix");
    if (cost.rows() > cost.cols())
        throw domain_error(std::string(who) + ": more users (" + std::to_string(cost.rows()) + ") than units (" +
                           std::to_string(cost.cols()) + ")");
    for (double v : cost.entries())
        if (!std::isfinite(v))
            throw domain_error(std::string(who) + ": non-finite cost entry");
}

void check_cap(std::size_t K, std::size_t M, std::uint64_t cap)
{
    if (K > M)
        throw domain_error("enumeration: K = " + std::to_string(K) + " exceeds M = " + std::to_string(M));
    const auto size = assignment_space_size(K, M);
    if (size > cap)
        throw enumeration_cap_error(size, cap);
}

// Visits every injection {0..K-1} -> {0..M-1} in lexicographic order.
template <class Visit>
void for_each_injection(std::size_t K, std::size_t M, Visit &&visit)
{
    std::vector<std::size_t> mapping(K);
    std::vector<bool> used(M, false);
    auto recurse = [&](auto &self, std::size_t k) -> void {
        if (k == K)
        {
            visit(std::span<const std::size_t>(mapping));
            return;
        }
        for (std::size_t m = 0; m < M; ++m)
        {
            if (used[m])
                continue;
            used[m] = true;
            mapping[k] = m;
            self(self, k + 1);
            used[m] = false;
        }
    };
    recurse(recurse, 0);
}

double sum_over(const CostMatrix &values, std::span<const std::size_t> mapping)
{
    double acc = 0.0;
    for (std::size_t k = 0; k < mapping.size(); ++k)
        acc += values(k, mapping[k]);
    return acc;
}

double min_over(const CostMatrix &values, std::span<const std::size_t> mapping)
{
    double acc = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < mapping.size(); ++k)
        acc = std::min(acc, values(k, mapping[k]));
    return acc;
}

// Values to maximize for a tensor-level objective, laid out K x M.
CostMatrix objective_values(const CouplingTensor &tensor, Objective objective, double noise_density,
                            std::span<const double> powers)
{
    switch (objective)
    {
    case Objective::sum_rate:
    case Objective::min_rate:
        return rate_matrix(tensor, noise_density, powers);
    case Objective::sum_rss:
    case Objective::min_rss: {
        CostMatrix rss(tensor.num_users(), tensor.num_units());
        for (std::size_t k = 0; k < tensor.num_users(); ++k)
            for (std::size_t m = 0; m < tensor.num_units(); ++m)
                rss(k, m) = tensor(m, k, k).real();
        return rss;
    }
    default:
        throw domain_error("brute force: objective must be sum_rate, min_rate, sum_rss or min_rss");
    }
}

bool is_sum(Objective o) { return o == Objective::sum_rate || o == Objective::sum_rss; }

bool try_augment(const BipartiteGraph &g, std::size_t r, std::vector<bool> &seen, Matching &mt)
{
    for (std::size_t c : g.adjacency[r])
    {
        if (seen[c])
            continue;
        seen[c] = true;
        if (mt.row_of_col[c] == unmatched || try_augment(g, mt.row_of_col[c], seen, mt))
        {
            mt.col_of_row[r] = c;
            mt.row_of_col[c] = r;
            return true;
        }
    }
    return false;
}

} // namespace

// ---- CostMatrix / Assignment ----------------------------------------------

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill)
{
}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries))
{
    if (entries_.size() != rows * cols)
        throw domain_error("CostMatrix: entry count does not match dimensions");
}

std::string_view to_string(Objective objective)
{
    switch (objective)
    {
    case Objective::sum_cost:
        return "sum_cost";
    case Objective::bottleneck_cost:
        return "bottleneck_cost";
    case Objective::sum_rate:
        return "sum_rate";
    case Objective::min_rate:
        return "min_rate";
    case Objective::sum_rss:
        return "sum_rss";
    case Objective::min_rss:
        return "min_rss";
    }
    return "unknown";
}

Objective parse_objective(std::string_view name)
{
    for (auto o : {Objective::sum_cost, Objective::bottleneck_cost, Objective::sum_rate, Objective::min_rate,
                   Objective::sum_rss, Objective::min_rss})
        if (to_string(o) == name)
            return o;
    throw domain_error("unknown objective '" + std::string(name) + "'");
}

bool satisfies_constraints(std::span<const std::size_t> unit_of_user, std::size_t num_units)
{
    std::vector<int> load(num_units, 0);
    for (std::size_t m : unit_of_user)
    {
        if (m >= num_units)
            return false;
        if (++load[m] > 1)
            return false;
    }
    return true;
}

double sum_cost(const CostMatrix &cost, std::span<const std::size_t> unit_of_user)
{
    return sum_over(cost, unit_of_user);
}

double bottleneck_cost(const CostMatrix &cost, std::span<const std::size_t> unit_of_user)
{
    double acc = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < unit_of_user.size(); ++k)
        acc = std::max(acc, cost(k, unit_of_user[k]));
    return acc;
}

// ---- rates and cost matrices ----------------------------------------------

double user_rate(std::span<const cplx> phi_row, std::size_t k, double noise_density, std::span<const double> powers)
{
    if (k >= phi_row.size() || powers.size() != phi_row.size())
        throw domain_error("user_rate: coupling row and power list must both have K entries");
    const double self = phi_row[k].real();
    if (!(self > 0.0))
        throw domain_error("user_rate: self-coupling must be positive");
    if (!(noise_density > 0.0))
        throw domain_error("user_rate: noise density must be positive");

    double interference = 0.0;
    for (std::size_t l = 0; l < phi_row.size(); ++l)
        if (l != k)
            interference += powers[l] * std::norm(phi_row[l]);
    const double sinr = powers[k] * self * self / (noise_density * self + interference);
    return std::log2(1.0 + sinr);
}

CostMatrix rate_matrix(const CouplingTensor &tensor, double noise_density, std::span<const double> powers)
{
    CostMatrix rates(tensor.num_users(), tensor.num_units());
    for (std::size_t k = 0; k < tensor.num_users(); ++k)
        for (std::size_t m = 0; m < tensor.num_units(); ++m)
            rates(k, m) = user_rate(tensor.row(m, k), k, noise_density, powers);
    return rates;
}

std::vector<double> user_powers(const Scenario &scenario)
{
    std::vector<double> p;
    p.reserve(scenario.users.size());
    for (const auto &u : scenario.users)
        p.push_back(u.power);
    return p;
}

CostMatrix build_cost_matrix(const CouplingTensor &tensor)
{
    CostMatrix cost(tensor.num_users(), tensor.num_units());
    for (std::size_t k = 0; k < tensor.num_users(); ++k)
        for (std::size_t m = 0; m < tensor.num_units(); ++m)
        {
            const double rss = tensor(m, k, k).real();
            if (!(rss >= 0.0))
                throw domain_error("build_cost_matrix: negative self-coupling");
            cost(k, m) = -rss;
        }
    return cost;
}

CostMatrix build_cost_matrix_center(const Scenario &scenario)
{
    scenario.validate();
    CostMatrix cost(scenario.num_users(), scenario.num_units());
    for (std::size_t k = 0; k < scenario.num_users(); ++k)
        for (std::size_t m = 0; m < scenario.num_units(); ++m)
            cost(k, m) = -rss_center_estimate(scenario.units[m], scenario.users[k]);
    return cost;
}

// ---- Kuhn-Munkres ---------------------------------------------------------

LsapSolution solve_lsap(const CostMatrix &cost)
{
    require_solvable(cost, "solve_lsap");
    const std::size_t K = cost.rows();
    const std::size_t M = cost.cols();
    auto weight = [&](std::size_t k, std::size_t m) { return -cost(k, m); };

    std::vector<double> lx(K), ly(M, 0.0);
    for (std::size_t k = 0; k < K; ++k)
    {
        lx[k] = weight(k, 0);
        for (std::size_t m = 1; m < M; ++m)
            lx[k] = std::max(lx[k], weight(k, m));
    }

    std::vector<std::size_t> unit_of_user(K, unmatched), user_of_unit(M, unmatched);
    std::vector<double> slack(M);
    std::vector<std::size_t> slack_user(M);
    std::vector<bool> in_s(K), in_t(M);

    for (std::size_t root = 0; root < K; ++root)
    {
        std::fill(in_s.begin(), in_s.end(), false);
        std::fill(in_t.begin(), in_t.end(), false);
        in_s[root] = true;
        for (std::size_t m = 0; m < M; ++m)
        {
            slack[m] = lx[root] + ly[m] - weight(root, m);
            slack_user[m] = root;
        }

        for (;;)
        {
            // Lowest-index unit outside T with minimum slack.
            std::size_t y = unmatched;
            for (std::size_t m = 0; m < M; ++m)
                if (!in_t[m] && (y == unmatched || slack[m] < slack[y]))
                    y = m;

            // N(S) = T: shift labels so that y joins the equality subgraph.
            if (slack[y] > 0.0)
            {
                const double delta = slack[y];
                for (std::size_t k = 0; k < K; ++k)
                    if (in_s[k])
                        lx[k] -= delta;
                for (std::size_t m = 0; m < M; ++m)
                {
                    if (in_t[m])
                        ly[m] += delta;
                    else
                        slack[m] -= delta;
                }
            }

            if (user_of_unit[y] == unmatched)
            {
                // Augment along the alternating path ending at the free unit y.
                for (std::size_t cur = y; cur != unmatched;)
                {
                    const std::size_t x = slack_user[cur];
                    const std::size_t next = unit_of_user[x];
                    unit_of_user[x] = cur;
                    user_of_unit[cur] = x;
                    cur = next;
                }
                break;
            }

            const std::size_t x = user_of_unit[y];
            in_t[y] = true;
            in_s[x] = true;
            for (std::size_t m = 0; m < M; ++m)
            {
                if (in_t[m])
                    continue;
                const double v = lx[x] + ly[m] - weight(x, m);
                if (v < slack[m])
                {
                    slack[m] = v;
                    slack_user[m] = x;
                }
            }
        }
    }

    LsapSolution sol;
    sol.assignment.unit_of_user = std::move(unit_of_user);
    sol.assignment.objective = sum_cost(cost, sol.assignment.unit_of_user);
    sol.assignment.kind = Objective::sum_cost;
    sol.user_labels = std::move(lx);
    sol.unit_labels = std::move(ly);
    return sol;
}

LsapCertificate check_lsap_certificate(const CostMatrix &cost, const LsapSolution &solution)
{
    const auto &p = solution.assignment.unit_of_user;
    const auto &lx = solution.user_labels;
    const auto &ly = solution.unit_labels;
    if (lx.size() != cost.rows() || ly.size() != cost.cols() || p.size() != cost.rows())
        throw domain_error("check_lsap_certificate: solution does not match the cost matrix");

    LsapCertificate cert;
    std::vector<bool> used(cost.cols(), false);
    for (std::size_t k = 0; k < cost.rows(); ++k)
    {
        for (std::size_t m = 0; m < cost.cols(); ++m)
        {
            const double w = -cost(k, m);
            cert.max_feasibility_violation = std::max(cert.max_feasibility_violation, w - (lx[k] + ly[m]));
        }
        used[p[k]] = true;
        cert.max_tightness_gap = std::max(cert.max_tightness_gap, std::abs(lx[k] + ly[p[k]] + cost(k, p[k])));
    }
    cert.min_unit_label = *std::min_element(ly.begin(), ly.end());
    for (std::size_t m = 0; m < cost.cols(); ++m)
        if (!used[m])
            cert.max_free_unit_label = std::max(cert.max_free_unit_label, std::abs(ly[m]));
    return cert;
}

// ---- matching -------------------------------------------------------------

bool BipartiteGraph::has_edge(std::size_t r, std::size_t c) const
{
    const auto &adj = adjacency[r];
    return std::find(adj.begin(), adj.end(), c) != adj.end();
}

std::size_t Matching::size() const
{
    return static_cast<std::size_t>(
        std::count_if(col_of_row.begin(), col_of_row.end(), [](std::size_t c) { return c != unmatched; }));
}

Matching max_matching(const BipartiteGraph &graph)
{
    Matching mt{std::vector<std::size_t>(graph.rows, unmatched), std::vector<std::size_t>(graph.cols, unmatched)};
    std::vector<bool> seen(graph.cols);
    for (std::size_t r = 0; r < graph.rows; ++r)
    {
        std::fill(seen.begin(), seen.end(), false);
        try_augment(graph, r, seen, mt);
    }
    return mt;
}

VertexCover min_vertex_cover(const BipartiteGraph &graph, const Matching &matching)
{
    if (matching.col_of_row.size() != graph.rows || matching.row_of_col.size() != graph.cols)
        throw contract_error("min_vertex_cover: matching does not fit the graph");
    for (std::size_t r = 0; r < graph.rows; ++r)
    {
        const std::size_t c = matching.col_of_row[r];
        if (c != unmatched && (c >= graph.cols || matching.row_of_col[c] != r || !graph.has_edge(r, c)))
            throw contract_error("min_vertex_cover: inconsistent matching");
    }

    // Alternating search from free rows; reaching a free column would mean
    // an augmenting path exists.
    std::vector<bool> row_seen(graph.rows, false), col_seen(graph.cols, false);
    std::vector<std::size_t> frontier;
    for (std::size_t r = 0; r < graph.rows; ++r)
        if (matching.col_of_row[r] == unmatched)
        {
            row_seen[r] = true;
            frontier.push_back(r);
        }
    while (!frontier.empty())
    {
        const std::size_t r = frontier.back();
        frontier.pop_back();
        for (std::size_t c : graph.adjacency[r])
        {
            if (col_seen[c] || matching.col_of_row[r] == c)
                continue;
            col_seen[c] = true;
            const std::size_t next = matching.row_of_col[c];
            if (next == unmatched)
                throw contract_error("min_vertex_cover: matching is not maximum");
            if (!row_seen[next])
            {
                row_seen[next] = true;
                frontier.push_back(next);
            }
        }
    }

    VertexCover cover;
    for (std::size_t r = 0; r < graph.rows; ++r)
        if (!row_seen[r])
            cover.rows.push_back(r);
    for (std::size_t c = 0; c < graph.cols; ++c)
        if (col_seen[c])
            cover.cols.push_back(c);
    return cover;
}

// ---- Threshold algorithm --------------------------------------------------

LbapSolution solve_lbap(const CostMatrix &cost)
{
    require_solvable(cost, "solve_lbap");
    const std::size_t K = cost.rows();
    const std::size_t M = cost.cols();

    // Every user must take some unit, so the bottleneck is at least the
    // largest row minimum. Column minima bound it only when K = M.
    double threshold = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k)
    {
        const auto row = cost.row(k);
        threshold = std::max(threshold, *std::min_element(row.begin(), row.end()));
    }
    if (K == M)
        for (std::size_t m = 0; m < M; ++m)
        {
            double col_min = cost(0, m);
            for (std::size_t k = 1; k < K; ++k)
                col_min = std::min(col_min, cost(k, m));
            threshold = std::max(threshold, col_min);
        }

    LbapSolution sol;
    for (;;)
    {
        sol.thresholds.push_back(threshold);
        BipartiteGraph graph(K, M);
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t m = 0; m < M; ++m)
                if (cost(k, m) <= threshold)
                    graph.add_edge(k, m);

        const Matching matching = max_matching(graph);
        if (matching.size() == K)
        {
            sol.assignment.unit_of_user = matching.col_of_row;
            break;
        }

        const VertexCover cover = min_vertex_cover(graph, matching);
        std::vector<bool> row_covered(K, false), col_covered(M, false);
        for (auto r : cover.rows)
            row_covered[r] = true;
        for (auto c : cover.cols)
            col_covered[c] = true;

        double next = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t m = 0; m < M; ++m)
                if (!row_covered[k] && !col_covered[m])
                    next = std::min(next, cost(k, m));
        threshold = next;
    }

    sol.assignment.objective = bottleneck_cost(cost, sol.assignment.unit_of_user);
    sol.assignment.kind = Objective::bottleneck_cost;
    return sol;
}

// ---- exhaustive oracles ---------------------------------------------------

std::uint64_t assignment_space_size(std::size_t num_users, std::size_t num_units)
{
    if (num_users > num_units)
        return 0;
    std::uint64_t size = 1;
    for (std::size_t i = 0; i < num_users; ++i)
    {
        const std::uint64_t factor = num_units - i;
        if (size > std::numeric_limits<std::uint64_t>::max() / factor)
            return std::numeric_limits<std::uint64_t>::max();
        size *= factor;
    }
    return size;
}

BruteForceResult brute_force_lsap(const CostMatrix &cost, std::uint64_t cap)
{
    require_solvable(cost, "brute_force_lsap");
    check_cap(cost.rows(), cost.cols(), cap);
    BruteForceResult best;
    best.assignment.kind = Objective::sum_cost;
    best.assignment.objective = std::numeric_limits<double>::infinity();
    for_each_injection(cost.rows(), cost.cols(), [&](std::span<const std::size_t> p) {
        ++best.evaluated;
        const double v = sum_over(cost, p);
        if (v < best.assignment.objective)
        {
            best.assignment.objective = v;
            best.assignment.unit_of_user.assign(p.begin(), p.end());
        }
    });
    return best;
}

BruteForceResult brute_force_lbap(const CostMatrix &cost, std::uint64_t cap)
{
    require_solvable(cost, "brute_force_lbap");
    check_cap(cost.rows(), cost.cols(), cap);
    BruteForceResult best;
    best.assignment.kind = Objective::bottleneck_cost;
    best.assignment.objective = std::numeric_limits<double>::infinity();
    for_each_injection(cost.rows(), cost.cols(), [&](std::span<const std::size_t> p) {
        ++best.evaluated;
        const double v = bottleneck_cost(cost, p);
        if (v < best.assignment.objective)
        {
            best.assignment.objective = v;
            best.assignment.unit_of_user.assign(p.begin(), p.end());
        }
    });
    return best;
}

BruteForceResult brute_force_assign(const CouplingTensor &tensor, Objective objective, double noise_density,
                                    std::span<const double> powers, std::uint64_t cap)
{
    const std::size_t K = tensor.num_users();
    const std::size_t M = tensor.num_units();
    check_cap(K, M, cap);
    const CostMatrix values = objective_values(tensor, objective, noise_density, powers);
    const bool sum = is_sum(objective);

    BruteForceResult best;
    best.assignment.kind = objective;
    best.assignment.objective = -std::numeric_limits<double>::infinity();
    for_each_injection(K, M, [&](std::span<const std::size_t> p) {
        ++best.evaluated;
        const double v = sum ? sum_over(values, p) : min_over(values, p);
        if (best.evaluated == 1 || v > best.assignment.objective)
        {
            best.assignment.objective = v;
            best.assignment.unit_of_user.assign(p.begin(), p.end());
        }
    });
    return best;
}

double random_baseline(const CouplingTensor &tensor, Objective objective, double noise_density,
                       std::span<const double> powers, std::uint64_t cap)
{
    const std::size_t K = tensor.num_users();
    const std::size_t M = tensor.num_units();
    check_cap(K, M, cap);
    const CostMatrix values = objective_values(tensor, objective, noise_density, powers);
    const bool sum = is_sum(objective);

    double total = 0.0;
    std::uint64_t count = 0;
    for_each_injection(K, M, [&](std::span<const std::size_t> p) {
        total += sum ? sum_over(values, p) : min_over(values, p);
        ++count;
    });
    return total / static_cast<double>(count);
}

} // namespace lis
