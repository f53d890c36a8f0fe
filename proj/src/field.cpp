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

#include "lis/field.hpp"
#include "lis/errors.hpp"
#include "lis/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>

namespace lis
{

namespace
{

constexpr double pi = std::numbers::pi;

// Sum of w * s_l * conj(s_k) with explicit real arithmetic, so identical
// channels give an exactly real result and swapping k and l gives the exact
// conjugate.
cplx integrate_pair(std::span<const double> w, std::span<const cplx> sk, std::span<const cplx> sl)
{
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
    {
        const double ar = sk[i].real(), ai = sk[i].imag();
        const double br = sl[i].real(), bi = sl[i].imag();
        re += w[i] * (br * ar + bi * ai);
        im += w[i] * (bi * ar - br * ai);
    }
    return {re, im};
}

double integrate_power(std::span<const double> w, std::span<const cplx> s)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        acc += w[i] * (s[i].real() * s[i].real() + s[i].imag() * s[i].imag());
    return acc;
}

template <class Channel>
std::vector<cplx> sample_channel(const SurfaceGrid &grid, Channel &&channel)
{
    std::vector<cplx> s(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        s[i] = channel(grid.x[i], grid.y[i]);
        if (!std::isfinite(s[i].real()) || !std::isfinite(s[i].imag()))
            throw domain_error("coupling: non-finite channel value at surface point (" + std::to_string(grid.x[i]) +
                               ", " + std::to_string(grid.y[i]) + ")");
    }
    return s;
}

double envelope(double pk, double pl) { return std::sqrt(pk * pl); }

// All K^2 couplings at one unit from pre-sampled channels.
void fill_unit(std::span<const double> w, const std::vector<std::vector<cplx>> &samples, std::vector<cplx> &out)
{
    const std::size_t K = samples.size();
    out.assign(K * K, cplx{});
    for (std::size_t k = 0; k < K; ++k)
    {
        out[k * K + k] = {integrate_power(w, samples[k]), 0.0};
        for (std::size_t l = k + 1; l < K; ++l)
        {
            const cplx v = integrate_pair(w, samples[k], samples[l]);
            out[k * K + l] = v;
            out[l * K + k] = std::conj(v);
        }
    }
}

std::vector<std::vector<cplx>> sample_user_channels(const Scenario &scenario, const SurfaceGrid &grid,
                                            const std::vector<std::vector<ImageSource>> &images)
{
    std::vector<std::vector<cplx>> samples;
    samples.reserve(scenario.users.size());
    for (std::size_t k = 0; k < scenario.users.size(); ++k)
    {
        const auto &user = scenario.users[k];
        const auto &imgs = images[k];
        samples.push_back(sample_channel(grid, [&](double x, double y) {
            return composite_channel(user, imgs, x, y, scenario.wavelength);
        }));
    }
    return samples;
}

} // namespace

void QuadratureSpec::validate() const
{
    if (!(panel_fraction > 0.0 && panel_fraction <= 1.0))
        throw domain_error("quadrature: panel_fraction must lie in (0, 1]");
    if (nodes_per_panel < 2)
        throw domain_error("quadrature: nodes_per_panel must be at least 2");
    if (!(rel_tol > 0.0))
        throw domain_error("quadrature: rel_tol must be positive");
}

GaussLegendreRule gauss_legendre(std::size_t n)
{
    if (n == 0)
        throw domain_error("gauss_legendre: need at least one node");
    GaussLegendreRule rule{std::vector<double>(n, 0.0), std::vector<double>(n, 2.0)};
    if (n == 1)
        return rule;

    // P_n(x) and P_{n-1}(x) by the three-term recurrence.
    const auto legendre = [n](double x) {
        double p0 = 1.0, p1 = x;
        for (std::size_t j = 2; j <= n; ++j)
        {
            const double jd = static_cast<double>(j);
            const double p2 = ((2.0 * jd - 1.0) * x * p1 - (jd - 1.0) * p0) / jd;
            p0 = p1;
            p1 = p2;
        }
        return std::pair{p1, p0};
    };
    const double nd = static_cast<double>(n);

    // Newton on the positive roots; the rule is symmetric.
    for (std::size_t i = 0; i < n / 2; ++i)
    {
        double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
        for (int iter = 0; iter < 100; ++iter)
        {
            const auto [pn, pm] = legendre(x);
            const double dp = nd * (x * pn - pm) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-16 * std::abs(x))
                break;
        }
        const auto [pn, pm] = legendre(x);
        const double dp = nd * (x * pn - pm) / (x * x - 1.0);
        const double wt = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = wt;
        rule.weights[n - 1 - i] = wt;
    }
    if (n % 2 == 1)
    {
        const auto [pn, pm] = legendre(0.0);
        (void)pn;
        const double dp = nd * pm; // P_n'(0) = n P_{n-1}(0)
        rule.weights[n / 2] = 2.0 / (dp * dp);
    }
    return rule;
}

std::size_t panels_per_side(double side, double wavelength, const QuadratureSpec &quad)
{
    const double ratio = side / (quad.panel_fraction * wavelength);
    // Ratios like 4.000000000001 from decimal inputs should not add a panel.
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ratio - 1e-9)));
}

SurfaceGrid surface_grid(const LisUnit &unit, double wavelength, const QuadratureSpec &quad,
                         std::size_t panels_scale)
{
    quad.validate();
    const auto rule = gauss_legendre(quad.nodes_per_panel);
    const std::size_t panels = panels_per_side(unit.side, wavelength, quad) * std::max<std::size_t>(1, panels_scale);
    const double h = unit.side / static_cast<double>(panels);

    std::vector<double> offsets;
    std::vector<double> weights;
    offsets.reserve(panels * rule.nodes.size());
    weights.reserve(panels * rule.nodes.size());
    for (std::size_t p = 0; p < panels; ++p)
    {
        const double mid = -0.5 * unit.side + h * (static_cast<double>(p) + 0.5);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        {
            offsets.push_back(mid + 0.5 * h * rule.nodes[i]);
            weights.push_back(0.5 * h * rule.weights[i]);
        }
    }

    SurfaceGrid grid;
    const std::size_t n = offsets.size();
    grid.x.reserve(n * n);
    grid.y.reserve(n * n);
    grid.w.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
        {
            grid.x.push_back(unit.center.x + offsets[i]);
            grid.y.push_back(unit.center.y + offsets[j]);
            grid.w.push_back(weights[i] * weights[j]);
        }
    return grid;
}

double eta_metric(const Point3 &user, double x, double y)
{
    const double dx = user.x - x;
    const double dy = user.y - y;
    return dx * dx + dy * dy + user.z * user.z;
}

cplx los_channel(const Point3 &user, double x, double y, double wavelength)
{
    const double eta = eta_metric(user, x, y);
    const double r = std::sqrt(eta);
    const double magnitude = std::sqrt(user.z) / (2.0 * std::sqrt(pi) * r * std::sqrt(r));
    return std::polar(magnitude, -2.0 * pi * r / wavelength);
}

cplx composite_channel(const User &user, std::span<const ImageSource> images, double x, double y,
                       double wavelength)
{
    cplx s = los_channel(user.position, x, y, wavelength);
    for (const auto &img : images)
        s += img.amplitude_gain * los_channel(img.position, x, y, wavelength);
    return s;
}

CouplingResult coupling(const LisUnit &unit, const ChannelFn &channel_k, const ChannelFn &channel_l,
                        double wavelength, const QuadratureSpec &quad)
{
    const auto grid = surface_grid(unit, wavelength, quad);
    const auto sk = sample_channel(grid, channel_k);
    const auto sl = sample_channel(grid, channel_l);

    CouplingResult result;
    result.value = integrate_pair(grid.w, sk, sl);
    if (!quad.check_refinement)
        return result;

    const auto fine = surface_grid(unit, wavelength, quad, 2);
    const auto fk = sample_channel(fine, channel_k);
    const auto fl = sample_channel(fine, channel_l);
    const cplx refined = integrate_pair(fine.w, fk, fl);
    const double scale = envelope(integrate_power(fine.w, fk), integrate_power(fine.w, fl));
    result.refinement_change = scale > 0.0 ? std::abs(refined - result.value) / scale : 0.0;
    result.converged = result.refinement_change < quad.rel_tol;
    return result;
}

CouplingTensor::CouplingTensor(std::size_t num_units, std::size_t num_users)
    : num_units_(num_units), num_users_(num_users), values_(num_units * num_users * num_users)
{
}

CouplingTensor coupling_tensor(const Scenario &scenario, const QuadratureSpec &quad)
{
    scenario.validate();
    quad.validate();
    const std::size_t M = scenario.num_units();
    const std::size_t K = scenario.num_users();

    std::vector<std::vector<ImageSource>> images(K);
    if (scenario.hall)
        for (std::size_t k = 0; k < K; ++k)
            images[k] = image_sources(scenario.users[k], *scenario.hall);

    CouplingTensor tensor(M, K);
    std::vector<cplx> unit_values;
    std::vector<cplx> fine_values;
    for (std::size_t m = 0; m < M; ++m)
    {
        const auto &unit = scenario.units[m];
        const auto grid = surface_grid(unit, scenario.wavelength, quad);
        fill_unit(grid.w, sample_user_channels(scenario, grid, images), unit_values);
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t l = 0; l < K; ++l)
                tensor(m, k, l) = unit_values[k * K + l];

        if (!quad.check_refinement)
            continue;
        const auto fine = surface_grid(unit, scenario.wavelength, quad, 2);
        fill_unit(fine.w, sample_user_channels(scenario, fine, images), fine_values);
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t l = 0; l < K; ++l)
            {
                const double scale = envelope(fine_values[k * K + k].real(), fine_values[l * K + l].real());
                const double change = std::abs(fine_values[k * K + l] - unit_values[k * K + l]) / scale;
                tensor.max_refinement_change = std::max(tensor.max_refinement_change, change);
                if (!(change < quad.rel_tol))
                    ++tensor.unconverged;
            }
    }
    return tensor;
}

double rss_center_estimate(const LisUnit &unit, const User &user)
{
    if (!(user.position.z > 0.0))
        throw domain_error("rss_center_estimate: user must satisfy z > 0");
    const double eta = eta_metric(user.position, unit.center.x, unit.center.y);
    return unit.side * unit.side * user.position.z / (4.0 * pi * eta * std::sqrt(eta));
}

double inverse_sir_db(const Point3 &user0, const Point3 &user1, const SirConfig &config)
{
    if (!(user0.z > 0.0) || !(user1.z > 0.0))
        throw domain_error("inverse_sir_db: users must satisfy z > 0");
    const LisUnit unit{{0.0, 0.0, 0.0}, config.side};
    const auto grid = surface_grid(unit, config.wavelength, config.quad);
    const auto s0 = sample_channel(grid, [&](double x, double y) { return los_channel(user0, x, y, config.wavelength); });
    const auto s1 = sample_channel(grid, [&](double x, double y) { return los_channel(user1, x, y, config.wavelength); });
    const double signal = integrate_power(grid.w, s0);
    const cplx cross = integrate_pair(grid.w, s0, s1);
    const double interference = cross.real() * cross.real() + cross.imag() * cross.imag();
    return 10.0 * std::log10(interference / (signal * signal));
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::vector<double> sir_samples(const SirConfig &config, std::size_t n_trials, std::uint64_t seed, std::size_t jobs)
{
    config.quad.validate();
    if (!(config.side > 0.0) || !(config.wavelength > 0.0) || !(config.half_width > 0.0) || !(config.z_max > 0.0))
        throw domain_error("sir_samples: side, wavelength and box extents must be positive");

    std::vector<double> samples(n_trials);
    parallel_for(n_trials, jobs, [&](std::size_t t) {
        std::mt19937_64 rng(trial_seed(seed, t));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::array<Point3, 2> users;
        for (auto &u : users)
        {
            u.x = config.half_width * (2.0 * unit(rng) - 1.0);
            u.y = config.half_width * (2.0 * unit(rng) - 1.0);
            u.z = config.z_max * (1.0 - unit(rng));
        }
        samples[t] = inverse_sir_db(users[0], users[1], config);
    });
    return samples;
}

} // namespace lis
