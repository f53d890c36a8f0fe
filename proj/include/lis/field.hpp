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

#include "lis/scenario.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace lis
{

using cplx = std::complex<double>;

// Composite tensor-product Gauss-Legendre rule over a unit's square.
struct QuadratureSpec
{
    double panel_fraction = 0.5;   // max panel side as a fraction of the wavelength
    std::size_t nodes_per_panel = 8;
    double rel_tol = 1e-6;          // refinement check threshold
    bool check_refinement = true;

    void validate() const;
};

// 1-D Gauss-Legendre nodes and weights on [-1, 1], ascending nodes.
struct GaussLegendreRule
{
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(std::size_t n);

// Flattened 2-D node set over a square, x-major.
struct SurfaceGrid
{
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> w;

    std::size_t size() const { return w.size(); }
};

std::size_t panels_per_side(double side, double wavelength, const QuadratureSpec &quad);

// panels_scale multiplies the per-dimension panel count (2 for the refinement grid).
SurfaceGrid surface_grid(const LisUnit &unit, double wavelength, const QuadratureSpec &quad,
                         std::size_t panels_scale = 1);

double eta_metric(const Point3 &user, double x, double y);

cplx los_channel(const Point3 &user, double x, double y, double wavelength);

cplx composite_channel(const User &user, std::span<const ImageSource> images, double x, double y,
                       double wavelength);

using ChannelFn = std::function<cplx(double x, double y)>;

struct CouplingResult
{
    cplx value;
    bool converged = true;          // refinement check passed (or was skipped)
    double refinement_change = 0.0; // |fine - base| relative to the Cauchy-Schwarz envelope
};

// Integral over the unit of channel_l * conj(channel_k).
CouplingResult coupling(const LisUnit &unit, const ChannelFn &channel_k, const ChannelFn &channel_l,
                        double wavelength, const QuadratureSpec &quad);

class CouplingTensor
{
public:
    CouplingTensor() = default;
    CouplingTensor(std::size_t num_units, std::size_t num_users);

    std::size_t num_units() const { return num_units_; }
    std::size_t num_users() const { return num_users_; }

    cplx &operator()(std::size_t m, std::size_t k, std::size_t l) { return values_[index(m, k, l)]; }
    cplx operator()(std::size_t m, std::size_t k, std::size_t l) const { return values_[index(m, k, l)]; }

    // Row k at unit m: phi^m_{k,0..K-1}.
    std::span<const cplx> row(std::size_t m, std::size_t k) const
    {
        return {values_.data() + index(m, k, 0), num_users_};
    }

    // Entries whose refinement check failed.
    std::size_t unconverged = 0;
    double max_refinement_change = 0.0;

private:
    std::size_t index(std::size_t m, std::size_t k, std::size_t l) const
    {
        return (m * num_users_ + k) * num_users_ + l;
    }

    std::size_t num_units_ = 0;
    std::size_t num_users_ = 0;
    std::vector<cplx> values_;
};

// Composite (LoS + hall images) when the scenario carries a hall.
CouplingTensor coupling_tensor(const Scenario &scenario, const QuadratureSpec &quad);

// L^2 * z / (4 pi eta^{3/2}) with eta measured to the unit center.
double rss_center_estimate(const LisUnit &unit, const User &user);

struct SirConfig
{
    double side = 0.5;
    double wavelength = 0.125;
    double half_width = 4.0; // users in [-w, w]^2 x (0, z_max]
    double z_max = 8.0;
    QuadratureSpec quad;
};

// Interference-to-signal ratio |phi_01|^2 / phi_00^2 in dB for a unit at the origin.
double inverse_sir_db(const Point3 &user0, const Point3 &user1, const SirConfig &config);

// One 1/SIR sample per trial, trial t drawn from a seed derived from (seed, t).
std::vector<double> sir_samples(const SirConfig &config, std::size_t n_trials, std::uint64_t seed,
                                std::size_t jobs = 1);

// Stable per-trial seed derivation shared by every Monte Carlo driver.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

} // namespace lis
