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

#include "lis/scenario.hpp"
#include "lis/errors.hpp"

#include <cmath>
#include <random>
#include <string>

namespace lis
{

namespace
{

bool finite(const Point3 &p)
{
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

void validate_hall(const Hall &h)
{
    if (!(h.x_min < h.x_max) || !(h.y_min < h.y_max))
        throw domain_error("hall: wall coordinates must satisfy x_min < x_max and y_min < y_max");
    if (!(h.z_back > 0.0))
        throw domain_error("hall: back wall must lie at z_back > 0");
    if (!(h.attenuation_db <= 0.0))
        throw domain_error("hall: attenuation_db must be <= 0");
}

} // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double Hall::amplitude_gain() const { return std::pow(10.0, attenuation_db / 20.0); }

void Scenario::validate() const
{
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw domain_error("scenario: wavelength must be positive");
    if (!(noise_density > 0.0) || !std::isfinite(noise_density))
        throw domain_error("scenario: noise density must be positive");
    if (units.empty())
        throw domain_error("scenario: at least one LIS-Unit is required");
    if (users.size() > units.size())
        throw domain_error("scenario: K = " + std::to_string(users.size()) + " users exceeds M = " +
                           std::to_string(units.size()) + " LIS-Units");

    for (std::size_t m = 0; m < units.size(); ++m)
    {
        const auto &u = units[m];
        if (!finite(u.center) || u.center.z != 0.0)
            throw domain_error("scenario: unit " + std::to_string(m) + " must have a finite center in z = 0");
        if (!(u.side > 0.0) || !std::isfinite(u.side))
            throw domain_error("scenario: unit " + std::to_string(m) + " must have positive side");
    }
    for (std::size_t a = 0; a < units.size(); ++a)
        for (std::size_t b = a + 1; b < units.size(); ++b)
        {
            const double reach = 0.5 * (units[a].side + units[b].side);
            const double dx = std::abs(units[a].center.x - units[b].center.x);
            const double dy = std::abs(units[a].center.y - units[b].center.y);
            // Tolerance covers abutting layouts whose centers carry rounding.
            const double eps = 1e-12 * reach;
            if (dx < reach - eps && dy < reach - eps)
                throw domain_error("scenario: units " + std::to_string(a) + " and " + std::to_string(b) + " overlap");
        }

    for (std::size_t k = 0; k < users.size(); ++k)
    {
        const auto &u = users[k];
        if (!finite(u.position) || !(u.position.z > 0.0))
            throw domain_error("scenario: user " + std::to_string(k) + " must have finite position with z > 0");
        if (!(u.power > 0.0) || !std::isfinite(u.power))
            throw domain_error("scenario: user " + std::to_string(k) + " must have positive power");
    }
    if (hall)
        validate_hall(*hall);
}

void ScenarioConfig::validate() const
{
    if (num_units == 0)
        throw domain_error("config: M must be at least 1");
    if (num_users > num_units)
        throw domain_error("config: K = " + std::to_string(num_users) + " exceeds M = " + std::to_string(num_units));
    if (!(side > 0.0) || !std::isfinite(side))
        throw domain_error("config: L must be positive");
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw domain_error("config: lambda must be positive");
    if (!(noise_density > 0.0) || !std::isfinite(noise_density))
        throw domain_error("config: n0 must be positive");
    if (!(power > 0.0) || !std::isfinite(power))
        throw domain_error("config: transmit power must be positive");
    const auto &b = user_box;
    if (!(b.x_min < b.x_max) || !(b.y_min < b.y_max) || !(b.z_max > 0.0) || !std::isfinite(b.x_min) ||
        !std::isfinite(b.x_max) || !std::isfinite(b.y_min) || !std::isfinite(b.y_max) || !std::isfinite(b.z_max))
        throw domain_error("config: degenerate user box");
    if (hall)
        validate_hall(*hall);
}

double user_separation(const Point3 &a, const Point3 &b)
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

Point3 reflect(const Point3 &p, const Hall &hall, HallPlane plane)
{
    switch (plane)
    {
    case HallPlane::x_min:
        return {2.0 * hall.x_min - p.x, p.y, p.z};
    case HallPlane::x_max:
        return {2.0 * hall.x_max - p.x, p.y, p.z};
    case HallPlane::y_min:
        return {p.x, 2.0 * hall.y_min - p.y, p.z};
    case HallPlane::y_max:
        return {p.x, 2.0 * hall.y_max - p.y, p.z};
    case HallPlane::z_back:
        return {p.x, p.y, 2.0 * hall.z_back - p.z};
    }
    return p;
}

std::vector<ImageSource> image_sources(const User &user, const Hall &hall)
{
    validate_hall(hall);
    const auto &p = user.position;
    const bool inside = p.x > hall.x_min && p.x < hall.x_max && p.y > hall.y_min && p.y < hall.y_max &&
                        p.z > 0.0 && p.z < hall.z_back;
    if (!inside)
        throw domain_error("image_sources: user lies outside the hall");

    const double gain = hall.amplitude_gain();
    std::vector<ImageSource> images;
    images.reserve(hall_planes.size());
    for (auto plane : hall_planes)
        images.push_back({reflect(p, hall, plane), gain});
    return images;
}

std::vector<LisUnit> unit_layout(std::size_t num_units, double side)
{
    std::vector<LisUnit> units(num_units);
    const double mid = 0.5 * (static_cast<double>(num_units) - 1.0);
    for (std::size_t m = 0; m < num_units; ++m)
        units[m] = {{(static_cast<double>(m) - mid) * side, 0.0, 0.0}, side};
    return units;
}

std::vector<User> sample_users(std::uint64_t seed, const ScenarioConfig &config)
{
    config.validate();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto &b = config.user_box;

    std::vector<User> users(config.num_users);
    for (auto &u : users)
    {
        const double x = b.x_min + (b.x_max - b.x_min) * unit(rng);
        const double y = b.y_min + (b.y_max - b.y_min) * unit(rng);
        // unit() lies in [0, 1), so z lands in (0, z_max].
        const double z = b.z_max * (1.0 - unit(rng));
        u = {{x, y, z}, config.power};
    }
    return users;
}

Scenario make_scenario(const ScenarioConfig &config, std::vector<User> users)
{
    Scenario s;
    s.wavelength = config.wavelength;
    s.noise_density = config.noise_density;
    s.units = unit_layout(config.num_units, config.side);
    s.users = std::move(users);
    s.hall = config.hall;
    s.validate();
    return s;
}

Scenario sample_scenario(std::uint64_t seed, const ScenarioConfig &config)
{
    return make_scenario(config, sample_users(seed, config));
}

} // namespace lis
