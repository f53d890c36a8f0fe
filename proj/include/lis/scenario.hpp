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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace lis
{

struct Point3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point3 &, const Point3 &) = default;
};

// Square LIS-Unit in the z = 0 plane.
struct LisUnit
{
    Point3 center;
    double side = 0.0; // L, meters
};

struct User
{
    Point3 position;
    double power = 1.0; // linear
};

// Rectangular hall whose front wall (z = 0) carries the LIS-Units. The other
// five walls reflect with a fixed per-bounce power loss.
struct Hall
{
    double x_min = -2.0;
    double x_max = 2.0;
    double y_min = -2.0;
    double y_max = 2.0;
    double z_back = 4.0;
    double attenuation_db = -3.0;

    double amplitude_gain() const;
};

enum class HallPlane : std::uint8_t
{
    x_min,
    x_max,
    y_min,
    y_max,
    z_back
};

inline constexpr std::array<HallPlane, 5> hall_planes{HallPlane::x_min, HallPlane::x_max, HallPlane::y_min,
                                                      HallPlane::y_max, HallPlane::z_back};

struct ImageSource
{
    Point3 position;
    double amplitude_gain = 1.0;
};

struct Scenario
{
    double wavelength = 0.125;
    double noise_density = 1.0;
    std::vector<LisUnit> units;
    std::vector<User> users;
    std::optional<Hall> hall;

    std::size_t num_units() const { return units.size(); }
    std::size_t num_users() const { return users.size(); }

    // Throws lis::domain_error naming the first violated invariant.
    void validate() const;
};

// Axis-aligned region users are drawn from: x in [x_min, x_max],
// y in [y_min, y_max], z in (0, z_max].
struct UserBox
{
    double x_min = -2.0;
    double x_max = 2.0;
    double y_min = -2.0;
    double y_max = 2.0;
    double z_max = 4.0;
};

struct ScenarioConfig
{
    std::size_t num_units = 7;
    std::size_t num_users = 2;
    double side = 0.5;
    double wavelength = 0.125;
    double noise_density = 1.0;
    double power = 100.0; // linear; 20 dB
    UserBox user_box;
    std::optional<Hall> hall;

    void validate() const;
};

double user_separation(const Point3 &a, const Point3 &b);

Point3 reflect(const Point3 &p, const Hall &hall, HallPlane plane);

// One single-bounce image per reflecting wall, ordered as hall_planes.
std::vector<ImageSource> image_sources(const User &user, const Hall &hall);

// Abutting units of side L along y = z = 0, symmetric about the origin.
std::vector<LisUnit> unit_layout(std::size_t num_units, double side);

std::vector<User> sample_users(std::uint64_t seed, const ScenarioConfig &config);

Scenario sample_scenario(std::uint64_t seed, const ScenarioConfig &config);

// Same users, new unit layout: used by sweeps that vary L on fixed realizations.
Scenario make_scenario(const ScenarioConfig &config, std::vector<User> users);

double db_to_linear(double db);

} // namespace lis
