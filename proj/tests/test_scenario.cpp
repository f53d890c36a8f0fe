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

#include "lis/errors.hpp"
#include "lis/scenario.hpp"

#include <cmath>
#include <random>

using namespace lis;

TEST_CASE("user_separation")
{
    CHECK(user_separation({0, 0, 1}, {0, 0, 1}) == 0.0);
    CHECK(user_separation({0, 0, 1}, {0, 0, 2}) == 1.0);
    CHECK(user_separation({1, 2, 2}, {4, 6, 2}) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("image sources mirror the user across each wall")
{
    Hall hall; // x, y in [-2, 2], z_back = 4, -3 dB
    const User user{{1, 0, 2}, 1.0};
    const auto images = image_sources(user, hall);
    REQUIRE(images.size() == 5);

    CHECK(images[1].position == Point3{3, 0, 2}); // x_max = 2
    CHECK(images[4].position == Point3{1, 0, 6}); // z_back = 4
    CHECK(images[0].position == Point3{-5, 0, 2});
    CHECK(images[2].position == Point3{1, -4, 2});
    CHECK(images[3].position == Point3{1, 4, 2});
    for (const auto &img : images)
        CHECK(img.amplitude_gain == doctest::Approx(0.7079457843841379).epsilon(1e-14));
}

TEST_CASE("reflecting twice across the same wall is the identity")
{
    Hall hall{-3.0, 2.5, -1.5, 4.0, 6.0, -3.0};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(-3.0, 2.5), uy(-1.5, 4.0), uz(0.01, 5.99);
    for (int i = 0; i < 200; ++i)
    {
        const Point3 p{ux(rng), uy(rng), uz(rng)};
        for (auto plane : hall_planes)
        {
            const Point3 back = reflect(reflect(p, hall, plane), hall, plane);
            CHECK(back.x == doctest::Approx(p.x).epsilon(1e-14));
            CHECK(back.y == doctest::Approx(p.y).epsilon(1e-14));
            CHECK(back.z == doctest::Approx(p.z).epsilon(1e-14));
        }
    }
}

TEST_CASE("image_sources rejects users outside the hall")
{
    Hall hall;
    CHECK_THROWS_AS(image_sources({{3, 0, 1}, 1.0}, hall), domain_error);
    CHECK_THROWS_AS(image_sources({{0, 0, 4.5}, 1.0}, hall), domain_error);
    CHECK_THROWS_AS(image_sources({{0, 0, -1}, 1.0}, hall), domain_error);
}

TEST_CASE("unit layout is abutting and centered")
{
    const auto five = unit_layout(5, 0.5);
    const double expected[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    for (std::size_t m = 0; m < 5; ++m)
    {
        CHECK(five[m].center.x == doctest::Approx(expected[m]).epsilon(1e-15));
        CHECK(five[m].center.y == 0.0);
        CHECK(five[m].center.z == 0.0);
        CHECK(five[m].side == 0.5);
    }

    const auto four = unit_layout(4, 1.0);
    CHECK(four[0].center.x == -1.5);
    CHECK(four[3].center.x == 1.5);
}

TEST_CASE("sample_scenario draws users inside the box")
{
    ScenarioConfig cfg;
    cfg.num_units = 7;
    cfg.num_users = 2;
    for (std::uint64_t seed = 0; seed < 200; ++seed)
    {
        const auto s = sample_scenario(seed, cfg);
        REQUIRE(s.users.size() == 2);
        REQUIRE(s.units.size() == 7);
        for (const auto &u : s.users)
        {
            CHECK(u.position.x >= -2.0);
            CHECK(u.position.x <= 2.0);
            CHECK(u.position.y >= -2.0);
            CHECK(u.position.y <= 2.0);
            CHECK(u.position.z > 0.0);
            CHECK(u.position.z <= 4.0);
            CHECK(u.power == 100.0);
        }
        for (const auto &unit : s.units)
        {
            CHECK(unit.center.y == 0.0);
            CHECK(unit.center.z == 0.0);
        }
    }
}

TEST_CASE("sample_scenario is a pure function of seed and config")
{
    ScenarioConfig cfg;
    const auto a = sample_scenario(42, cfg);
    const auto b = sample_scenario(42, cfg);
    REQUIRE(a.users.size() == b.users.size());
    for (std::size_t k = 0; k < a.users.size(); ++k)
        CHECK(a.users[k].position == b.users[k].position);

    const auto c = sample_scenario(43, cfg);
    CHECK_FALSE(a.users[0].position == c.users[0].position);
}

TEST_CASE("scenario validation")
{
    ScenarioConfig cfg;
    cfg.num_units = 2;
    cfg.num_users = 3;
    CHECK_THROWS_AS(sample_scenario(1, cfg), domain_error);

    cfg.num_users = 2;
    cfg.user_box.x_min = cfg.user_box.x_max;
    CHECK_THROWS_AS(sample_scenario(1, cfg), domain_error);

    Scenario s;
    s.units = {{{0, 0, 0}, 1.0}, {{0.5, 0, 0}, 1.0}};
    s.users = {{{0, 0, 1}, 1.0}};
    CHECK_THROWS_AS(s.validate(), domain_error); // overlapping units

    s.units[1].center.x = 1.0;
    CHECK_NOTHROW(s.validate());

    s.users[0].position.z = 0.0;
    CHECK_THROWS_AS(s.validate(), domain_error);

    s.users[0].position.z = 1.0;
    s.units[0].center.z = 0.1;
    CHECK_THROWS_AS(s.validate(), domain_error);
}

TEST_CASE("decibel conversions")
{
    CHECK(db_to_linear(20.0) == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(Hall{}.amplitude_gain() == doctest::Approx(std::pow(10.0, -0.15)));
}
