// SPDX-License-Identifier: Apache-2.0
//
// saos-sim: simulator for sparse arrays of RIS sub-surfaces
// Copyright (C) 2026 saos-sim contributors
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

#include "saos/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace saos;

namespace
{
    constexpr double pi = std::numbers::pi;
    constexpr double lambda = 299792458.0 / 28e9;

    SaosLayout default_layout()
    {
        SaosLayout l;
        l.tiles_v = 3;
        l.tiles_h = 8;
        l.tile_gap_v = 1.0;
        l.tile_gap_h = 3.0;
        l.tile_spec.n_v = l.tile_spec.n_h = 3;
        l.tile_spec.spacing_v = l.tile_spec.spacing_h = lambda / 6.0;
        l.center = {0.0, 0.0, 5.0};
        return l;
    }
}

TEST_CASE("element positions of a single 1x1 tile sit at the center")
{
    SaosLayout l;
    l.tile_spec.n_v = l.tile_spec.n_h = 1;
    l.tile_spec.spacing_v = l.tile_spec.spacing_h = 0.01;
    l.center = {0.0, 0.0, 5.0};
    const auto p = element_positions(l, 0);
    REQUIRE(p.size() == 1);
    CHECK(p[0] == Position3{0.0, 0.0, 5.0});
}

TEST_CASE("middle element of a 3x3 tile is the tile center")
{
    SaosLayout l = default_layout();
    l.tiles_v = l.tiles_h = 1;
    const auto p = element_positions(l, 0);
    REQUIRE(p.size() == 9);
    CHECK(p[4].x == doctest::Approx(0.0));
    CHECK(p[4].y == doctest::Approx(0.0));
    CHECK(p[4].z == doctest::Approx(5.0));
    // vertical-major: element 1 is one column to the right of element 0
    CHECK(p[1].y - p[0].y == doctest::Approx(lambda / 6.0));
    CHECK(p[3].z - p[0].z == doctest::Approx(lambda / 6.0));
}

TEST_CASE("adjacent tile centers are exactly one gap apart")
{
    const SaosLayout l = default_layout();
    for (int row = 0; row < 3; ++row)
        for (int col = 0; col + 1 < 8; ++col)
        {
            const Position3 a = l.tile_center(row * 8 + col);
            const Position3 b = l.tile_center(row * 8 + col + 1);
            CHECK(b.y - a.y == doctest::Approx(3.0).epsilon(1e-14));
            CHECK(a.z == b.z);
        }
    CHECK(l.tile_center(8).z - l.tile_center(0).z == doctest::Approx(1.0));
    CHECK_THROWS_AS(l.tile_center(24), std::out_of_range);
    CHECK_THROWS_AS(element_positions(l, -1), std::out_of_range);
}

TEST_CASE("tile grid is symmetric and elements are coplanar around their tile center")
{
    const SaosLayout l = default_layout();
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    for (int t = 0; t < l.tile_count(); ++t)
    {
        const Position3 c = l.tile_center(t);
        sum += c.vec();
        Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
        for (const auto &p : element_positions(l, t))
        {
            CHECK(std::abs(p.x - l.center.x) < 1e-12);
            centroid += p.vec();
        }
        centroid /= 9.0;
        CHECK((centroid - c.vec()).norm() < 1e-12);
    }
    CHECK((sum / l.tile_count() - l.center.vec()).norm() < 1e-12);
}

TEST_CASE("zero gap co-locates tiles")
{
    SaosLayout l = default_layout();
    l.tile_gap_h = 0.0;
    CHECK(l.tile_center(0) == l.tile_center(7));
}

TEST_CASE("direction angles")
{
    const DirectionAngles up = direction_angles({0, 0, 0}, {0, 0, 1});
    CHECK(up.elevation == doctest::Approx(0.0));

    const DirectionAngles x = direction_angles({0, 0, 0}, {1, 0, 0});
    CHECK(x.elevation == doctest::Approx(pi / 2));
    CHECK(x.azimuth == doctest::Approx(0.0));

    // Hand arithmetic: d = (100, -100, 5) / sqrt(20025)
    const DirectionAngles bs = direction_angles({0, 0, 5}, {100, -100, 10});
    const double norm = std::sqrt(20025.0);
    CHECK(std::cos(bs.elevation) == doctest::Approx(5.0 / norm));
    CHECK(bs.azimuth == doctest::Approx(-pi / 4));
    CHECK(std::sin(bs.elevation) * std::cos(bs.azimuth) == doctest::Approx(100.0 / norm));

    CHECK(direction_angles({0, 0, 0}, {-1, 0, 0}).azimuth == doctest::Approx(pi));
    CHECK_THROWS_AS(direction_angles({1, 2, 3}, {1, 2, 3}), GeometryError);
}

TEST_CASE("direction angles round-trip through the unit vector")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 1000; ++i)
    {
        const Position3 a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
        const DirectionAngles d = direction_angles(a, b);
        CHECK(d.elevation >= 0.0);
        CHECK(d.elevation <= pi);
        CHECK(d.azimuth > -pi);
        CHECK(d.azimuth <= pi);
        CHECK((d.unit_vector() - (b - a).normalized()).norm() < 1e-12);
    }
}

TEST_CASE("spatial frequencies")
{
    const SpatialFrequencies broadside = spatial_frequencies({pi / 2, 0.0}, 0.3, 0.7, lambda);
    CHECK(std::abs(broadside.vertical) < 1e-12);
    CHECK(std::abs(broadside.horizontal) < 1e-12);

    CHECK(spatial_frequencies({0.0, 0.0}, lambda / 2, lambda / 2, lambda).vertical == doctest::Approx(pi));

    const SpatialFrequencies f = spatial_frequencies({pi / 3, pi / 6}, lambda / 6, lambda / 6, lambda);
    CHECK(f.vertical == doctest::Approx(pi / 3 * std::cos(pi / 3)));
    CHECK(f.horizontal == doctest::Approx(pi / 3 * std::sin(pi / 3) * std::sin(pi / 6)));

    // Linear in 1/lambda
    const SpatialFrequencies g = spatial_frequencies({pi / 3, pi / 6}, lambda / 6, lambda / 6, lambda / 2);
    CHECK(g.vertical == doctest::Approx(2 * f.vertical));
    CHECK(g.horizontal == doctest::Approx(2 * f.horizontal));

    CHECK_THROWS_AS(spatial_frequencies({0.0, 0.0}, 1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(spatial_frequencies({0.0, 0.0}, -1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("angle and projection forms of spatial frequencies agree")
{
    PlanarArraySpec a;
    a.n_v = a.n_h = 4;
    a.spacing_v = a.spacing_h = lambda / 2;
    const DirectionAngles d = direction_angles({0, 0, 5}, {100, -100, 10});
    const SpatialFrequencies p = spatial_frequencies(d.unit_vector(), a, lambda);
    const SpatialFrequencies q = spatial_frequencies(d, a.spacing_v, a.spacing_h, lambda);
    CHECK(p.vertical == doctest::Approx(q.vertical).epsilon(1e-12));
    CHECK(p.horizontal == doctest::Approx(q.horizontal).epsilon(1e-12));
}

TEST_CASE("visible region membership")
{
    const VisibleRegion vr{{0, 0, 5}, Direction3::UnitX(), pi / 4};
    CHECK(in_visible_region(vr, {3, 0, 0}));
    CHECK_FALSE(in_visible_region(vr, {3, 4, 0}));
    CHECK(in_visible_region(vr, {3, 3, 2}));
    CHECK(in_visible_region(vr, {3, -3, 2}));
    CHECK_FALSE(in_visible_region(vr, {-1, 0, 5}));
    CHECK(in_visible_region(vr, {0, 0, -7}));
}

TEST_CASE("visible region ignores z and is translation invariant")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    const VisibleRegion vr{{0, 0, 5}, Direction3::UnitX(), pi / 4};
    for (int i = 0; i < 500; ++i)
    {
        const Position3 p{u(rng), u(rng), u(rng)};
        const Eigen::Vector3d shift{u(rng), u(rng), u(rng)};
        const bool inside = in_visible_region(vr, p);
        CHECK(in_visible_region(vr, {p.x, p.y, u(rng)}) == inside);
        const VisibleRegion moved{vr.apex + shift, vr.axis, vr.half_angle_azimuth};
        CHECK(in_visible_region(moved, p + shift) == inside);
    }
}

TEST_CASE("a tile's sector at x = 3 spans 6 m and 7 tiles at 2 m pitch span 18 m")
{
    SaosLayout l = default_layout();
    l.tiles_h = 7;
    l.tile_gap_h = 2.0;
    auto covered = [&](int tile, double y) { return in_visible_region(tile_visible_region(l, tile, pi / 4), {3.0, y, 0.0}); };

    // Single middle tile: covered iff |y| <= 3
    CHECK(covered(3, 3.0));
    CHECK(covered(3, -3.0));
    CHECK_FALSE(covered(3, 3.001));
    CHECK_FALSE(covered(3, -3.001));

    // Union over tiles 0..6 spans y in [-9, 9]
    auto any = [&](double y) {
        for (int t = 0; t < 7; ++t)
            if (covered(t, y))
                return true;
        return false;
    };
    for (double y = -9.0; y <= 9.0; y += 0.05)
        CHECK(any(y));
    CHECK_FALSE(any(9.01));
    CHECK_FALSE(any(-9.01));
}

TEST_CASE("element distance")
{
    SaosLayout l;
    l.tile_spec.n_v = l.tile_spec.n_h = 1;
    l.tile_spec.spacing_v = l.tile_spec.spacing_h = 0.01;
    l.center = {0, 0, 5};
    CHECK(element_distance({3, 0, 5}, l, 0, 0) == doctest::Approx(3.0));
    CHECK(element_distance({3, 4, 5}, l, 0, 0) == doctest::Approx(5.0));

    l.center = {0, 0.5, 5.1};
    CHECK(element_distance({4, 1, 0}, l, 0, 0) == doctest::Approx(std::sqrt(16 + 0.25 + 26.01)));
    CHECK_THROWS_AS(element_distance({0, 0.5, 5.1}, l, 0, 0), GeometryError);
    CHECK_THROWS(element_distance({1, 0, 0}, l, 0, 1));
}

TEST_CASE("array spec validation")
{
    PlanarArraySpec a;
    a.n_v = 0;
    CHECK_THROWS_AS(a.validate(), std::invalid_argument);
    a.n_v = 2;
    a.spacing_v = 0.0;
    CHECK_THROWS_AS(a.validate(), std::invalid_argument);
    a.spacing_v = 0.1;
    a.horizontal_axis = Direction3::UnitZ();
    CHECK_THROWS_AS(a.validate(), std::invalid_argument);

    SaosLayout l = default_layout();
    l.tile_gap_h = -1.0;
    CHECK_THROWS_AS(l.validate(), std::invalid_argument);
}
