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

#include "oracles.hpp"

#include "saos/closed_form.hpp"
#include "saos/reflection.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace saos;

namespace
{
    constexpr double pi = std::numbers::pi;

    oracle::Instance reference_instance()
    {
        oracle::Instance inst;
        inst.system.rician_bs = inst.system.rician_ms = db_to_linear(13.0);
        const double lambda = inst.system.wavelength();
        inst.layout.tiles_v = 3;
        inst.layout.tiles_h = 8;
        inst.layout.tile_gap_v = 1.0;
        inst.layout.tile_gap_h = 3.0;
        inst.layout.tile_spec.n_v = inst.layout.tile_spec.n_h = 3;
        inst.layout.tile_spec.spacing_v = inst.layout.tile_spec.spacing_h = lambda / 6;
        inst.layout.center = {0, 0, 5};
        inst.bs_array.n_v = inst.bs_array.n_h = 4;
        inst.bs_array.spacing_v = inst.bs_array.spacing_h = lambda / 2;
        inst.bs = {100, -100, 10};
        inst.ms = {4, 0, 0};
        return inst;
    }

    double circular_distance(double a, double b)
    {
        return std::abs(std::remainder(a - b, 2 * pi));
    }
}

TEST_CASE("wrap_phase maps into (-pi, pi]")
{
    CHECK(wrap_phase(pi) == doctest::Approx(pi));
    CHECK(wrap_phase(-pi) == doctest::Approx(pi));
    CHECK(wrap_phase(3 * pi / 2) == doctest::Approx(-pi / 2));
    CHECK(wrap_phase(0.25) == 0.25);
    for (double x = -50.0; x < 50.0; x += 0.37)
    {
        const double w = wrap_phase(x);
        CHECK(w > -pi);
        CHECK(w <= pi);
        CHECK(circular_distance(w, x) < 1e-12);
    }
}

TEST_CASE("optimal phases zero Omega against the reference")
{
    const oracle::Instance inst = reference_instance();
    const LinkGeometry g = inst.geometry();
    for (const ElementRef ref : {ElementRef{0, 0}, ElementRef{13, 4}, ElementRef{23, 8}})
    {
        const double ref_phase = 0.7;
        const ReflectionPhases p = optimal_phases(g, ref, ref_phase);
        CHECK(p.phases(ref.tile, ref.element) == doctest::Approx(ref_phase));
        for (int m = 0; m < g.tile_count(); ++m)
            for (int s = 0; s < g.n_tile_elements(); ++s)
            {
                CHECK(std::abs(wrap_phase(omega(g, p, ref.tile, ref.element, m, s))) < 1e-9);
                CHECK(p.phases(m, s) > -pi);
                CHECK(p.phases(m, s) <= pi);
            }
    }
}

TEST_CASE("optimal phases on a single two-element tile")
{
    oracle::Instance inst = reference_instance();
    inst.layout.tiles_v = inst.layout.tiles_h = 1;
    inst.layout.tile_spec.n_v = 1;
    inst.layout.tile_spec.n_h = 2;
    inst.ms = {3.0, 0.4, 1.0};
    const LinkGeometry g = inst.geometry();
    const ReflectionPhases p = optimal_phases(g);

    // Independent evaluation: r from raw positions, Upsilon reduces to the horizontal departure frequency
    const auto pts = oracle::tile_elements(inst, 0);
    const double lambda = inst.system.wavelength();
    const double r0 = (inst.ms.vec() - pts[0]).norm();
    const double r1 = (inst.ms.vec() - pts[1]).norm();
    const Eigen::Vector3d u = (inst.bs.vec() - inst.layout.center.vec()).normalized();
    const double phi_t = 2 * pi / lambda * inst.layout.tile_spec.spacing_h * u.y();
    CHECK(p.phases(0, 0) == 0.0);
    CHECK(circular_distance(p.phases(0, 1), 2 * pi * (r0 - r1) / lambda + phi_t) < 1e-9);
}

TEST_CASE("changing the reference shifts all optimal phases by one constant")
{
    const oracle::Instance inst = reference_instance();
    const LinkGeometry g = inst.geometry();
    const ReflectionPhases a = optimal_phases(g, {0, 0});
    const ReflectionPhases b = optimal_phases(g, {17, 5}, -1.1);
    const double shift = b.phases(0, 0) - a.phases(0, 0);
    for (int m = 0; m < g.tile_count(); ++m)
        for (int s = 0; s < g.n_tile_elements(); ++s)
            CHECK(circular_distance(b.phases(m, s) - a.phases(m, s), shift) < 1e-9);
}

TEST_CASE("random phases: reproducible, in range and uniform")
{
    Rng r1(42), r2(42);
    const ReflectionPhases a = random_phases(r1, 4, 9);
    const ReflectionPhases b = random_phases(r2, 4, 9);
    CHECK((a.phases - b.phases).norm() == 0.0);

    Rng rng(7);
    const int n = 100000;
    const ReflectionPhases big = random_phases(rng, 1, n);
    std::vector<double> x(big.phases.data(), big.phases.data() + n);
    std::sort(x.begin(), x.end());
    CHECK(x.front() > -pi);
    CHECK(x.back() <= pi);
    double d = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double cdf = (x[static_cast<std::size_t>(i)] + pi) / (2 * pi);
        d = std::max({d, std::abs(cdf - double(i) / n), std::abs(cdf - double(i + 1) / n)});
    }
    // Kolmogorov-Smirnov critical value at alpha = 0.01
    CHECK(d < 1.628 / std::sqrt(double(n)));
}

TEST_CASE("reflection coefficients are unit modulus")
{
    Rng rng(1);
    const ReflectionPhases p = random_phases(rng, 3, 5);
    for (int m = 0; m < 3; ++m)
    {
        const Eigen::VectorXcd c = p.coefficients(m);
        for (int s = 0; s < 5; ++s)
            CHECK(std::abs(std::abs(c(s)) - 1.0) < 1e-15);
    }
}

TEST_CASE("apply_reflection")
{
    const oracle::Instance inst = reference_instance();
    const ChannelSynthesizer synth(inst.system, inst.geometry());
    const ChannelRealization r = synth.realize(5);

    SUBCASE("zero phases give the plain sum")
    {
        Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(16);
        for (int m = 0; m < r.tile_count(); ++m)
            sum += r.bs_channels[m].matrix * r.ms_channels[m].vector;
        CHECK((apply_reflection(r, ReflectionPhases::zeros(24, 9)) - sum).norm() < 1e-12 * sum.norm());
    }
    SUBCASE("equals the dense block-diagonal product")
    {
        Rng rng(3);
        const ReflectionPhases p = random_phases(rng, 24, 9);
        Eigen::MatrixXcd h_bs(16, 24 * 9);
        Eigen::VectorXcd h(24 * 9), gamma(24 * 9);
        for (int m = 0; m < 24; ++m)
        {
            h_bs.middleCols(m * 9, 9) = r.bs_channels[m].matrix;
            h.segment(m * 9, 9) = r.ms_channels[m].vector;
            for (int s = 0; s < 9; ++s)
                gamma(m * 9 + s) = std::polar(1.0, p.phases(m, s));
        }
        const Eigen::VectorXcd dense = h_bs * gamma.asDiagonal() * h;
        CHECK((apply_reflection(r, p) - dense).norm() < 1e-12 * dense.norm());
    }
    SUBCASE("scalar system")
    {
        ChannelRealization s;
        s.bs_channels.push_back({Eigen::MatrixXcd::Constant(1, 1, {2.0, 1.0}), {}, {}, 0.0});
        s.ms_channels.push_back({Eigen::VectorXcd::Constant(1, {0.5, -0.5}), {}, {}, {}});
        ReflectionPhases p = ReflectionPhases::zeros(1, 1);
        p.phases(0, 0) = 0.3;
        const std::complex<double> expected = std::complex<double>(2.0, 1.0) * std::polar(1.0, 0.3) * std::complex<double>(0.5, -0.5);
        CHECK(std::abs(apply_reflection(s, p)(0) - expected) < 1e-15);
    }
    SUBCASE("dimension mismatch")
    {
        CHECK_THROWS_AS(apply_reflection(r, ReflectionPhases::zeros(23, 9)), std::invalid_argument);
        CHECK_THROWS_AS(apply_reflection(r, ReflectionPhases::zeros(24, 4)), std::invalid_argument);
    }
}

TEST_CASE("optimal phases beat random phases on LoS power")
{
    oracle::Instance inst = reference_instance();
    inst.system.los_only = true;
    const LinkGeometry g = inst.geometry();
    const ChannelRealization r = ChannelSynthesizer(inst.system, g).realize(1);
    const double best = apply_reflection(r, optimal_phases(g)).squaredNorm();
    Rng rng(11);
    for (int i = 0; i < 200; ++i)
        CHECK(apply_reflection(r, random_phases(rng, 24, 9)).squaredNorm() < best);
}
