// SPDX-License-Identifier: Apache-2.0
//
// sgq - shape-gain product quantization toolkit for limited-feedback MU-MIMO
// Copyright (C) 2026 The sgq Authors
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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "sgq/bit_alloc.hpp"
#include "sgq/gain_quant.hpp"
#include "sgq/shape_quant.hpp"

using namespace sgq::alloc;

namespace {

DistortionModel random_model(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> logk(-3.0, 3.0);
    std::uniform_int_distribution<int> dim(1, 4);
    return DistortionModel{std::exp(logk(rng)), std::exp(logk(rng)), dim(rng)};
}

double central_difference(double B_s, int B, const DistortionModel& m, double h) {
    return (total_distortion(B_s + h, B - B_s - h, m) - total_distortion(B_s - h, B - B_s + h, m)) / (2 * h);
}

}  // namespace

TEST_CASE("total distortion") {
    const DistortionModel m{1.0, 1.0, 2};
    CHECK(total_distortion(3, 1, m) == doctest::Approx(0.5).epsilon(1e-15));
    const DistortionModel n{0.7, 2.5, 3};
    CHECK(total_distortion(0, 0, n) == doctest::Approx(3.2).epsilon(1e-15));
    CHECK(total_distortion(2000, 2, n) == doctest::Approx(0.7 / 16).epsilon(1e-15));
    CHECK_THROWS_AS(total_distortion(-1, 0, n), std::invalid_argument);
    CHECK_THROWS_AS(total_distortion(1, 1, DistortionModel{0.0, 1.0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(total_distortion(1, 1, DistortionModel{1.0, -1.0, 2}), std::invalid_argument);
}

TEST_CASE("real optimum") {
    for (int M = 1; M <= 4; ++M) {
        const DistortionModel m{1.0, 2.0 * M - 1.0, M};
        const RealAllocation r = optimal_real_allocation(m, 16);
        CHECK(r.B_s == doctest::Approx((2.0 * M - 1) * 16 / (2.0 * M)).epsilon(1e-15));
        CHECK(r.B_s + r.B_g == doctest::Approx(16.0));
    }
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
        const DistortionModel m = random_model(rng);
        const int B = 24;
        const RealAllocation r = optimal_real_allocation(m, B);
        if (r.unclamped_B_s <= 0.5 || r.unclamped_B_s >= B - 0.5) continue;
        const double scale = total_distortion(r.B_s, r.B_g, m);
        CHECK(std::abs(central_difference(r.B_s, B, m, 1e-5)) / scale < 1e-8);
        CHECK(std::abs(distortion_slope(r.B_s, B, m)) / scale < 1e-9);
        const double c = 2.0 / (2 * m.M - 1);
        CHECK(std::abs(m.Ks_bar / (2 * m.M - 1) * std::exp2(-c * r.B_s) / (m.Kg * std::exp2(-2.0 * r.B_g)) - 1.0) <
              1e-9);
    }
}

TEST_CASE("real optimum clamps to the budget") {
    const RealAllocation lo = optimal_real_allocation(DistortionModel{1e6, 1e-6, 2}, 4);
    CHECK(lo.B_s == 0.0);
    CHECK(lo.B_g == 4.0);
    CHECK(lo.unclamped_B_s < 0.0);
    const RealAllocation hi = optimal_real_allocation(DistortionModel{1e-6, 1e6, 2}, 4);
    CHECK(hi.B_s == 4.0);
    CHECK(hi.B_g == 0.0);
    CHECK_THROWS_AS(optimal_real_allocation(DistortionModel{1, 1, 2}, -1), std::invalid_argument);
}

TEST_CASE("reference scenario real optimum from the analytic constants") {
    // Two transmit and two receive antennas, dominant mode, E[lambda_max] = 7/2.
    const double lambda_tilde = 3.5;
    const sgq::gain::GainPdfParams pdf = sgq::gain::GainPdfParams::for_mode(2, 2, 0, lambda_tilde);
    const double Kg = sgq::gain::kg_constant(pdf).K_g;
    const double Ks_bar = sgq::shape::ks_constant(2).K_s * lambda_tilde;
    const RealAllocation r = optimal_real_allocation(DistortionModel{Kg, Ks_bar, 2}, 16);
    MESSAGE("Kg " << Kg << " Ks_bar " << Ks_bar << " B_s " << r.B_s << " B_g " << r.B_g);
    CHECK(std::abs(r.B_s - 13.4) <= 0.3);
    CHECK(std::abs(r.B_g - 2.6) <= 0.3);
}

TEST_CASE("integer optimum") {
    CHECK(optimal_integer_allocation(DistortionModel{1, 1, 2}, 0).B_s == 0);
    CHECK(optimal_integer_allocation(DistortionModel{1, 1, 2}, 0).B_g == 0);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 100; ++i) {
        const DistortionModel m = random_model(rng);
        const int B = 16;
        const BitAllocation a = optimal_integer_allocation(m, B);
        CHECK(a.B_s + a.B_g == B);
        CHECK(a.B_s >= 0);
        CHECK(a.B_g >= 0);
        const double d = total_distortion(a.B_s, a.B_g, m);
        for (int bs = 0; bs <= B; ++bs) CHECK(d <= total_distortion(bs, B - bs, m));
        CHECK(std::abs(a.B_s - std::round(optimal_real_allocation(m, B).B_s)) <= 1.0);
    }
}

TEST_CASE("integer ties go to the larger shape budget") {
    // M = 1: Ks_bar 2^{-2 B_s} + Kg 2^{-2 B_g}; equal constants tie at B_s = 3 and 4 for B = 7.
    const BitAllocation a = optimal_integer_allocation(DistortionModel{1.0, 1.0, 1}, 7);
    CHECK(total_distortion(3, 4, DistortionModel{1.0, 1.0, 1}) == total_distortion(4, 3, DistortionModel{1.0, 1.0, 1}));
    CHECK(a.B_s == 4);
}

TEST_CASE("asymptotic allocation") {
    const RealAllocation a = asymptotic_allocation(2, 16);
    CHECK(a.B_s == 12.0);
    CHECK(a.B_g == 4.0);
    for (int M = 1; M <= 4; ++M) {
        const RealAllocation r = asymptotic_allocation(M, 40);
        CHECK(r.B_s / r.B_g == doctest::Approx(2.0 * M - 1));
    }
    const DistortionModel m{0.54, 9.8, 2};
    const double g16 = optimal_real_allocation(m, 16).B_s - asymptotic_allocation(2, 16).B_s;
    for (int B : {32, 64}) CHECK(optimal_real_allocation(m, B).B_s - asymptotic_allocation(2, B).B_s == doctest::Approx(g16));
}

TEST_CASE("distortion at the optimum") {
    const DistortionModel m{0.54, 9.8, 2};
    for (int B : {8, 12, 16}) {
        const double d = distortion_at_optimum(m, B).distortion;
        CHECK(distortion_at_optimum(m, B + m.M).distortion == doctest::Approx(d / 2).epsilon(1e-12));
    }
    const double Dc = distortion_at_optimum(m, 8).D_c;
    for (int B : {16, 24}) CHECK(std::abs(distortion_at_optimum(m, B).D_c / Dc - 1.0) < 1e-9);
    const OptimumDistortion o = distortion_at_optimum(m, 16);
    CHECK(o.distortion ==
          doctest::Approx(m.Ks_bar * std::exp2(-2.0 * o.at.B_s / 3.0) * (1.0 + 1.0 / 3.0)).epsilon(1e-12));
    double prev = distortion_at_optimum(m, 2).distortion;
    for (int B = 3; B <= 40; ++B) {
        const double d = distortion_at_optimum(m, B).distortion;
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("convexity in the shape budget") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const DistortionModel m = random_model(rng);
        const int B = 12;
        const double h = 1e-3;
        for (double bs = h; bs <= B - h; bs += 0.25) {
            const double second = (total_distortion(bs + h, B - bs - h, m) - 2 * total_distortion(bs, B - bs, m) +
                                   total_distortion(bs - h, B - bs + h, m)) /
                                  (h * h);
            CHECK(second >= -1e-6 * total_distortion(bs, B - bs, m));
            CHECK(distortion_curvature(bs, B, m) > 0.0);
            CHECK(std::abs(second - distortion_curvature(bs, B, m)) <= 1e-4 * distortion_curvature(bs, B, m) + 1e-9);
        }
    }
}

TEST_CASE("constant fit") {
    const double Kg = 0.6, Ks = 2.8, Eg2 = 3.5;
    std::vector<CurvePoint> gain, shape;
    for (int b = 4; b <= 10; ++b) gain.push_back({b, Kg * std::exp2(-2.0 * b)});
    for (int b = 8; b <= 14; ++b) shape.push_back({b, Ks * std::exp2(-2.0 * b / 3.0)});
    const DistortionModel m = fit_constants_empirical(gain, shape, Eg2, 2);
    CHECK(std::abs(m.Kg / Kg - 1.0) < 1e-12);
    CHECK(std::abs(m.Ks_bar / (Ks * Eg2) - 1.0) < 1e-12);
    CHECK(m.M == 2);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> noise(0.9, 1.1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<CurvePoint> g2 = gain, s2 = shape;
        for (CurvePoint& p : g2) p.distortion *= noise(rng);
        for (CurvePoint& p : s2) p.distortion *= noise(rng);
        const DistortionModel f = fit_constants_empirical(g2, s2, Eg2, 2);
        CHECK(std::abs(f.Kg / Kg - 1.0) < 0.15);
        CHECK(std::abs(f.Ks_bar / (Ks * Eg2) - 1.0) < 0.15);
    }

    std::vector<CurvePoint> two(gain.begin(), gain.begin() + 2);
    CHECK_THROWS_AS(fit_constants_empirical(two, shape, Eg2, 2), std::invalid_argument);
    std::vector<CurvePoint> bad = gain;
    bad[1].distortion = 0.0;
    CHECK_THROWS_AS(fit_constants_empirical(bad, shape, Eg2, 2), std::invalid_argument);
    CHECK_THROWS_AS(fit_constants_empirical(gain, shape, 0.0, 2), std::invalid_argument);
}
