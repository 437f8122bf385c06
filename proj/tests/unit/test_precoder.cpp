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
#include <limits>
#include <vector>

#include "doctest.h"
#include "sgq/precoder.hpp"
#include "sgq/rng.hpp"

using namespace sgq;
using namespace sgq::precoder;

namespace {

QuantizedCSI random_csi(int M, int L, Rng& rng) {
    QuantizedCSI csi;
    csi.F_hat.resize(M, L);
    ComplexGaussian g;
    for (int i = 0; i < M; ++i)
        for (int l = 0; l < L; ++l) csi.F_hat(i, l) = g(rng);
    for (int l = 0; l < L; ++l) csi.labels.push_back({l, 0});
    return csi;
}

QuantizedCSI from_matrix(CMatrix F) {
    QuantizedCSI csi;
    csi.F_hat = std::move(F);
    for (Eigen::Index l = 0; l < csi.F_hat.cols(); ++l) csi.labels.push_back({static_cast<int>(l), 0});
    return csi;
}

// Spread of the gradient over active coordinates and the worst amount an
// inactive coordinate falls below the active minimum.
double absolute_kkt(const RVector& q, const RVector& g) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Eigen::Index i = 0; i < q.size(); ++i)
        if (q[i] > 0.0) {
            lo = std::min(lo, g[i]);
            hi = std::max(hi, g[i]);
        }
    double r = hi - lo;
    for (Eigen::Index i = 0; i < q.size(); ++i)
        if (q[i] <= 0.0) r = std::max(r, lo - g[i]);
    return r;
}

}  // namespace

TEST_CASE("J at zero power and for a rank-one update") {
    Rng rng = make_rng(1, "J");
    const QuantizedCSI csi = random_csi(3, 2, rng);
    const NoiseModel noise{0.5, 0.3, 6.0};
    const double rho = 0.5 + 0.3 * 6.0 / 3;
    CHECK(noise.regularizer(3) == doctest::Approx(rho));
    const CMatrix J0 = build_J(csi, RVector::Zero(2), noise);
    CHECK((J0 - rho * CMatrix::Identity(3, 3)).norm() < 1e-15);

    CMatrix F = CMatrix::Zero(3, 1);
    F(0, 0) = cplx(0.6, 0.8) * 2.0;
    const CMatrix J1 = build_J(from_matrix(F), RVector::Constant(1, 6.0), noise);
    CMatrix expected = rho * CMatrix::Identity(3, 3);
    expected(0, 0) += 6.0 * 4.0;
    CHECK((J1 - expected).norm() < 1e-12);
    CHECK_THROWS_AS(build_J(csi, RVector::Zero(3), noise), std::invalid_argument);
    CHECK_THROWS_AS(build_J(csi, RVector::Constant(2, -1.0), noise), std::invalid_argument);
    CHECK_THROWS_AS(build_J(csi, RVector::Zero(2), NoiseModel{0.0, 0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("J is Hermitian with eigenvalues above the noise floor") {
    Rng rng = make_rng(2, "J-random");
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int t = 0; t < 50; ++t) {
        const QuantizedCSI csi = random_csi(4, 3, rng);
        RVector q(3);
        for (int i = 0; i < 3; ++i) q[i] = u(rng);
        const NoiseModel noise{0.7, 0.0, 9.0};
        const CMatrix J = build_J(csi, q, noise);
        CHECK((J - J.adjoint()).norm() == 0.0);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(J);
        CHECK(es.eigenvalues().minCoeff() >= 0.7 - 1e-12);
    }
}

TEST_CASE("predicted SMSE") {
    Rng rng = make_rng(3, "smse");
    const QuantizedCSI csi = random_csi(2, 2, rng);
    const NoiseModel noise{1.0, 0.2, 10.0};
    CHECK(predicted_smse(csi, RVector::Zero(2), noise, 2) == doctest::Approx(2.0).epsilon(1e-14));
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int t = 0; t < 100; ++t) {
        const QuantizedCSI c = random_csi(3, 3, rng);
        RVector q(3);
        for (int i = 0; i < 3; ++i) q[i] = u(rng);
        const double base = predicted_smse(c, q, noise, 3);
        for (int i = 0; i < 3; ++i) {
            RVector q2 = q;
            q2[i] += u(rng);
            CHECK(predicted_smse(c, q2, noise, 3) <= base + 1e-12);
        }
    }
}

TEST_CASE("SMSE saturates at high power when quantization error is present") {
    Rng rng = make_rng(4, "saturation");
    const QuantizedCSI csi = random_csi(2, 2, rng);
    double prev = std::numeric_limits<double>::infinity();
    double last = 0.0;
    for (double P : {1.0, 1e2, 1e4, 1e6, 1e8}) {
        const NoiseModel noise{1.0, 0.05, P};
        const OptimizerResult r = optimize_virtual_uplink_power(csi, noise, 2);
        last = predicted_smse(csi, r.q, noise, 2);
        CHECK(last <= prev + 1e-9);
        prev = last;
    }
    CHECK(last > 0.01);
    const NoiseModel exact{1.0, 0.0, 1e8};
    const OptimizerResult r = optimize_virtual_uplink_power(csi, exact, 2);
    CHECK(predicted_smse(csi, r.q, exact, 2) < 1e-5);
}

TEST_CASE("gradient against finite differences") {
    Rng rng = make_rng(5, "gradient");
    const QuantizedCSI csi = random_csi(3, 2, rng);
    const NoiseModel noise{0.8, 0.1, 4.0};
    RVector q(2);
    q << 1.3, 0.4;
    const RVector g = power_objective_gradient(csi, q, noise);
    for (int i = 0; i < 2; ++i) {
        RVector a = q, b = q;
        const double h = 1e-6;
        a[i] += h;
        b[i] -= h;
        const double fd = (power_objective(csi, a, noise) - power_objective(csi, b, noise)) / (2 * h);
        CHECK(std::abs(fd - g[i]) < 1e-7 * std::max(1.0, std::abs(g[i])));
    }
}

TEST_CASE("objective is convex in the powers") {
    Rng rng = make_rng(6, "convex");
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int t = 0; t < 200; ++t) {
        const QuantizedCSI csi = random_csi(3, 3, rng);
        const NoiseModel noise{1.0, 0.1, 15.0};
        RVector a(3), b(3);
        for (int i = 0; i < 3; ++i) {
            a[i] = u(rng);
            b[i] = u(rng);
        }
        const double mid = power_objective(csi, 0.5 * (a + b), noise);
        CHECK(mid <= 0.5 * (power_objective(csi, a, noise) + power_objective(csi, b, noise)) + 1e-9);
    }
}

TEST_CASE("projection onto the power set") {
    RVector q(3);
    q << 0.5, -1.0, 0.2;
    RVector inside = project_onto_power_set(q, 2.0);
    CHECK(inside[0] == 0.5);
    CHECK(inside[1] == 0.0);
    CHECK(inside[2] == 0.2);
    q << 3.0, 1.0, -2.0;
    const RVector p = project_onto_power_set(q, 2.0);
    CHECK(p[0] == doctest::Approx(2.0));
    CHECK(p[1] == doctest::Approx(0.0));
    CHECK(p[2] == 0.0);
    q << 2.0, 2.0, 2.0;
    const RVector e = project_onto_power_set(q, 3.0);
    for (int i = 0; i < 3; ++i) CHECK(e[i] == doctest::Approx(1.0));
    // Brute-force oracle for the Euclidean projection on a 2-D grid.
    Rng rng = make_rng(7, "projection");
    std::normal_distribution<double> n(0.0, 2.0);
    for (int t = 0; t < 20; ++t) {
        RVector x(2);
        x << n(rng), n(rng);
        const RVector pr = project_onto_power_set(x, 1.0);
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 400; ++i)
            for (int j = 0; i + j <= 400; ++j) {
                RVector c(2);
                c << i / 400.0, j / 400.0;
                best = std::min(best, (c - x).norm());
            }
        CHECK((pr - x).norm() <= best + 1e-12);
        CHECK((pr - x).norm() >= best - 2.0 / 400.0);
    }
    CHECK_THROWS_AS(project_onto_power_set(q, 0.0), std::invalid_argument);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int t = 0; t < 20000; ++t) {
        RVector x(1 + t % 6);
        for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = u(rng);
        const double P = std::pow(10.0, 0.1 * (t % 31));
        CHECK(project_onto_power_set(x, P).sum() <= P);
    }
}

TEST_CASE("single stream spends the whole budget") {
    Rng rng = make_rng(8, "single");
    const QuantizedCSI csi = random_csi(2, 1, rng);
    const NoiseModel noise{1.0, 0.1, 5.0};
    const OptimizerResult r = optimize_virtual_uplink_power(csi, noise, 1);
    CHECK(r.q[0] == doctest::Approx(5.0).epsilon(1e-12));
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 1000; ++i) {
        const double f = power_objective(csi, RVector::Constant(1, 5.0 * i / 1000), noise);
        CHECK(f < prev);
        prev = f;
    }
}

TEST_CASE("orthonormal equal-gain streams split the power evenly") {
    CMatrix F = CMatrix::Identity(2, 2);
    F(0, 0) = cplx(0.0, 1.0);
    const QuantizedCSI csi = from_matrix(F);
    const NoiseModel noise{1.0, 0.0, 8.0};
    const OptimizerResult r = optimize_virtual_uplink_power(csi, noise, 2);
    CHECK(std::abs(r.q[0] - 4.0) < 1e-6);
    CHECK(std::abs(r.q[1] - 4.0) < 1e-6);
    double best = std::numeric_limits<double>::infinity();
    double arg = -1.0;
    const int steps = 10000;
    for (int i = 0; i <= steps; ++i) {
        RVector q(2);
        q << 8.0 * i / steps, 8.0 * (steps - i) / steps;
        const double f = power_objective(csi, q, noise);
        if (f < best) {
            best = f;
            arg = q[0];
        }
    }
    CHECK(arg == doctest::Approx(4.0));
    CHECK(r.objective <= best + 1e-12);
}

TEST_CASE("optimizer descends and satisfies the optimality conditions") {
    Rng rng = make_rng(9, "optimizer");
    int worst_iters = 0;
    for (int t = 0; t < 200; ++t) {
        const int M = 2 + t % 3;
        const int L = 1 + t % M;
        const QuantizedCSI csi = random_csi(M, L, rng);
        const double P = std::pow(10.0, (t % 7) * 0.5);
        const NoiseModel noise{1.0, (t % 2) ? 0.05 : 0.0, P};
        const OptimizerResult r = optimize_virtual_uplink_power(csi, noise, L);
        worst_iters = std::max(worst_iters, r.iterations);
        CHECK(r.iterations < 10000);
        CHECK(r.q.sum() <= P + 1e-9);
        CHECK((r.q.array() >= 0.0).all());
        CHECK(r.objective <= power_objective(csi, RVector::Constant(L, P / L), noise) + 1e-12);
        CHECK(r.objective == doctest::Approx(power_objective(csi, r.q, noise)));
        CHECK(absolute_kkt(r.q, power_objective_gradient(csi, r.q, noise)) < 1e-5);
        if (noise.sigmaE2 == 0.0) CHECK(r.q.sum() == doctest::Approx(P).epsilon(1e-9));
    }
    MESSAGE("max iterations " << worst_iters);
    CHECK_THROWS_AS(optimize_virtual_uplink_power(random_csi(2, 2, rng), NoiseModel{}, 3), std::invalid_argument);
}

TEST_CASE("MMSE precoder columns") {
    CMatrix e1 = CMatrix::Zero(3, 1);
    e1(0, 0) = 1.0;
    const NoiseModel noise{1.0, 0.0, 2.0};
    const PrecoderSolution s1 = mmse_precoder(from_matrix(e1), RVector::Constant(1, 2.0), noise);
    CHECK((s1.U - e1).norm() < 1e-15);

    // Orthogonal channels with unequal gains and powers.
    CMatrix F(2, 2);
    F << cplx(1.0, 1.0), cplx(-2.0, 0.0), cplx(2.0, 0.0), cplx(1.0, -1.0);
    CHECK(std::abs(F.col(0).dot(F.col(1))) < 1e-15);
    RVector q(2);
    q << 1.5, 0.5;
    const PrecoderSolution s = mmse_precoder(from_matrix(F), q, noise);
    CHECK(std::abs(s.U.col(0).dot(s.U.col(1))) < 1e-9);

    Rng rng = make_rng(10, "mmse");
    for (int t = 0; t < 50; ++t) {
        const QuantizedCSI csi = random_csi(3, 2, rng);
        const NoiseModel n{1.0, 0.1, 4.0};
        const OptimizerResult r = optimize_virtual_uplink_power(csi, n, 2);
        const PrecoderSolution sol = mmse_precoder(csi, r.q, n);
        for (int l = 0; l < 2; ++l) CHECK(std::abs(sol.U.col(l).norm() - 1.0) < 1e-9);
        CHECK(sol.p == sol.q);
        CHECK(sol.predicted_smse == doctest::Approx(predicted_smse(csi, r.q, n, 2)));
        Eigen::SelfAdjointEigenSolver<CMatrix> es(sol.J);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        // Unnormalized column J^{-1} f sqrt(q) is parallel to U with length rx_scale.
        const CMatrix W = sol.J.inverse() * csi.F_hat;
        for (int l = 0; l < 2; ++l)
            if (r.q[l] > 0.0)
                CHECK((W.col(l) * std::sqrt(r.q[l]) - sol.U.col(l) * sol.rx_scale[l]).norm() < 1e-9);
    }
}

TEST_CASE("inactive stream falls back to its matched filter") {
    CMatrix F(2, 2);
    F << 3.0, 0.0, 0.0, cplx(0.0, 0.5);
    RVector q(2);
    q << 1.0, 0.0;
    const PrecoderSolution s = mmse_precoder(from_matrix(F), q, NoiseModel{1.0, 0.0, 1.0});
    CHECK(s.p[1] == 0.0);
    CHECK(s.rx_scale[1] == 0.0);
    CHECK((s.U.col(1) - F.col(1) / 0.5).norm() < 1e-15);
}

TEST_CASE("downlink powers equal the virtual uplink powers") {
    RVector q(2);
    q << 3.0, 0.0;
    const RVector p = downlink_power(q);
    CHECK(p == q);
    CHECK(p.sum() == q.sum());
    CHECK_THROWS_AS(downlink_power(RVector::Constant(2, -1.0)), std::invalid_argument);
}
