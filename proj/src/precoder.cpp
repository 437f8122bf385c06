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

#include "sgq/precoder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace sgq::precoder {

void NoiseModel::validate() const {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw std::invalid_argument("noise variance must be positive");
    if (!(sigmaE2 >= 0.0) || !std::isfinite(sigmaE2))
        throw std::invalid_argument("quantization error variance must be nonnegative");
    if (!(P_max > 0.0) || !std::isfinite(P_max)) throw std::invalid_argument("power budget must be positive");
}

namespace {

void check_inputs(const QuantizedCSI& csi, const RVector& q, const NoiseModel& noise) {
    noise.validate();
    if (csi.F_hat.cols() != q.size()) throw std::invalid_argument("power vector length must match stream count");
    if (csi.F_hat.rows() < 1) throw std::invalid_argument("empty channel matrix");
    if ((q.array() < 0.0).any()) throw std::invalid_argument("powers must be nonnegative");
}

// J^{-1} F_hat and tr(J^{-1}).
struct Inverse {
    CMatrix W;
    double trace = 0.0;
};

Inverse solve(const QuantizedCSI& csi, const RVector& q, const NoiseModel& noise) {
    const CMatrix J = build_J(csi, q, noise);
    Eigen::LLT<CMatrix> llt(J);
    if (llt.info() != Eigen::Success) throw std::runtime_error("J is not positive definite");
    const CMatrix Jinv = llt.solve(CMatrix::Identity(J.rows(), J.cols()));
    return Inverse{Jinv * csi.F_hat, Jinv.trace().real()};
}

// Max minus min gradient over active coordinates, and the amount by which
// any inactive coordinate undercuts the active minimum, both relative to
// the largest gradient magnitude.
double kkt_residual(const RVector& q, const RVector& grad) {
    const double scale = std::max(grad.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Eigen::Index i = 0; i < q.size(); ++i)
        if (q[i] > 0.0) {
            lo = std::min(lo, grad[i]);
            hi = std::max(hi, grad[i]);
        }
    if (!std::isfinite(lo)) return 0.0;
    double r = hi - lo;
    for (Eigen::Index i = 0; i < q.size(); ++i)
        if (q[i] <= 0.0) r = std::max(r, lo - grad[i]);
    return r / scale;
}

}  // namespace

CMatrix build_J(const QuantizedCSI& csi, const RVector& q, const NoiseModel& noise) {
    check_inputs(csi, q, noise);
    const int M = csi.tx();
    CMatrix J = csi.F_hat * q.cast<cplx>().asDiagonal() * csi.F_hat.adjoint();
    J.diagonal().array() += noise.regularizer(M);
    // Symmetrize away rounding so J is exactly Hermitian.
    return 0.5 * (J + J.adjoint());
}

double power_objective(const QuantizedCSI& csi, const RVector& q, const NoiseModel& noise) {
    return noise.regularizer(csi.tx()) * solve(csi, q, noise).trace;
}

RVector power_objective_gradient(const QuantizedCSI& csi, const RVector& q, const NoiseModel& noise) {
    const Inverse inv = solve(csi, q, noise);
    return -noise.regularizer(csi.tx()) * inv.W.colwise().squaredNorm().transpose();
}

double predicted_smse(const QuantizedCSI& csi, const RVector& q, const NoiseModel& noise, int L) {
    return L - csi.tx() + power_objective(csi, q, noise);
}

RVector project_onto_power_set(const RVector& q, double P) {
    if (!(P > 0.0)) throw std::invalid_argument("power budget must be positive");
    RVector x = q.cwiseMax(0.0);
    if (x.sum() <= P) return x;
    // Projection onto the simplex {x >= 0, sum x = P}.
    std::vector<double> s(q.data(), q.data() + q.size());
    std::sort(s.begin(), s.end(), std::greater<>());
    double cum = 0.0, tau = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        cum += s[k];
        const double t = (cum - P) / static_cast<double>(k + 1);
        if (s[k] - t > 0.0) tau = t;
    }
    x = (q.array() - tau).cwiseMax(0.0).matrix();
    // Rounding in tau can leave the sum a few ulps above P.
    while (x.sum() > P) x *= std::nextafter(P / x.sum(), 0.0);
    return x;
}

OptimizerResult optimize_virtual_uplink_power(const QuantizedCSI& csi, const NoiseModel& noise, int L,
                                              OptimizerOptions options) {
    noise.validate();
    if (L != csi.streams()) throw std::invalid_argument("stream count mismatch");
    if (L < 1) throw std::invalid_argument("need at least one stream");
    const double P = noise.P_max;
    RVector q = RVector::Constant(L, P / L);
    double f = power_objective(csi, q, noise);
    RVector g = power_objective_gradient(csi, q, noise);
    // Initial step moves a gradient of typical size across a tenth of the
    // budget.
    double step = 0.1 * P / std::max(g.norm(), std::numeric_limits<double>::min());
    OptimizerResult res;
    int it = 0;
    int stalled = 0;
    for (; it < options.max_iters; ++it) {
        RVector q_new;
        double f_new = f;
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            q_new = project_onto_power_set(q - step * g, P);
            const RVector d = q_new - q;
            if (d.squaredNorm() == 0.0) break;
            f_new = power_objective(csi, q_new, noise);
            if (f_new <= f + 1e-4 * g.dot(d)) {
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
        const RVector g_new = power_objective_gradient(csi, q_new, noise);
        const RVector sq = q_new - q;
        const RVector yg = g_new - g;
        const double sy = sq.dot(yg);
        // Barzilai-Borwein step for the next iteration.
        step = sy > 0.0 ? sq.squaredNorm() / sy : 2.0 * step;
        const double change = std::abs(f - f_new) / std::max(std::abs(f_new), std::numeric_limits<double>::min());
        q = q_new;
        f = f_new;
        g = g_new;
        stalled = change < options.rel_tol ? stalled + 1 : 0;
        if (stalled > 0 && (kkt_residual(q, g) < 1e-9 || stalled >= 20)) {
            ++it;
            break;
        }
    }
    res.q = q;
    res.iterations = it;
    res.objective = f;
    res.kkt_residual = kkt_residual(q, g);
    return res;
}

PrecoderSolution mmse_precoder(const QuantizedCSI& csi, const RVector& q, const NoiseModel& noise) {
    const Inverse inv = solve(csi, q, noise);
    const int M = csi.tx();
    const int L = csi.streams();
    PrecoderSolution sol;
    sol.U.resize(M, L);
    sol.rx_scale.resize(L);
    for (int l = 0; l < L; ++l) {
        const double n = inv.W.col(l).norm();
        if (q[l] > 0.0 && n > 0.0) {
            sol.U.col(l) = inv.W.col(l) / n;
            sol.rx_scale[l] = std::sqrt(q[l]) * n;
        } else {
            const double fn = csi.F_hat.col(l).norm();
            if (fn > 0.0) {
                sol.U.col(l) = csi.F_hat.col(l) / fn;
            } else {
                sol.U.col(l).setZero();
                sol.U(0, l) = 1.0;
            }
            sol.rx_scale[l] = 0.0;
        }
    }
    sol.q = q;
    sol.p = downlink_power(q);
    sol.J = build_J(csi, q, noise);
    sol.predicted_smse = L - M + noise.regularizer(M) * inv.trace;
    return sol;
}

RVector downlink_power(const RVector& q) {
    if ((q.array() < 0.0).any()) throw std::invalid_argument("powers must be nonnegative");
    return q;
}

}  // namespace sgq::precoder
