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

#include "sgq/bit_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sgq::alloc {

namespace {

void check_budget(int B) {
    if (B < 0) throw std::invalid_argument("bit budget must be >= 0");
}

double shape_exponent(int M) { return 2.0 / (2 * M - 1); }

}  // namespace

void DistortionModel::validate() const {
    if (!(Kg > 0.0) || !std::isfinite(Kg)) throw std::invalid_argument("Kg must be positive");
    if (!(Ks_bar > 0.0) || !std::isfinite(Ks_bar)) throw std::invalid_argument("Ks_bar must be positive");
    if (M < 1) throw std::invalid_argument("M must be >= 1");
}

double total_distortion(double B_s, double B_g, const DistortionModel& model) {
    model.validate();
    if (B_s < 0.0 || B_g < 0.0) throw std::invalid_argument("bit counts must be nonnegative");
    return model.Ks_bar * std::exp2(-shape_exponent(model.M) * B_s) + model.Kg * std::exp2(-2.0 * B_g);
}

double distortion_slope(double B_s, int B, const DistortionModel& model) {
    model.validate();
    const double c = shape_exponent(model.M);
    return std::numbers::ln2 * (-c * model.Ks_bar * std::exp2(-c * B_s) + 2.0 * model.Kg * std::exp2(-2.0 * (B - B_s)));
}

double distortion_curvature(double B_s, int B, const DistortionModel& model) {
    model.validate();
    const double c = shape_exponent(model.M);
    const double l2 = std::numbers::ln2 * std::numbers::ln2;
    return l2 * (c * c * model.Ks_bar * std::exp2(-c * B_s) + 4.0 * model.Kg * std::exp2(-2.0 * (B - B_s)));
}

RealAllocation optimal_real_allocation(const DistortionModel& model, int B) {
    model.validate();
    check_budget(B);
    const double m = 2 * model.M - 1;
    const double M2 = 2.0 * model.M;
    RealAllocation r;
    r.unclamped_B_s = m / M2 * B + m / (2.0 * M2) * std::log2(model.Ks_bar / (model.Kg * m));
    r.B_s = std::clamp(r.unclamped_B_s, 0.0, static_cast<double>(B));
    r.B_g = B - r.B_s;
    return r;
}

BitAllocation optimal_integer_allocation(const DistortionModel& model, int B) {
    model.validate();
    check_budget(B);
    BitAllocation best{B, B, 0, optimal_real_allocation(model, B).B_s};
    double best_d = total_distortion(B, 0, model);
    for (int bs = B - 1; bs >= 0; --bs) {
        const double d = total_distortion(bs, B - bs, model);
        if (d < best_d) {
            best_d = d;
            best.B_s = bs;
            best.B_g = B - bs;
        }
    }
    return best;
}

RealAllocation asymptotic_allocation(int M, int B) {
    if (M < 1) throw std::invalid_argument("M must be >= 1");
    check_budget(B);
    RealAllocation r;
    r.B_s = (2.0 * M - 1.0) * B / (2.0 * M);
    r.B_g = B / (2.0 * M);
    r.unclamped_B_s = r.B_s;
    return r;
}

OptimumDistortion distortion_at_optimum(const DistortionModel& model, int B) {
    OptimumDistortion o;
    o.at = optimal_real_allocation(model, B);
    o.distortion = total_distortion(o.at.B_s, o.at.B_g, model);
    o.D_c = o.distortion * std::exp2(static_cast<double>(B) / model.M);
    return o;
}

namespace {

double fit_constant(std::span<const CurvePoint> curve, double slope) {
    if (curve.size() < 3) throw std::invalid_argument("need at least 3 points per curve");
    double acc = 0.0;
    for (const CurvePoint& p : curve) {
        if (!(p.distortion > 0.0) || !std::isfinite(p.distortion))
            throw std::invalid_argument("distortions must be positive");
        acc += std::log(p.distortion) + slope * p.bits * std::numbers::ln2;
    }
    return std::exp(acc / static_cast<double>(curve.size()));
}

}  // namespace

DistortionModel fit_constants_empirical(std::span<const CurvePoint> gain_curve,
                                        std::span<const CurvePoint> shape_curve, double Eg2, int M) {
    if (M < 1) throw std::invalid_argument("M must be >= 1");
    if (!(Eg2 > 0.0)) throw std::invalid_argument("E[g^2] must be positive");
    DistortionModel m;
    m.M = M;
    m.Kg = fit_constant(gain_curve, 2.0);
    m.Ks_bar = fit_constant(shape_curve, shape_exponent(M)) * Eg2;
    m.validate();
    return m;
}

}  // namespace sgq::alloc
