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

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>

#include "sgq/rng.hpp"
#include "sgq/types.hpp"

namespace sgq::shape {

// Volume of the unit n-ball, pi^{n/2} / Gamma(n/2 + 1).
double ball_coefficient(int n);
// Surface area of the unit sphere in R^n, n * C_n.
double sphere_area(int n);

// Angle subtended by a chord of squared length b on the unit sphere.
double angle_from_sqdist(double b);

// Area of a spherical cap of angular radius theta on the unit sphere in
// R^{2M} (adaptive Gauss-Kronrod on sin^{2M-2}).
double cap_area(double theta, int M);

// Random codebook of unit-norm complex M-vectors. Scores are computed on
// the real 2M-dimensional image so that the nearest-codeword search is a
// single matrix-vector product.
class ShapeCodebook {
public:
    ShapeCodebook(CMatrix vectors, int bits, std::uint64_t seed);

    int dim() const { return static_cast<int>(vectors_.rows()); }
    int bits() const { return bits_; }
    std::size_t size() const { return static_cast<std::size_t>(vectors_.cols()); }
    std::uint64_t seed() const { return seed_; }
    const CMatrix& vectors() const { return vectors_; }
    CVector vector(std::size_t i) const { return vectors_.col(static_cast<Eigen::Index>(i)); }
    // Row i = [Re c_i, Im c_i].
    const RMatrix& real_rows() const { return real_rows_; }

    friend bool operator==(const ShapeCodebook& a, const ShapeCodebook& b) {
        return a.bits_ == b.bits_ && a.seed_ == b.seed_ && a.vectors_ == b.vectors_;
    }

private:
    CMatrix vectors_;
    RMatrix real_rows_;
    int bits_;
    std::uint64_t seed_;
};

ShapeCodebook generate_shape_codebook(int M, int B_s, std::uint64_t seed);

// Fills `out` (M x count) with iid uniform unit vectors drawn from `rng`.
void random_unit_vectors(CMatrix& out, Rng& rng);

struct ShapeIndex {
    std::size_t index = 0;
    CVector value;
    // Re<s, s_hat>; the squared distance is 2 - 2 * correlation.
    double correlation = 0.0;
};

// Nearest codeword in Euclidean distance (largest Re<s, c>); an exact tie
// resolves to the lower index. s must have unit norm within 1e-6.
ShapeIndex quantize_shape(const CVector& s, const ShapeCodebook& codebook);

// Reference nearest-codeword search computing every distance explicitly.
std::size_t quantize_shape_exhaustive(const CVector& s, const ShapeCodebook& codebook);

// Pr[min_i |s - c_i|^2 >= b] for a codebook of N iid uniform codewords.
double exact_min_ccdf(double b, int M, std::size_t N);
// Small-angle form (1 - K2 theta^{2M-1})^N, inner term clamped at 0.
double approx_min_ccdf(double b, int M, std::size_t N);
// approx_min_ccdf with sin(theta) ~ theta also applied to the change of
// variable, i.e. theta ~ sqrt(b).
double small_angle_min_ccdf(double b, int M, std::size_t N);
// small_angle_min_ccdf truncated to theta <= 1 (zero beyond).
double truncated_min_ccdf(double b, int M, std::size_t N);

struct ShapeDistortionModel {
    int M = 1;
    double K1 = 0.0;
    double K2 = 0.0;
    double K3 = 0.0;
    double K_s = 0.0;
};

ShapeDistortionModel ks_constant(int M);

// 2 * int_0^1 (1 - K2 theta^{2M-1})^N theta dtheta with N = 2^B_s, in closed
// form through the incomplete beta function.
double shape_distortion_series(int M, int B_s);

// N * Beta(N, (2M+1)/(2M-1)) * K3: the same integral with the upper limit
// extended to the root of the integrand.
double shape_distortion_beta_form(int M, int B_s);

// The alternating binomial sum 2 sum_i C(N,i) (-1)^i K2^i / (i(2M-1) + 2),
// evaluated in 50-digit arithmetic. Only practical for small N.
double shape_distortion_alternating_sum(int M, std::size_t N);

// K_s 2^{-2 B_s / (2M-1)}.
double analytic_shape_distortion(int M, int B_s);

// Gamma(y + t) / Gamma(y + 1) and Kershaw's upper bound (y + t/2)^{t-1}.
double gamma_ratio(double y, double t);
double kershaw_bound(double y, double t);

// Mean |s - s_hat|^2 over `queries` uniform shapes drawn from `rng`.
double empirical_shape_distortion(const ShapeCodebook& codebook, std::size_t queries, Rng& rng);

// Header "M <M> B_s <bits> seed <seed>", then one codeword per line as
// interleaved real/imaginary parts in shortest round-trip decimal.
void write_shape_codebook(std::ostream& os, const ShapeCodebook& codebook);
ShapeCodebook read_shape_codebook(std::istream& is);

}  // namespace sgq::shape
