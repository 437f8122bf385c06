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

#include "sgq/shape_quant.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "sgq/text_io.hpp"

namespace sgq::shape {

namespace {

void check_dim(int M) {
    if (M < 1) throw std::invalid_argument("dimension M must be >= 1");
}

void check_bits(int B_s) {
    if (B_s < 0 || B_s > 30) throw std::invalid_argument("B_s out of range");
}

double codebook_size(int B_s) { return std::ldexp(1.0, B_s); }

// (1 - x)^N without losing precision for tiny x.
double pow_complement(double x, double N) {
    if (x >= 1.0) return 0.0;
    if (x <= 0.0) return 1.0;
    return std::exp(N * std::log1p(-x));
}

}  // namespace

double ball_coefficient(int n) {
    if (n < 1) throw std::invalid_argument("ball dimension must be >= 1");
    return std::pow(std::numbers::pi, 0.5 * n) / boost::math::tgamma(0.5 * n + 1.0);
}

double sphere_area(int n) { return n * ball_coefficient(n); }

double angle_from_sqdist(double b) {
    if (!(b >= 0.0 && b <= 4.0)) throw std::invalid_argument("squared distance must lie in [0, 4]");
    return std::acos(1.0 - 0.5 * b);
}

double cap_area(double theta, int M) {
    check_dim(M);
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw std::invalid_argument("cap angle must lie in [0, pi]");
    if (theta == 0.0) return 0.0;
    const int p = 2 * M - 2;
    auto f = [p](double phi) { return p == 0 ? 1.0 : std::pow(std::sin(phi), p); };
    double err = 0.0;
    const double I = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, theta, 15, 1e-14, &err);
    return (2 * M - 1) * ball_coefficient(2 * M - 1) * I;
}

ShapeCodebook::ShapeCodebook(CMatrix vectors, int bits, std::uint64_t seed)
    : vectors_(std::move(vectors)), bits_(bits), seed_(seed) {
    check_bits(bits);
    if (vectors_.rows() < 1) throw std::invalid_argument("shape codebook: empty dimension");
    if (static_cast<std::size_t>(vectors_.cols()) != (std::size_t{1} << bits))
        throw std::invalid_argument("shape codebook: size must be 2^bits");
    for (Eigen::Index i = 0; i < vectors_.cols(); ++i) {
        const double n = vectors_.col(i).norm();
        if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-9)
            throw std::invalid_argument("shape codebook: codewords must have unit norm");
    }
    const Eigen::Index M = vectors_.rows();
    real_rows_.resize(vectors_.cols(), 2 * M);
    real_rows_.leftCols(M) = vectors_.real().transpose();
    real_rows_.rightCols(M) = vectors_.imag().transpose();
}

void random_unit_vectors(CMatrix& out, Rng& rng) {
    ComplexGaussian gauss;
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
        double n = 0.0;
        do {
            for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) = gauss(rng);
            n = out.col(j).norm();
        } while (!(n > 0.0));
        out.col(j) /= n;
    }
}

ShapeCodebook generate_shape_codebook(int M, int B_s, std::uint64_t seed) {
    check_dim(M);
    check_bits(B_s);
    Rng rng = make_rng(seed, "shape-codebook", static_cast<std::uint64_t>(B_s));
    CMatrix v(M, Eigen::Index{1} << B_s);
    random_unit_vectors(v, rng);
    return ShapeCodebook(std::move(v), B_s, seed);
}

ShapeIndex quantize_shape(const CVector& s, const ShapeCodebook& codebook) {
    const Eigen::Index M = codebook.dim();
    if (s.size() != M) throw std::invalid_argument("quantize_shape: dimension mismatch");
    const double n = s.norm();
    if (!(std::abs(n - 1.0) <= 1e-6)) throw std::invalid_argument("quantize_shape: input must have unit norm");
    RVector x(2 * M);
    x.head(M) = s.real();
    x.tail(M) = s.imag();
    const RVector score = codebook.real_rows() * x;
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < score.size(); ++i)
        if (score[i] > score[best]) best = i;
    return ShapeIndex{static_cast<std::size_t>(best), codebook.vectors().col(best), score[best]};
}

std::size_t quantize_shape_exhaustive(const CVector& s, const ShapeCodebook& codebook) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < codebook.size(); ++i) {
        const double d = (s - codebook.vectors().col(static_cast<Eigen::Index>(i))).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

ShapeDistortionModel ks_constant(int M) {
    check_dim(M);
    ShapeDistortionModel m;
    m.M = M;
    const int n = 2 * M - 1;
    m.K1 = n * ball_coefficient(n) / (2 * M * ball_coefficient(2 * M));
    m.K2 = m.K1 / n;
    m.K3 = std::pow(m.K2, -2.0 / n);
    m.K_s = std::pow(std::pow(std::numbers::pi, 0.5 * n) * boost::math::tgamma(static_cast<double>(M)) /
                         (2.0 * std::pow(std::numbers::pi, M) * boost::math::tgamma(0.5 * n + 1.0)),
                     -2.0 / n);
    return m;
}

double exact_min_ccdf(double b, int M, std::size_t N) {
    check_dim(M);
    if (N < 1) throw std::invalid_argument("codebook size must be >= 1");
    const double frac = cap_area(angle_from_sqdist(b), M) / sphere_area(2 * M);
    return pow_complement(frac, static_cast<double>(N));
}

double approx_min_ccdf(double b, int M, std::size_t N) {
    check_dim(M);
    if (N < 1) throw std::invalid_argument("codebook size must be >= 1");
    const double theta = angle_from_sqdist(b);
    const double K2 = ks_constant(M).K2;
    return pow_complement(K2 * std::pow(theta, 2 * M - 1), static_cast<double>(N));
}

double small_angle_min_ccdf(double b, int M, std::size_t N) {
    check_dim(M);
    if (N < 1) throw std::invalid_argument("codebook size must be >= 1");
    angle_from_sqdist(b);
    const double K2 = ks_constant(M).K2;
    return pow_complement(K2 * std::pow(b, 0.5 * (2 * M - 1)), static_cast<double>(N));
}

double truncated_min_ccdf(double b, int M, std::size_t N) {
    if (b > 1.0) {
        angle_from_sqdist(b);
        return 0.0;
    }
    return small_angle_min_ccdf(b, M, N);
}

double shape_distortion_series(int M, int B_s) {
    check_dim(M);
    check_bits(B_s);
    const ShapeDistortionModel k = ks_constant(M);
    const double m = 2 * M - 1;
    const double c = 2.0 / m;
    const double N = codebook_size(B_s);
    // Substituting u = K2 theta^m turns the integral into an incomplete beta
    // function on [0, min(K2, 1)].
    const double upper = std::min(k.K2, 1.0);
    return (2.0 / m) * std::pow(k.K2, -c) * boost::math::beta(c, N + 1.0, upper);
}

double shape_distortion_beta_form(int M, int B_s) {
    check_dim(M);
    check_bits(B_s);
    const ShapeDistortionModel k = ks_constant(M);
    const double m = 2 * M - 1;
    const double N = codebook_size(B_s);
    return N * boost::math::beta(N, (m + 2.0) / m) * k.K3;
}

double shape_distortion_alternating_sum(int M, std::size_t N) {
    check_dim(M);
    using big = boost::multiprecision::cpp_bin_float_50;
    const big pi = boost::math::constants::pi<big>();
    const int n = 2 * M - 1;
    auto ball = [&](int d) { return pow(pi, big(d) / 2) / boost::math::tgamma(big(d) / 2 + 1); };
    const big K2 = ball(n) / (2 * M * ball(2 * M));
    big sum = 0;
    big binom = 1;
    big k2pow = 1;
    for (std::size_t i = 0; i <= N; ++i) {
        const big term = binom * k2pow / big(static_cast<double>(i) * n + 2);
        sum += (i % 2 == 0) ? term : big(-term);
        binom = binom * big(static_cast<double>(N - i)) / big(static_cast<double>(i + 1));
        k2pow *= K2;
    }
    return static_cast<double>(2 * sum);
}

double analytic_shape_distortion(int M, int B_s) {
    check_dim(M);
    check_bits(B_s);
    return ks_constant(M).K_s * std::pow(2.0, -2.0 * B_s / (2 * M - 1));
}

double gamma_ratio(double y, double t) {
    // tgamma_delta_ratio(a, d) = Gamma(a) / Gamma(a + d).
    return boost::math::tgamma_delta_ratio(y + t, 1.0 - t);
}

double kershaw_bound(double y, double t) { return std::pow(y + 0.5 * t, t - 1.0); }

double empirical_shape_distortion(const ShapeCodebook& codebook, std::size_t queries, Rng& rng) {
    if (queries == 0) throw std::invalid_argument("need at least one query");
    CMatrix q(codebook.dim(), 1);
    CompensatedSum acc;
    for (std::size_t i = 0; i < queries; ++i) {
        random_unit_vectors(q, rng);
        const ShapeIndex r = quantize_shape(q.col(0), codebook);
        acc.add((q.col(0) - r.value).squaredNorm());
    }
    return acc.value() / static_cast<double>(queries);
}

void write_shape_codebook(std::ostream& os, const ShapeCodebook& codebook) {
    os << "M " << codebook.dim() << " B_s " << codebook.bits() << " seed " << codebook.seed() << '\n';
    for (std::size_t j = 0; j < codebook.size(); ++j) {
        for (Eigen::Index i = 0; i < codebook.dim(); ++i) {
            const cplx v = codebook.vectors()(i, static_cast<Eigen::Index>(j));
            if (i > 0) os << ' ';
            os << format_roundtrip(v.real()) << ' ' << format_roundtrip(v.imag());
        }
        os << '\n';
    }
}

ShapeCodebook read_shape_codebook(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("shape codebook: missing header");
    std::istringstream hdr(line);
    std::string k1, k2, k3, v1, v2, v3;
    if (!(hdr >> k1 >> v1 >> k2 >> v2 >> k3 >> v3) || k1 != "M" || k2 != "B_s" || k3 != "seed")
        throw std::runtime_error("shape codebook: bad header");
    const long long M = parse_integer(v1);
    const long long bits = parse_integer(v2);
    const unsigned long long seed = parse_unsigned(v3);
    if (M < 1 || M > 1024 || bits < 0 || bits > 30) throw std::runtime_error("shape codebook: bad header values");
    const std::size_t count = std::size_t{1} << bits;
    CMatrix v(M, static_cast<Eigen::Index>(count));
    std::size_t j = 0;
    while (j < count && std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string re, im;
        for (Eigen::Index i = 0; i < M; ++i) {
            if (!(row >> re >> im)) throw std::runtime_error("shape codebook: short row");
            v(i, static_cast<Eigen::Index>(j)) = cplx(parse_double(re), parse_double(im));
        }
        ++j;
    }
    if (j != count) throw std::runtime_error("shape codebook: missing rows");
    return ShapeCodebook(std::move(v), static_cast<int>(bits), static_cast<std::uint64_t>(seed));
}

}  // namespace sgq::shape
