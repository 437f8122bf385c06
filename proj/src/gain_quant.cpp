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

#include "sgq/gain_quant.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "sgq/text_io.hpp"
#include "sgq/types.hpp"

namespace sgq::gain {

GainPdfParams GainPdfParams::for_mode(int M, int N_k, int e, double lambda_tilde) {
    if (e < 0 || e >= std::min(M, N_k))
        throw std::invalid_argument("eigen order index out of range");
    GainPdfParams p;
    p.L_e = (M - e) * (N_k - e);
    p.beta = lambda_tilde / p.L_e;
    p.validate();
    return p;
}

void GainPdfParams::validate() const {
    if (L_e < 1) throw std::invalid_argument("L_e must be >= 1");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive");
}

namespace {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace

double gain_pdf(double r, const GainPdfParams& params) {
    params.validate();
    if (r < 0.0 || std::isnan(r)) throw std::invalid_argument("gain_pdf: r must be nonnegative");
    if (r == 0.0 || std::isinf(r)) return 0.0;
    const int L = params.L_e;
    const double log_r = std::log(r);
    const double log_f = (2 * L - 1) * log_r - log_factorial(L - 1) - L * std::log(params.beta) -
                         r * r / params.beta + std::numbers::ln2;
    return std::exp(log_f);
}

double eigenvalue_pdf(double lambda, const GainPdfParams& params) {
    params.validate();
    if (lambda < 0.0 || std::isnan(lambda))
        throw std::invalid_argument("eigenvalue_pdf: lambda must be nonnegative");
    const int L = params.L_e;
    if (lambda == 0.0) return L == 1 ? 1.0 / params.beta : 0.0;
    if (std::isinf(lambda)) return 0.0;
    const double log_f = (L - 1) * std::log(lambda) - log_factorial(L - 1) - L * std::log(params.beta) -
                         lambda / params.beta;
    return std::exp(log_f);
}

double third_power_norm(const GainPdfParams& params) {
    params.validate();
    const int L = params.L_e;
    const double g = boost::math::tgamma((L + 1) / 3.0);
    return 3.0 * std::pow(3.0, L) * params.beta * g * g * g / (4.0 * boost::math::factorial<double>(L - 1));
}

double eigenvalue_third_power_norm(const GainPdfParams& params) {
    params.validate();
    const int L = params.L_e;
    const double g = boost::math::tgamma((L + 2) / 3.0);
    return std::pow(3.0, L + 2) * params.beta * params.beta * g * g * g /
           boost::math::factorial<double>(L - 1);
}

double numerical_third_power_norm(const std::function<double(double)>& pdf) {
    boost::math::quadrature::exp_sinh<double> integrator;
    auto cube_root = [&](double r) {
        const double f = pdf(r);
        return f > 0.0 ? std::cbrt(f) : 0.0;
    };
    const double I = integrator.integrate(cube_root, 0.0, std::numeric_limits<double>::infinity(), 1e-13);
    return I * I * I;
}

double bennett_gain_distortion(const std::function<double(double)>& pdf, int B_g) {
    if (B_g < 0) throw std::invalid_argument("B_g must be >= 0");
    const double n = std::ldexp(1.0, B_g);
    return numerical_third_power_norm(pdf) / (12.0 * n * n);
}

GainDistortionModel kg_constant(const GainPdfParams& params, channel::GainTarget target) {
    params.validate();
    GainDistortionModel m;
    const int L = params.L_e;
    if (target == channel::GainTarget::SingularValue) {
        const double g = boost::math::tgamma((L + 1) / 3.0);
        m.K_g = std::pow(3.0, L) * params.beta * g * g * g / (16.0 * boost::math::factorial<double>(L - 1));
        m.norm13 = third_power_norm(params);
    } else {
        m.norm13 = eigenvalue_third_power_norm(params);
        m.K_g = m.norm13 / 12.0;
    }
    return m;
}

double analytic_gain_distortion(int B_g, const GainDistortionModel& model) {
    if (B_g < 0) throw std::invalid_argument("B_g must be >= 0");
    return model.K_g * std::ldexp(1.0, -2 * B_g);
}

GainCodebook::GainCodebook(std::vector<double> centroids, int bits)
    : centroids_(std::move(centroids)), bits_(bits) {
    if (bits < 0 || bits > 30) throw std::invalid_argument("gain codebook: bad bit count");
    if (centroids_.size() != (std::size_t{1} << bits))
        throw std::invalid_argument("gain codebook: size must be 2^bits");
    for (std::size_t i = 0; i < centroids_.size(); ++i) {
        if (!std::isfinite(centroids_[i]) || centroids_[i] < 0.0)
            throw std::invalid_argument("gain codebook: centroids must be finite and nonnegative");
        if (i > 0 && !(centroids_[i] > centroids_[i - 1]))
            throw std::invalid_argument("gain codebook: centroids must be strictly increasing");
    }
}

namespace {

// Sorted samples with prefix sums of x and x^2, so a contiguous cell's
// count, mean and squared error are O(1).
struct SortedSamples {
    std::vector<double> x;
    std::vector<long double> s1;
    std::vector<long double> s2;

    explicit SortedSamples(std::span<const double> samples) : x(samples.begin(), samples.end()) {
        for (double v : x)
            if (!std::isfinite(v) || v < 0.0)
                throw std::invalid_argument("gain samples must be finite and nonnegative");
        std::sort(x.begin(), x.end());
        s1.assign(x.size() + 1, 0.0L);
        s2.assign(x.size() + 1, 0.0L);
        for (std::size_t i = 0; i < x.size(); ++i) {
            s1[i + 1] = s1[i] + x[i];
            s2[i + 1] = s2[i] + static_cast<long double>(x[i]) * x[i];
        }
    }
    std::size_t size() const { return x.size(); }
    long double sum(std::size_t a, std::size_t b) const { return s1[b] - s1[a]; }
    long double sum_sq(std::size_t a, std::size_t b) const { return s2[b] - s2[a]; }
};

// Initial centroids from the high-resolution optimal point density
// (proportional to pdf^{1/3}), with the pdf estimated on equal-count bins.
std::vector<double> compander_init(const SortedSamples& xs, std::size_t levels) {
    const std::size_t n = xs.size();
    std::vector<double> c(levels);
    const std::size_t bins = std::max<std::size_t>(1, std::min<std::size_t>(n / 64, 8192));
    std::vector<double> edges(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) edges[b] = xs.x[std::min(n - 1, b * n / bins)];
    edges[bins] = xs.x[n - 1];
    // Each bin holds ~n/bins samples, so pdf ~ 1/width and weight ~ width^{2/3}.
    std::vector<double> cum(bins + 1, 0.0);
    for (std::size_t b = 0; b < bins; ++b) {
        const double w = edges[b + 1] - edges[b];
        cum[b + 1] = cum[b] + std::cbrt(w * w);
    }
    const double total = cum[bins];
    if (!(total > 0.0)) {
        for (std::size_t j = 0; j < levels; ++j) c[j] = xs.x[std::min(n - 1, (2 * j + 1) * n / (2 * levels))];
        return c;
    }
    std::size_t b = 0;
    for (std::size_t j = 0; j < levels; ++j) {
        const double target = total * (static_cast<double>(j) + 0.5) / static_cast<double>(levels);
        while (b + 1 < bins && cum[b + 1] < target) ++b;
        const double seg = cum[b + 1] - cum[b];
        const double t = seg > 0.0 ? (target - cum[b]) / seg : 0.0;
        c[j] = edges[b] + t * (edges[b + 1] - edges[b]);
    }
    return c;
}

}  // namespace

GainTraining train_gain_codebook_traced(std::span<const double> samples, int B_g, LloydOptions options) {
    if (B_g < 0 || B_g > 24) throw std::invalid_argument("B_g out of range");
    const std::size_t levels = std::size_t{1} << B_g;
    if (samples.size() < 10 * levels)
        throw std::invalid_argument("gain training needs at least 10 * 2^B_g samples");
    if (options.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");

    const SortedSamples xs(samples);
    const std::size_t n = xs.size();
    std::vector<double> c = compander_init(xs, levels);
    std::vector<std::size_t> bound(levels + 1);  // cell j = [bound[j], bound[j+1])
    std::vector<double> history;
    double prev = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < options.max_iters; ++it) {
        std::sort(c.begin(), c.end());
        bound[0] = 0;
        bound[levels] = n;
        for (std::size_t j = 0; j + 1 < levels; ++j) {
            const double mid = 0.5 * (c[j] + c[j + 1]);
            bound[j + 1] = static_cast<std::size_t>(std::upper_bound(xs.x.begin(), xs.x.end(), mid) - xs.x.begin());
            bound[j + 1] = std::max(bound[j + 1], bound[j]);
        }
        bool reseeded = false;
        long double err = 0.0L;
        for (std::size_t j = 0; j < levels; ++j) {
            const std::size_t a = bound[j], b = bound[j + 1];
            if (a == b) continue;
            const long double cnt = static_cast<long double>(b - a);
            const long double mean = xs.sum(a, b) / cnt;
            c[j] = static_cast<double>(mean);
            const long double e = xs.sum_sq(a, b) - mean * xs.sum(a, b);
            err += e > 0.0L ? e : 0.0L;
        }
        for (std::size_t j = 0; j < levels; ++j) {
            if (bound[j] != bound[j + 1]) continue;
            // Empty cell: move it to the sample farthest from its centroid.
            double best = 0.0;
            double where = c[j];
            for (std::size_t i = 0; i < levels; ++i) {
                const std::size_t a = bound[i], b = bound[i + 1];
                if (a == b) continue;
                for (double v : {xs.x[a], xs.x[b - 1]}) {
                    const double d = std::abs(v - c[i]);
                    if (d > best) {
                        best = d;
                        where = v;
                    }
                }
            }
            if (best > 0.0) {
                c[j] = where;
                reseeded = true;
            }
        }
        const double d = static_cast<double>(err / static_cast<long double>(n));
        history.push_back(d);
        if (!reseeded && (prev - d) <= options.rel_tol * d) {
            ++it;
            break;
        }
        prev = d;
    }
    std::sort(c.begin(), c.end());
    for (std::size_t j = 1; j < levels; ++j)
        if (!(c[j] > c[j - 1])) c[j] = std::nextafter(c[j - 1], std::numeric_limits<double>::infinity());
    return GainTraining{GainCodebook(std::move(c), B_g), std::move(history), it};
}

GainCodebook train_gain_codebook(std::span<const double> samples, int B_g, LloydOptions options) {
    return train_gain_codebook_traced(samples, B_g, options).codebook;
}

GainIndex quantize_gain(double g, const GainCodebook& codebook) {
    if (!(g >= 0.0)) throw std::invalid_argument("quantize_gain: g must be nonnegative");
    const auto& c = codebook.centroids();
    const auto it = std::lower_bound(c.begin(), c.end(), g);
    std::size_t idx;
    if (it == c.begin()) {
        idx = 0;
    } else if (it == c.end()) {
        idx = c.size() - 1;
    } else {
        const std::size_t hi = static_cast<std::size_t>(it - c.begin());
        const double d_lo = g - c[hi - 1];
        const double d_hi = c[hi] - g;
        idx = d_lo * d_lo <= d_hi * d_hi ? hi - 1 : hi;
    }
    return GainIndex{idx, c[idx]};
}

double empirical_gain_distortion(const GainCodebook& codebook, std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("empirical_gain_distortion: no samples");
    CompensatedSum acc;
    for (double g : samples) {
        const double e = g - quantize_gain(g, codebook).value;
        acc.add(e * e);
    }
    return acc.value() / static_cast<double>(samples.size());
}

void write_gain_codebook(std::ostream& os, const GainCodebook& codebook) {
    os << "B_g " << codebook.bits() << '\n';
    for (double c : codebook.centroids()) os << format_roundtrip(c) << '\n';
}

GainCodebook read_gain_codebook(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("gain codebook: missing header");
    std::istringstream hdr(line);
    std::string key;
    std::string bits_text;
    if (!(hdr >> key >> bits_text) || key != "B_g") throw std::runtime_error("gain codebook: bad header");
    const long long bits = parse_integer(bits_text);
    if (bits < 0 || bits > 30) throw std::runtime_error("gain codebook: bad bit count");
    std::vector<double> c;
    c.reserve(std::size_t{1} << bits);
    while (c.size() < (std::size_t{1} << bits) && std::getline(is, line)) {
        if (line.empty()) continue;
        c.push_back(parse_double(line));
    }
    return GainCodebook(std::move(c), static_cast<int>(bits));
}

}  // namespace sgq::gain
