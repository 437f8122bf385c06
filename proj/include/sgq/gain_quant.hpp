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
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "sgq/channel_model.hpp"

namespace sgq::gain {

// Parameters of the Gamma model for the e-th ordered Wishart eigenvalue:
// L(e) = (M - e)(N_k - e), beta = lambda_tilde_e / L(e).
struct GainPdfParams {
    int L_e = 1;
    double beta = 1.0;

    static GainPdfParams for_mode(int M, int N_k, int e, double lambda_tilde);
    void validate() const;
};

// Density of the singular value g = sqrt(lambda):
//   f_g(r) = (r^2)^(L-1) / ((L-1)! beta^L) * exp(-r^2 / beta) * 2 r
double gain_pdf(double r, const GainPdfParams& params);

// Density of the eigenvalue lambda itself (Gamma(L, beta)). Use this one
// when the quantized gain is lambda = sigma^2.
double eigenvalue_pdf(double lambda, const GainPdfParams& params);

// ||f_g||_{1/3} = (int f_g^{1/3})^3 in closed form, singular-value model.
double third_power_norm(const GainPdfParams& params);

// Same norm for eigenvalue_pdf: 3^(L+2) beta^2 Gamma^3((L+2)/3) / (L-1)!.
double eigenvalue_third_power_norm(const GainPdfParams& params);

// Numerical (int_0^inf pdf^{1/3})^3 by double-exponential quadrature.
double numerical_third_power_norm(const std::function<double(double)>& pdf);

// High-resolution scalar distortion D = ||pdf||_{1/3} / (12 N^2), N = 2^B,
// with the norm evaluated numerically.
double bennett_gain_distortion(const std::function<double(double)>& pdf, int B_g);

struct GainDistortionModel {
    double K_g = 0.0;
    double norm13 = 0.0;
};

// K_g with D_g = K_g 2^{-2 B_g}. For the singular-value model
//   K_g = 3^L beta Gamma^3((L+1)/3) / (16 (L-1)!) = norm13 / 12.
GainDistortionModel kg_constant(const GainPdfParams& params,
                                channel::GainTarget target = channel::GainTarget::SingularValue);

double analytic_gain_distortion(int B_g, const GainDistortionModel& model);

// Scalar codebook with 2^B strictly increasing nonnegative centroids.
class GainCodebook {
public:
    GainCodebook(std::vector<double> centroids, int bits);

    int bits() const { return bits_; }
    std::size_t size() const { return centroids_.size(); }
    const std::vector<double>& centroids() const { return centroids_; }
    double operator[](std::size_t i) const { return centroids_[i]; }

    friend bool operator==(const GainCodebook&, const GainCodebook&) = default;

private:
    std::vector<double> centroids_;
    int bits_;
};

struct GainIndex {
    std::size_t index = 0;
    double value = 0.0;
};

struct LloydOptions {
    int max_iters = 200000;
    // Stop once the relative distortion decrease of one iteration drops
    // below this.
    double rel_tol = 1e-9;
};

struct GainTraining {
    GainCodebook codebook;
    // Training-set distortion after every centroid update.
    std::vector<double> distortion_history;
    int iterations = 0;
};

// 1-D K-means (Lloyd-Max on the empirical distribution). Needs at least
// 10 * 2^B_g nonnegative samples.
GainTraining train_gain_codebook_traced(std::span<const double> samples, int B_g, LloydOptions options = {});
GainCodebook train_gain_codebook(std::span<const double> samples, int B_g, LloydOptions options = {});

// Nearest centroid; an exact tie resolves to the lower index.
GainIndex quantize_gain(double g, const GainCodebook& codebook);

// Mean of (g - g_hat)^2.
double empirical_gain_distortion(const GainCodebook& codebook, std::span<const double> samples);

// Text form: a header line "B_g <bits>" followed by one centroid per line in
// shortest round-trip decimal.
void write_gain_codebook(std::ostream& os, const GainCodebook& codebook);
GainCodebook read_gain_codebook(std::istream& is);

}  // namespace sgq::gain
