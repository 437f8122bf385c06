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

#include <vector>

#include "sgq/types.hpp"

namespace sgq::precoder {

struct StreamLabel {
    int user = 0;
    int stream = 0;
};

// Quantized effective channels as seen by the base station, one column per
// stream.
struct QuantizedCSI {
    CMatrix F_hat;
    std::vector<StreamLabel> labels;

    int tx() const { return static_cast<int>(F_hat.rows()); }
    int streams() const { return static_cast<int>(F_hat.cols()); }
};

struct NoiseModel {
    double sigma2 = 1.0;
    double sigmaE2 = 0.0;  // per-vector quantization error variance
    double P_max = 1.0;

    void validate() const;
    // sigma^2 + sigma_E^2 P_max / M
    double regularizer(int M) const { return sigma2 + sigmaE2 * P_max / M; }
};

struct PrecoderSolution {
    CMatrix U;  // unit-norm columns
    RVector q;  // virtual uplink powers
    RVector p;  // downlink powers (= q)
    CMatrix J;
    double predicted_smse = 0.0;
    // Per-stream receive scaling sqrt(q_l) |J^{-1} f_l|, the scalar under
    // which the downlink MSE of stream l equals its virtual uplink MSE.
    RVector rx_scale;
};

// J = F_hat diag(q) F_hat^H + regularizer * I.
CMatrix build_J(const QuantizedCSI& csi, const RVector& q, const NoiseModel& noise);

// regularizer * tr(J^{-1}).
double power_objective(const QuantizedCSI& csi, const RVector& q, const NoiseModel& noise);

// Gradient of power_objective: -regularizer * |J^{-1} f_i|^2.
RVector power_objective_gradient(const QuantizedCSI& csi, const RVector& q, const NoiseModel& noise);

// L - M + regularizer * tr(J^{-1}).
double predicted_smse(const QuantizedCSI& csi, const RVector& q, const NoiseModel& noise, int L);

// Euclidean projection onto {q >= 0, sum q <= P}.
RVector project_onto_power_set(const RVector& q, double P);

struct OptimizerOptions {
    int max_iters = 10000;
    double rel_tol = 1e-10;
};

struct OptimizerResult {
    RVector q;
    int iterations = 0;
    double objective = 0.0;
    // Spread of the gradient over the active streams relative to its size.
    double kkt_residual = 0.0;
};

OptimizerResult optimize_virtual_uplink_power(const QuantizedCSI& csi, const NoiseModel& noise, int L,
                                              OptimizerOptions options = {});

PrecoderSolution mmse_precoder(const QuantizedCSI& csi, const RVector& q, const NoiseModel& noise);

RVector downlink_power(const RVector& q);

}  // namespace sgq::precoder
