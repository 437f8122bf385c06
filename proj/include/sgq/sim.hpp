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
#include <vector>

#include "sgq/bit_alloc.hpp"
#include "sgq/channel_model.hpp"
#include "sgq/experiment.hpp"
#include "sgq/gain_quant.hpp"
#include "sgq/precoder.hpp"
#include "sgq/report.hpp"
#include "sgq/rng.hpp"
#include "sgq/shape_quant.hpp"

namespace sgq::sim {

struct Codebooks {
    gain::GainCodebook gain;
    shape::ShapeCodebook shape;

    int gain_bits() const { return gain.bits(); }
    int shape_bits() const { return shape.bits(); }
};

// Gains |z| of every stream of every user (users visited round robin) under
// the configured gain target.
std::vector<double> draw_gain_samples(const ExperimentSpec& spec, std::size_t count, Rng& rng);

// Gain codebook with B - B_s bits trained on `training_samples` fresh gains,
// random shape codebook with B_s bits. Both seeded from the master seed.
Codebooks train_codebooks(const ExperimentSpec& spec, int B_s);
// Same, reusing an existing training set.
Codebooks train_codebooks(const ExperimentSpec& spec, int B_s, const std::vector<double>& gain_samples);

struct StreamChannel {
    int user = 0;
    int stream = 0;
    double sigma = 0.0;  // singular value of the mode
    CVector hv;          // H v, what the receiver's combiner sees
    channel::EffectiveChannel z;
};

// One channel draw for every user with its effective per-stream vectors.
struct Realization {
    std::vector<StreamChannel> streams;
};

Realization draw_realization(const ExperimentSpec& spec, Rng& rng);

struct QuantizedFeedback {
    precoder::QuantizedCSI csi;
    std::vector<std::size_t> gain_index;
    std::vector<std::size_t> shape_index;
    double distortion = 0.0;  // mean |z - z_hat|^2 over streams
    int payload_bits = 0;     // per stream
};

QuantizedFeedback quantize_csi(const Realization& real, const Codebooks& codebooks);
precoder::QuantizedCSI exact_csi(const Realization& real);

struct TrialResult {
    std::vector<double> sq_errors;  // per stream, averaged over the symbols of the trial
    std::size_t bits = 0;
    std::size_t bit_errors = 0;
    double distortion = 0.0;
    double predicted_smse = 0.0;
    double tx_power = 0.0;

    double smse() const;
    double ber() const { return bits ? static_cast<double>(bit_errors) / static_cast<double>(bits) : 0.0; }
};

// Base station and receivers for one channel draw: optimize powers, build
// the precoder from `csi`, send spec.symbols_per_trial symbols per stream.
TrialResult transmit(const ExperimentSpec& spec, const Realization& real, const precoder::QuantizedCSI& csi,
                     double snr_db, double sigmaE2, Rng& rng);

// Draw, quantize (codebooks == nullptr sends exact CSI) and transmit.
TrialResult run_downlink_trial(const ExperimentSpec& spec, double snr_db, const Codebooks* codebooks,
                               double sigmaE2, Rng& rng);

// Distortion model of the dominant mode of user 0 with Monte Carlo
// eigenvalue statistics.
struct AnalyticModel {
    channel::EigenStats stats;
    gain::GainPdfParams pdf;
    gain::GainDistortionModel gain;
    shape::ShapeDistortionModel shape;
    alloc::DistortionModel model;
};

AnalyticModel analytic_model(const ExperimentSpec& spec);

// Mean per-vector |z - z_hat|^2 over `trials` channel draws.
MeanAccumulator measure_feedback_distortion(const ExperimentSpec& spec, const Codebooks& codebooks,
                                            std::size_t trials, Rng& rng);

SweepReport sweep_gain_distortion(const ExperimentSpec& spec);
SweepReport sweep_shape_distortion(const ExperimentSpec& spec);
SweepReport sweep_bit_allocation(const ExperimentSpec& spec);
// SMSE, BER, predicted SMSE and sigma_E^2 per (B_s series, SNR).
SweepReport sweep_link(const ExperimentSpec& spec);
SweepReport sweep_smse(const ExperimentSpec& spec);
SweepReport sweep_ber(const ExperimentSpec& spec);

// Monte Carlo CCDF of the minimum squared distance against the exact law
// and its three approximations, on an even b-grid over [0, b_max].
SweepReport ccdf_compare(int M, int B_s, std::size_t trials, double b_max, std::size_t points,
                         std::uint64_t seed);

struct AllocationReport {
    AnalyticModel analytic;
    std::vector<alloc::CurvePoint> gain_curve;
    std::vector<alloc::CurvePoint> shape_curve;
    alloc::DistortionModel fitted;
    alloc::RealAllocation fitted_real;
    alloc::BitAllocation fitted_integer;
    alloc::RealAllocation analytic_real;
    alloc::BitAllocation analytic_integer;
    alloc::RealAllocation asymptotic;
};

// Fits the distortion constants to Monte Carlo gain (B_g_list) and shape
// (B_s_list) curves and solves the split of B.
AllocationReport allocation_report(const ExperimentSpec& spec);
SweepReport to_report(const AllocationReport& report, int B);

}  // namespace sgq::sim
