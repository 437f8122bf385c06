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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sgq/channel_model.hpp"
#include "sgq/config.hpp"
#include "sgq/modulation.hpp"

namespace sgq::sim {

// Where the base station takes the quantization error variance from.
enum class DistortionSource { Analytic, Empirical };

// How receiver k scales its combined stream before slicing.
//   Duality:       scalar derived from the virtual uplink solution.
//   SingularValue: its own singular value.
enum class ReceiverScaling { Duality, SingularValue };

struct ExperimentSpec {
    int M = 2;
    std::vector<int> N_k{2, 2};
    std::vector<int> L_k{1, 1};
    int B = 16;
    double sigma2 = 1.0;

    std::vector<double> snr_db_list{0, 5, 10, 15, 20, 25, 30};
    std::vector<int> B_s_list{9, 10, 11, 12, 13, 14, 15, 16};
    std::vector<int> B_g_list{6, 7, 8, 9, 10};
    std::size_t trials = 100000;
    std::uint64_t master_seed = 1;
    modulation::Scheme modulation = modulation::Scheme::QAM16;
    std::size_t symbols_per_trial = 1;

    std::size_t training_samples = 1000000;
    std::size_t stats_trials = 100000;
    std::size_t shape_queries = 10000;

    DistortionSource sigmaE2_source = DistortionSource::Analytic;
    channel::GainTarget gain_target = channel::GainTarget::SingularValue;
    ReceiverScaling receiver = ReceiverScaling::Duality;

    int ccdf_B_s = 10;
    double ccdf_b_max = 0.2;
    std::size_t ccdf_points = 201;

    // Throws std::invalid_argument describing the first violated constraint.
    void validate() const;

    // Layout with P_max = 10^{snr_db/10} sigma2.
    SystemConfig system(double snr_db = 0.0) const;
};

DistortionSource parse_distortion_source(const std::string& s);
ReceiverScaling parse_receiver_scaling(const std::string& s);
channel::GainTarget parse_gain_target(const std::string& s);
std::string distortion_source_name(DistortionSource s);
std::string receiver_scaling_name(ReceiverScaling s);
std::string gain_target_name(channel::GainTarget t);

double snr_to_power(double snr_db, double sigma2);

// Environment overrides: SGQ_SEED replaces the master seed, SGQ_OUTPUT_DIR
// is prepended to relative output paths.
inline constexpr const char* kSeedEnv = "SGQ_SEED";
inline constexpr const char* kOutputDirEnv = "SGQ_OUTPUT_DIR";

std::optional<std::uint64_t> seed_from_env();
std::filesystem::path resolve_output_path(const std::filesystem::path& path);

}  // namespace sgq::sim
