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

#include "sgq/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "sgq/text_io.hpp"

namespace sgq::sim {

void ExperimentSpec::validate() const {
    system();  // layout constraints
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (symbols_per_trial < 1) throw std::invalid_argument("symbols_per_trial must be >= 1");
    if (stats_trials < 1) throw std::invalid_argument("stats_trials must be >= 1");
    if (shape_queries < 1) throw std::invalid_argument("shape_queries must be >= 1");
    if (B > 40) throw std::invalid_argument("B must be <= 40");
    for (int bs : B_s_list) {
        if (bs < 0) throw std::invalid_argument("B_s values must be >= 0");
        if (bs > B) throw std::invalid_argument("B_s = " + std::to_string(bs) + " exceeds B = " + std::to_string(B));
        if (B - bs > 24) throw std::invalid_argument("gain codebook larger than 2^24 requested");
        if (bs > 24) throw std::invalid_argument("shape codebook larger than 2^24 requested");
    }
    for (int bg : B_g_list)
        if (bg < 0 || bg > 24) throw std::invalid_argument("B_g values must lie in [0, 24]");
    for (double s : snr_db_list)
        if (!std::isfinite(s)) throw std::invalid_argument("SNR values must be finite");
    if (ccdf_B_s < 0 || ccdf_B_s > 24) throw std::invalid_argument("ccdf_B_s must lie in [0, 24]");
    if (!(ccdf_b_max > 0.0 && ccdf_b_max <= 4.0)) throw std::invalid_argument("ccdf_b_max must lie in (0, 4]");
    if (ccdf_points < 2) throw std::invalid_argument("ccdf_points must be >= 2");
}

SystemConfig ExperimentSpec::system(double snr_db) const {
    return SystemConfig(M, N_k, L_k, snr_to_power(snr_db, sigma2), sigma2, B);
}

double snr_to_power(double snr_db, double sigma2) { return sigma2 * std::pow(10.0, snr_db / 10.0); }

DistortionSource parse_distortion_source(const std::string& s) {
    if (s == "analytic") return DistortionSource::Analytic;
    if (s == "empirical") return DistortionSource::Empirical;
    throw std::invalid_argument("sigmaE2_source must be 'analytic' or 'empirical'");
}

ReceiverScaling parse_receiver_scaling(const std::string& s) {
    if (s == "duality") return ReceiverScaling::Duality;
    if (s == "singular") return ReceiverScaling::SingularValue;
    throw std::invalid_argument("receiver must be 'duality' or 'singular'");
}

channel::GainTarget parse_gain_target(const std::string& s) {
    if (s == "singular") return channel::GainTarget::SingularValue;
    if (s == "eigenvalue") return channel::GainTarget::Eigenvalue;
    throw std::invalid_argument("gain_target must be 'singular' or 'eigenvalue'");
}

std::string distortion_source_name(DistortionSource s) {
    return s == DistortionSource::Analytic ? "analytic" : "empirical";
}

std::string receiver_scaling_name(ReceiverScaling s) {
    return s == ReceiverScaling::Duality ? "duality" : "singular";
}

std::string gain_target_name(channel::GainTarget t) {
    return t == channel::GainTarget::SingularValue ? "singular" : "eigenvalue";
}

std::optional<std::uint64_t> seed_from_env() {
    const char* v = std::getenv(kSeedEnv);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return parse_unsigned(v);
}

std::filesystem::path resolve_output_path(const std::filesystem::path& path) {
    const char* dir = std::getenv(kOutputDirEnv);
    if (dir == nullptr || *dir == '\0' || path.is_absolute()) return path;
    return std::filesystem::path(dir) / path;
}

}  // namespace sgq::sim
