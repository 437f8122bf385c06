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

#include "sgq/config.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sgq {

SystemConfig::SystemConfig(int M, std::vector<int> rx_antennas, std::vector<int> streams,
                           double P_max, double sigma2, int B)
    : M_(M), N_(std::move(rx_antennas)), L_(std::move(streams)), P_max_(P_max), sigma2_(sigma2), B_(B) {
    if (M_ < 1)
        throw std::invalid_argument("SystemConfig: M must be >= 1");
    if (N_.empty())
        throw std::invalid_argument("SystemConfig: at least one user is required");
    if (N_.size() != L_.size())
        throw std::invalid_argument("SystemConfig: N_k and L_k lists differ in length");
    for (std::size_t k = 0; k < N_.size(); ++k) {
        if (N_[k] < 1)
            throw std::invalid_argument("SystemConfig: N_k must be >= 1 (user " + std::to_string(k) + ")");
        if (L_[k] < 1 || L_[k] > N_[k])
            throw std::invalid_argument("SystemConfig: need 1 <= L_k <= N_k (user " + std::to_string(k) + ")");
    }
    if (total_streams() > M_)
        throw std::invalid_argument("SystemConfig: total stream count L exceeds M");
    if (!(P_max_ > 0.0) || !std::isfinite(P_max_))
        throw std::invalid_argument("SystemConfig: P_max must be positive");
    if (!(sigma2_ > 0.0) || !std::isfinite(sigma2_))
        throw std::invalid_argument("SystemConfig: sigma2 must be positive");
    if (B_ < 0)
        throw std::invalid_argument("SystemConfig: B must be >= 0");
}

int SystemConfig::total_streams() const { return std::accumulate(L_.begin(), L_.end(), 0); }

int SystemConfig::total_rx_antennas() const { return std::accumulate(N_.begin(), N_.end(), 0); }

SystemConfig SystemConfig::with_power(double P_max) const {
    return SystemConfig(M_, N_, L_, P_max, sigma2_, B_);
}

SystemConfig SystemConfig::with_feedback_bits(int B) const {
    return SystemConfig(M_, N_, L_, P_max_, sigma2_, B);
}

}  // namespace sgq
