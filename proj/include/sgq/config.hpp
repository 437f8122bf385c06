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

namespace sgq {

// Antenna/stream layout and power budget of one broadcast cell. Validated on
// construction: a SystemConfig that exists is always resolvable.
class SystemConfig {
public:
    // M transmit antennas; per-user receive antennas `rx_antennas` and stream
    // counts `streams`; total power P_max and noise variance sigma2 (linear);
    // B feedback bits per quantized vector.
    SystemConfig(int M, std::vector<int> rx_antennas, std::vector<int> streams,
                 double P_max, double sigma2, int B);

    int tx_antennas() const { return M_; }
    int users() const { return static_cast<int>(N_.size()); }
    int rx_antennas(int k) const { return N_.at(static_cast<std::size_t>(k)); }
    int streams(int k) const { return L_.at(static_cast<std::size_t>(k)); }
    const std::vector<int>& rx_antennas() const { return N_; }
    const std::vector<int>& streams() const { return L_; }
    int total_streams() const;
    int total_rx_antennas() const;
    double max_power() const { return P_max_; }
    double noise_variance() const { return sigma2_; }
    int feedback_bits() const { return B_; }

    SystemConfig with_power(double P_max) const;
    SystemConfig with_feedback_bits(int B) const;

private:
    int M_;
    std::vector<int> N_;
    std::vector<int> L_;
    double P_max_;
    double sigma2_;
    int B_;
};

}  // namespace sgq
