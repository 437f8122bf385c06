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
#include <span>
#include <vector>

#include "sgq/config.hpp"
#include "sgq/rng.hpp"
#include "sgq/types.hpp"

namespace sgq::channel {

// H_k: M x N_k. The physical downlink channel of user k is H_k^H.
struct ChannelMatrix {
    CMatrix entries;

    int tx() const { return static_cast<int>(entries.rows()); }
    int rx() const { return static_cast<int>(entries.cols()); }
};

// One singular triplet of H_k: H_k v = sigma u, lambda = sigma^2 is the
// matching eigenvalue of H_k^H H_k.
struct EigenMode {
    double sigma = 0.0;
    CVector v;
    CVector u;
    double lambda = 0.0;
};

// What the norm of an effective channel vector equals.
//  Eigenvalue:    z = H v sigma  (the product matrix F = H V Lambda), |z| = sigma^2
//  SingularValue: z = H v        (unit receive combiner),            |z| = sigma
enum class GainTarget { Eigenvalue, SingularValue };

// z = g s with g = |z| and unit-norm s.
struct EffectiveChannel {
    CVector z;
    double g = 0.0;
    CVector s;

    // Splits z into gain and shape. A zero vector gets shape e_1.
    static EffectiveChannel from_vector(CVector z);
};

struct EigenStats {
    int e = 0;
    double lambda_tilde = 0.0;      // mean of the e-th ordered eigenvalue
    double lambda_std_error = 0.0;  // standard error of lambda_tilde
    double Eg2 = 0.0;               // mean |z|^2 of the matching effective channel
    std::size_t trials = 0;
};

// Entries iid CN(0, 1).
ChannelMatrix sample_channel(const SystemConfig& config, int k, Rng& rng);
void sample_channel_into(ChannelMatrix& H, Rng& rng);

// Leading `count` singular triplets, sorted by descending sigma. The first
// nonzero component of every v is made real and nonnegative; u carries the
// same phase rotation so H v = sigma u still holds.
std::vector<EigenMode> dominant_modes(const ChannelMatrix& H, int count);

std::vector<EffectiveChannel> effective_channel(const ChannelMatrix& H, std::span<const EigenMode> modes,
                                                GainTarget target = GainTarget::Eigenvalue);

// Monte Carlo mean of the e-th ordered eigenvalue of H_k^H H_k and of |z|^2
// for the e-th effective channel under `target`.
EigenStats estimate_eigen_stats(const SystemConfig& config, int e, std::size_t trials, Rng& rng,
                                GainTarget target = GainTarget::Eigenvalue, int k = 0);

}  // namespace sgq::channel
