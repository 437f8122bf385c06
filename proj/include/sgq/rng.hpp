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

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "sgq/types.hpp"

namespace sgq {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Seed for an independent stream identified by (master, label, index). Two
// different labels or indices give unrelated seeds; the same triple always
// gives the same seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t master, std::string_view label, std::uint64_t index = 0) {
    return Rng(derive_seed(master, label, index));
}

// Circularly-symmetric complex Gaussian with unit variance (each of the real
// and imaginary parts has variance 1/2).
class ComplexGaussian {
public:
    cplx operator()(Rng& rng) {
        const double re = normal_(rng);
        const double im = normal_(rng);
        return {re * kScale, im * kScale};
    }

private:
    static constexpr double kScale = 0.70710678118654752440;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace sgq
