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

#include <span>

namespace sgq::alloc {

// D(B_s, B_g) = Ks_bar 2^{-2 B_s/(2M-1)} + Kg 2^{-2 B_g}.
struct DistortionModel {
    double Kg = 0.0;
    double Ks_bar = 0.0;  // shape constant times E[g^2]
    int M = 1;

    void validate() const;
};

struct RealAllocation {
    double B_s = 0.0;
    double B_g = 0.0;
    double unclamped_B_s = 0.0;
};

struct BitAllocation {
    int B = 0;
    int B_s = 0;
    int B_g = 0;
    double real_Bs = 0.0;
};

double total_distortion(double B_s, double B_g, const DistortionModel& model);

// First and second derivatives of total_distortion(B_s, B - B_s) in B_s.
double distortion_slope(double B_s, int B, const DistortionModel& model);
double distortion_curvature(double B_s, int B, const DistortionModel& model);

// Stationary point of the split B_s + B_g = B, clamped to [0, B].
RealAllocation optimal_real_allocation(const DistortionModel& model, int B);

// Exhaustive search over integer splits; ties go to the larger B_s.
BitAllocation optimal_integer_allocation(const DistortionModel& model, int B);

// Large-B limit: B_s = (2M-1) B / (2M), B_g = B / (2M).
RealAllocation asymptotic_allocation(int M, int B);

struct OptimumDistortion {
    RealAllocation at;
    double distortion = 0.0;
    // distortion * 2^{B/M}; independent of B while the optimum is interior.
    double D_c = 0.0;
};

OptimumDistortion distortion_at_optimum(const DistortionModel& model, int B);

struct CurvePoint {
    int bits = 0;
    double distortion = 0.0;
};

// Log-domain least squares with the slopes fixed by the distortion laws.
DistortionModel fit_constants_empirical(std::span<const CurvePoint> gain_curve,
                                        std::span<const CurvePoint> shape_curve, double Eg2, int M);

}  // namespace sgq::alloc
