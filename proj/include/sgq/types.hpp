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
#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace sgq {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Neumaier-compensated running sum. Used for every Monte Carlo reduction so
// that results do not depend on summation order beyond rounding of the final
// value.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Running mean / standard error with compensated accumulation of the first
// two moments.
class MeanAccumulator {
public:
    void add(double x) {
        s1_.add(x);
        s2_.add(x * x);
        ++n_;
    }
    std::size_t count() const { return n_; }
    double mean() const { return n_ ? s1_.value() / static_cast<double>(n_) : 0.0; }
    double variance() const {
        if (n_ < 2) return 0.0;
        const double n = static_cast<double>(n_);
        const double m = mean();
        const double v = (s2_.value() - n * m * m) / (n - 1.0);
        return v > 0.0 ? v : 0.0;
    }
    double std_error() const {
        return n_ ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }

private:
    CompensatedSum s1_;
    CompensatedSum s2_;
    std::size_t n_ = 0;
};

}  // namespace sgq
