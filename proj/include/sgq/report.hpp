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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sgq/types.hpp"

namespace sgq::sim {

// One point of one curve. Analytic curves carry std_error 0 and trials 0.
struct SweepRow {
    std::string series;
    double x = 0.0;
    std::string metric;
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;
};

struct SweepReport {
    std::string x_name = "x";
    std::vector<SweepRow> rows;

    void add(std::string series, double x, std::string metric, double value);
    void add(std::string series, double x, std::string metric, const MeanAccumulator& acc);

    // Throws std::out_of_range when absent.
    const SweepRow& at(const std::string& series, double x, const std::string& metric) const;
    std::vector<SweepRow> curve(const std::string& series, const std::string& metric) const;
};

// Rows whose metric is one of `metrics`, in their original order.
SweepReport select_metrics(const SweepReport& report, const std::vector<std::string>& metrics);

// %.12g
std::string format_value(double v);

// Header "series,<x_name>,metric,mean,std_error,trials" then one line per row.
void write_csv(std::ostream& os, const SweepReport& report);
void write_csv_file(const std::filesystem::path& path, const SweepReport& report);

}  // namespace sgq::sim
