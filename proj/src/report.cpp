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

#include "sgq/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace sgq::sim {

void SweepReport::add(std::string series, double x, std::string metric, double value) {
    rows.push_back(SweepRow{std::move(series), x, std::move(metric), value, 0.0, 0});
}

void SweepReport::add(std::string series, double x, std::string metric, const MeanAccumulator& acc) {
    rows.push_back(SweepRow{std::move(series), x, std::move(metric), acc.mean(), acc.std_error(), acc.count()});
}

const SweepRow& SweepReport::at(const std::string& series, double x, const std::string& metric) const {
    for (const SweepRow& r : rows)
        if (r.series == series && r.x == x && r.metric == metric) return r;
    throw std::out_of_range("no row for series '" + series + "', metric '" + metric + "', x = " + format_value(x));
}

std::vector<SweepRow> SweepReport::curve(const std::string& series, const std::string& metric) const {
    std::vector<SweepRow> out;
    for (const SweepRow& r : rows)
        if (r.series == series && r.metric == metric) out.push_back(r);
    return out;
}

SweepReport select_metrics(const SweepReport& report, const std::vector<std::string>& metrics) {
    SweepReport out;
    out.x_name = report.x_name;
    for (const SweepRow& r : report.rows)
        for (const std::string& m : metrics)
            if (r.metric == m) out.rows.push_back(r);
    return out;
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_csv(std::ostream& os, const SweepReport& report) {
    os << "series," << report.x_name << ",metric,mean,std_error,trials\n";
    for (const SweepRow& r : report.rows)
        os << r.series << ',' << format_value(r.x) << ',' << r.metric << ',' << format_value(r.mean) << ','
           << format_value(r.std_error) << ',' << r.trials << '\n';
}

void write_csv_file(const std::filesystem::path& path, const SweepReport& report) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_csv(os, report);
    if (!os) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace sgq::sim
