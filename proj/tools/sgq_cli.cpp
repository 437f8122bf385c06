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

// Command-line front end: one subcommand per experiment, all driven by a
// flat key = value config file whose keys are the long option names below.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sgq/bit_alloc.hpp"
#include "sgq/experiment.hpp"
#include "sgq/gain_quant.hpp"
#include "sgq/report.hpp"
#include "sgq/shape_quant.hpp"
#include "sgq/sim.hpp"

namespace {

using sgq::sim::ExperimentSpec;
using sgq::sim::SweepReport;

struct RawOptions {
    int K = 0;
    std::string modulation = "16QAM";
    std::string sigmaE2_source = "analytic";
    std::string gain_target = "singular";
    std::string receiver = "duality";
    std::string output;
    std::string codebook_dir = "codebooks";
};

void add_spec_options(CLI::App& app, ExperimentSpec& s, RawOptions& raw) {
    app.add_option("--M", s.M, "transmit antennas");
    app.add_option("--K", raw.K, "users (defaults to the length of N_k)");
    app.add_option("--N_k", s.N_k, "receive antennas per user")->expected(1, -1);
    app.add_option("--L_k", s.L_k, "streams per user")->expected(1, -1);
    app.add_option("--B", s.B, "feedback bits per quantized vector");
    app.add_option("--B_s_list", s.B_s_list, "shape bit values to sweep")->expected(1, -1);
    app.add_option("--B_g_list", s.B_g_list, "gain bit values to sweep")->expected(1, -1);
    app.add_option("--snr_db_list", s.snr_db_list, "SNR points in dB")->expected(1, -1);
    app.add_option("--trials", s.trials, "Monte Carlo trials per point");
    app.add_option("--master_seed", s.master_seed, "master seed");
    app.add_option("--modulation", raw.modulation, "QPSK or 16QAM");
    app.add_option("--sigma2", s.sigma2, "receiver noise variance");
    app.add_option("--training_samples", s.training_samples, "gain codebook training samples");
    app.add_option("--stats_trials", s.stats_trials, "channel draws for eigenvalue statistics");
    app.add_option("--shape_queries", s.shape_queries, "queries per shape distortion point");
    app.add_option("--symbols_per_trial", s.symbols_per_trial, "symbols per stream per channel draw");
    app.add_option("--sigmaE2_source", raw.sigmaE2_source, "analytic or empirical");
    app.add_option("--gain_target", raw.gain_target, "singular (|Hv|) or eigenvalue (|Hv| sigma)");
    app.add_option("--receiver", raw.receiver, "duality or singular");
    app.add_option("--ccdf_B_s", s.ccdf_B_s, "shape bits for the CCDF comparison");
    app.add_option("--ccdf_b_max", s.ccdf_b_max, "upper end of the CCDF grid");
    app.add_option("--ccdf_points", s.ccdf_points, "CCDF grid points");
    app.add_option("--output", raw.output, "CSV output path");
    app.add_option("--codebook_dir", raw.codebook_dir, "directory for trained codebooks");
}

void finalize_spec(ExperimentSpec& s, const RawOptions& raw) {
    if (raw.K > 0) {
        if (s.N_k.size() == 1) s.N_k.assign(static_cast<std::size_t>(raw.K), s.N_k.front());
        if (s.L_k.size() == 1) s.L_k.assign(static_cast<std::size_t>(raw.K), s.L_k.front());
        if (s.N_k.size() != static_cast<std::size_t>(raw.K) || s.L_k.size() != static_cast<std::size_t>(raw.K))
            throw std::invalid_argument("K does not match the lengths of N_k / L_k");
    }
    s.modulation = sgq::modulation::parse_scheme(raw.modulation);
    s.sigmaE2_source = sgq::sim::parse_distortion_source(raw.sigmaE2_source);
    s.gain_target = sgq::sim::parse_gain_target(raw.gain_target);
    s.receiver = sgq::sim::parse_receiver_scaling(raw.receiver);
    if (auto seed = sgq::sim::seed_from_env()) s.master_seed = *seed;
    s.validate();
}

std::filesystem::path output_path(const RawOptions& raw, const std::string& command) {
    return sgq::sim::resolve_output_path(raw.output.empty() ? command + ".csv" : raw.output);
}

void emit(const SweepReport& rep, const std::filesystem::path& path) {
    sgq::sim::write_csv_file(path, rep);
    std::cout << "wrote " << rep.rows.size() << " rows to " << path.string() << '\n';
}

void print_curve(const SweepReport& rep, const std::string& series, const std::string& metric) {
    for (const auto& r : rep.curve(series, metric))
        std::cout << "  " << series << ' ' << rep.x_name << '=' << sgq::sim::format_value(r.x) << "  " << metric
                  << ' ' << sgq::sim::format_value(r.mean) << '\n';
}

void run_train_codebooks(const ExperimentSpec& s, const RawOptions& raw) {
    sgq::Rng rng = sgq::make_rng(s.master_seed, "gain-training");
    const std::vector<double> samples = sgq::sim::draw_gain_samples(s, s.training_samples, rng);
    const std::filesystem::path dir = sgq::sim::resolve_output_path(raw.codebook_dir);
    std::filesystem::create_directories(dir);
    SweepReport rep;
    rep.x_name = "B_s";
    for (int bs : s.B_s_list) {
        const sgq::sim::Codebooks cb = sgq::sim::train_codebooks(s, bs, samples);
        const std::string tag = "Bs" + std::to_string(bs) + "_Bg" + std::to_string(s.B - bs);
        std::ofstream g(dir / ("gain_" + tag + ".txt"));
        sgq::gain::write_gain_codebook(g, cb.gain);
        std::ofstream sh(dir / ("shape_" + tag + ".txt"));
        sgq::shape::write_shape_codebook(sh, cb.shape);
        if (!g || !sh) throw std::runtime_error("failed writing codebooks to " + dir.string());
        rep.add("training", bs, "gain_distortion", sgq::gain::empirical_gain_distortion(cb.gain, samples));
        rep.add("training", bs, "shape_seed", static_cast<double>(cb.shape.seed()));
        std::cout << "B_s=" << bs << " B_g=" << s.B - bs << " -> " << (dir / tag).string() << '\n';
    }
    emit(rep, output_path(raw, "train-codebooks"));
}

void run_allocate(const ExperimentSpec& s, const RawOptions& raw) {
    const sgq::sim::AllocationReport a = sgq::sim::allocation_report(s);
    std::printf("fitted constants: Kg = %.6g  Ks_bar = %.6g  (E[g^2] = %.6g)\n", a.fitted.Kg, a.fitted.Ks_bar,
                a.analytic.stats.Eg2);
    std::printf("fitted real optimum:    B_s = %.3f  B_g = %.3f\n", a.fitted_real.B_s, a.fitted_real.B_g);
    std::printf("fitted integer optimum: B_s = %d  B_g = %d\n", a.fitted_integer.B_s, a.fitted_integer.B_g);
    std::printf("analytic constants: Kg = %.6g  Ks_bar = %.6g\n", a.analytic.model.Kg, a.analytic.model.Ks_bar);
    std::printf("analytic real optimum:    B_s = %.3f  B_g = %.3f\n", a.analytic_real.B_s, a.analytic_real.B_g);
    std::printf("analytic integer optimum: B_s = %d  B_g = %d\n", a.analytic_integer.B_s, a.analytic_integer.B_g);
    std::printf("asymptotic split:         B_s = %.3f  B_g = %.3f\n", a.asymptotic.B_s, a.asymptotic.B_g);
    emit(sgq::sim::to_report(a, s.B), output_path(raw, "allocate"));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sgq: shape-gain quantization experiments for limited-feedback MU-MIMO"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "flat key = value configuration file", true);
    app.allow_config_extras(CLI::config_extras_mode::error);

    ExperimentSpec spec;
    RawOptions raw;
    add_spec_options(app, spec, raw);

    auto* train = app.add_subcommand("train-codebooks", "train gain codebooks and draw shape codebooks");
    auto* dgain = app.add_subcommand("distortion-gain", "gain distortion vs B_g: Lloyd codebooks vs analytic law");
    auto* dshape = app.add_subcommand("distortion-shape", "shape distortion vs B_s: random codebooks vs bound");
    auto* bitalloc = app.add_subcommand("sweep-bitalloc", "feedback distortion vs B_s at fixed B");
    auto* smse = app.add_subcommand("sweep-smse", "sum MSE vs SNR, one series per B_s");
    auto* ber = app.add_subcommand("sweep-ber", "bit error rate vs SNR, one series per B_s");
    auto* ccdf = app.add_subcommand("ccdf", "CCDF of the minimum shape distortion");
    auto* allocate = app.add_subcommand("allocate", "optimal split of B from fitted constants");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        finalize_spec(spec, raw);
        if (train->parsed()) {
            run_train_codebooks(spec, raw);
        } else if (dgain->parsed()) {
            const SweepReport rep = sgq::sim::sweep_gain_distortion(spec);
            print_curve(rep, "empirical", "distortion");
            print_curve(rep, "analytic", "distortion");
            emit(rep, output_path(raw, "distortion-gain"));
        } else if (dshape->parsed()) {
            const SweepReport rep = sgq::sim::sweep_shape_distortion(spec);
            print_curve(rep, "empirical", "distortion");
            print_curve(rep, "bound", "distortion");
            emit(rep, output_path(raw, "distortion-shape"));
        } else if (bitalloc->parsed()) {
            const SweepReport rep = sgq::sim::sweep_bit_allocation(spec);
            print_curve(rep, "empirical", "distortion");
            print_curve(rep, "analytic", "distortion");
            emit(rep, output_path(raw, "sweep-bitalloc"));
        } else if (smse->parsed() || ber->parsed()) {
            const SweepReport link = sgq::sim::sweep_link(spec);
            const std::string metric = smse->parsed() ? "smse" : "ber";
            for (int bs : spec.B_s_list) print_curve(link, "B_s=" + std::to_string(bs), metric);
            const std::vector<std::string> keep =
                smse->parsed() ? std::vector<std::string>{"smse", "predicted_smse", "sigmaE2"}
                               : std::vector<std::string>{"ber"};
            emit(sgq::sim::select_metrics(link, keep), output_path(raw, smse->parsed() ? "sweep-smse" : "sweep-ber"));
        } else if (ccdf->parsed()) {
            const SweepReport rep = sgq::sim::ccdf_compare(spec.M, spec.ccdf_B_s, spec.trials, spec.ccdf_b_max,
                                                           spec.ccdf_points, spec.master_seed);
            double gap = 0.0;
            for (const auto& r : rep.curve("monte_carlo", "ccdf"))
                gap = std::max(gap, std::abs(r.mean - rep.at("exact", r.x, "ccdf").mean));
            std::cout << "sup |exact - monte carlo| = " << sgq::sim::format_value(gap) << '\n';
            emit(rep, output_path(raw, "ccdf"));
        } else if (allocate->parsed()) {
            run_allocate(spec, raw);
        }
    } catch (const std::exception& e) {
        std::cerr << "sgq: error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
