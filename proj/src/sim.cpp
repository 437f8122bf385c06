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

#include "sgq/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace sgq::sim {

namespace {

std::string series_name(int B_s) { return "B_s=" + std::to_string(B_s); }

std::uint64_t shape_seed(const ExperimentSpec& spec, int B_s) {
    return derive_seed(spec.master_seed, "shape-seed", static_cast<std::uint64_t>(B_s));
}

// |z| of the dominant mode of user 0.
std::vector<double> dominant_gain_samples(const ExperimentSpec& spec, std::size_t count, Rng& rng) {
    const SystemConfig cfg = spec.system();
    std::vector<double> out;
    out.reserve(count);
    channel::ChannelMatrix H{CMatrix(cfg.tx_antennas(), cfg.rx_antennas(0))};
    for (std::size_t i = 0; i < count; ++i) {
        channel::sample_channel_into(H, rng);
        const auto modes = channel::dominant_modes(H, 1);
        out.push_back(spec.gain_target == channel::GainTarget::SingularValue ? modes[0].sigma : modes[0].lambda);
    }
    return out;
}

std::function<double(double)> gain_density(const ExperimentSpec& spec, const gain::GainPdfParams& p) {
    if (spec.gain_target == channel::GainTarget::SingularValue)
        return [p](double r) { return gain::gain_pdf(r, p); };
    return [p](double l) { return gain::eigenvalue_pdf(l, p); };
}

SweepReport gain_sweep(const ExperimentSpec& spec, const AnalyticModel& am) {
    Rng train_rng = make_rng(spec.master_seed, "gain-training");
    Rng test_rng = make_rng(spec.master_seed, "gain-test");
    const std::vector<double> train = dominant_gain_samples(spec, spec.training_samples, train_rng);
    const std::vector<double> test = dominant_gain_samples(spec, spec.training_samples, test_rng);
    const auto density = gain_density(spec, am.pdf);
    const double norm13 = gain::numerical_third_power_norm(density);
    SweepReport rep;
    rep.x_name = "B_g";
    for (int bg : spec.B_g_list) {
        const gain::GainTraining tr = gain::train_gain_codebook_traced(train, bg);
        MeanAccumulator acc;
        for (double g : test) {
            const double e = g - gain::quantize_gain(g, tr.codebook).value;
            acc.add(e * e);
        }
        rep.add("empirical", bg, "distortion", acc);
        rep.add("training", bg, "distortion", tr.distortion_history.back());
        rep.add("analytic", bg, "distortion", gain::analytic_gain_distortion(bg, am.gain));
        rep.add("bennett", bg, "distortion", norm13 / (12.0 * std::ldexp(1.0, 2 * bg)));
    }
    return rep;
}

SweepReport shape_sweep(const ExperimentSpec& spec) {
    SweepReport rep;
    rep.x_name = "B_s";
    for (int bs : spec.B_s_list) {
        const shape::ShapeCodebook cb = shape::generate_shape_codebook(spec.M, bs, shape_seed(spec, bs));
        Rng rng = make_rng(spec.master_seed, "shape-queries", static_cast<std::uint64_t>(bs));
        MeanAccumulator acc;
        CMatrix q(spec.M, 1);
        for (std::size_t i = 0; i < spec.shape_queries; ++i) {
            shape::random_unit_vectors(q, rng);
            acc.add(2.0 - 2.0 * shape::quantize_shape(q.col(0), cb).correlation);
        }
        rep.add("empirical", bs, "distortion", acc);
        rep.add("series", bs, "distortion", shape::shape_distortion_series(spec.M, bs));
        rep.add("beta_form", bs, "distortion", shape::shape_distortion_beta_form(spec.M, bs));
        rep.add("bound", bs, "distortion", shape::analytic_shape_distortion(spec.M, bs));
    }
    return rep;
}

double feedback_error_variance(const ExperimentSpec& spec, const AnalyticModel* am, const Codebooks& cb) {
    if (spec.sigmaE2_source == DistortionSource::Analytic)
        return alloc::total_distortion(cb.shape_bits(), cb.gain_bits(), am->model);
    Rng rng = make_rng(spec.master_seed, "sigmaE2", static_cast<std::uint64_t>(cb.shape_bits()));
    return measure_feedback_distortion(spec, cb, spec.stats_trials, rng).mean();
}

}  // namespace

std::vector<double> draw_gain_samples(const ExperimentSpec& spec, std::size_t count, Rng& rng) {
    std::vector<double> out;
    out.reserve(count);
    while (out.size() < count) {
        const Realization r = draw_realization(spec, rng);
        for (const StreamChannel& s : r.streams) {
            if (out.size() == count) break;
            out.push_back(s.z.g);
        }
    }
    return out;
}

Codebooks train_codebooks(const ExperimentSpec& spec, int B_s) {
    Rng rng = make_rng(spec.master_seed, "gain-training");
    return train_codebooks(spec, B_s, draw_gain_samples(spec, spec.training_samples, rng));
}

Codebooks train_codebooks(const ExperimentSpec& spec, int B_s, const std::vector<double>& gain_samples) {
    if (B_s < 0 || B_s > spec.B) throw std::invalid_argument("B_s must lie in [0, B]");
    return Codebooks{gain::train_gain_codebook(gain_samples, spec.B - B_s),
                     shape::generate_shape_codebook(spec.M, B_s, shape_seed(spec, B_s))};
}

Realization draw_realization(const ExperimentSpec& spec, Rng& rng) {
    const SystemConfig cfg = spec.system();
    Realization r;
    r.streams.reserve(static_cast<std::size_t>(cfg.total_streams()));
    for (int k = 0; k < cfg.users(); ++k) {
        const channel::ChannelMatrix H = channel::sample_channel(cfg, k, rng);
        const auto modes = channel::dominant_modes(H, cfg.streams(k));
        const auto eff = channel::effective_channel(H, modes, spec.gain_target);
        for (int i = 0; i < cfg.streams(k); ++i) {
            const auto& m = modes[static_cast<std::size_t>(i)];
            r.streams.push_back(StreamChannel{k, i, m.sigma, H.entries * m.v, eff[static_cast<std::size_t>(i)]});
        }
    }
    return r;
}

QuantizedFeedback quantize_csi(const Realization& real, const Codebooks& codebooks) {
    const Eigen::Index M = codebooks.shape.dim();
    const Eigen::Index L = static_cast<Eigen::Index>(real.streams.size());
    QuantizedFeedback fb;
    fb.csi.F_hat.resize(M, L);
    fb.payload_bits = codebooks.gain_bits() + codebooks.shape_bits();
    double total = 0.0;
    for (Eigen::Index l = 0; l < L; ++l) {
        const StreamChannel& s = real.streams[static_cast<std::size_t>(l)];
        if (s.z.z.size() != M) throw std::invalid_argument("codebook dimension does not match the channel");
        const gain::GainIndex gi = gain::quantize_gain(s.z.g, codebooks.gain);
        const shape::ShapeIndex si = shape::quantize_shape(s.z.s, codebooks.shape);
        fb.csi.F_hat.col(l) = gi.value * si.value;
        fb.csi.labels.push_back({s.user, s.stream});
        fb.gain_index.push_back(gi.index);
        fb.shape_index.push_back(si.index);
        total += (s.z.z - fb.csi.F_hat.col(l)).squaredNorm();
    }
    fb.distortion = L > 0 ? total / static_cast<double>(L) : 0.0;
    return fb;
}

precoder::QuantizedCSI exact_csi(const Realization& real) {
    precoder::QuantizedCSI csi;
    if (real.streams.empty()) return csi;
    csi.F_hat.resize(real.streams.front().z.z.size(), static_cast<Eigen::Index>(real.streams.size()));
    for (std::size_t l = 0; l < real.streams.size(); ++l) {
        csi.F_hat.col(static_cast<Eigen::Index>(l)) = real.streams[l].z.z;
        csi.labels.push_back({real.streams[l].user, real.streams[l].stream});
    }
    return csi;
}

double TrialResult::smse() const {
    double s = 0.0;
    for (double e : sq_errors) s += e;
    return s;
}

TrialResult transmit(const ExperimentSpec& spec, const Realization& real, const precoder::QuantizedCSI& csi,
                     double snr_db, double sigmaE2, Rng& rng) {
    const int L = csi.streams();
    if (static_cast<std::size_t>(L) != real.streams.size()) throw std::invalid_argument("stream count mismatch");
    const precoder::NoiseModel noise{spec.sigma2, sigmaE2, snr_to_power(snr_db, spec.sigma2)};
    const precoder::OptimizerResult opt = precoder::optimize_virtual_uplink_power(csi, noise, L);
    const precoder::PrecoderSolution sol = precoder::mmse_precoder(csi, opt.q, noise);

    // Row l: what receiver l's combiner sees of every transmitted stream.
    CMatrix hv(csi.tx(), L);
    RVector scale(L);
    for (int l = 0; l < L; ++l) {
        const StreamChannel& s = real.streams[static_cast<std::size_t>(l)];
        hv.col(l) = s.hv;
        if (spec.receiver == ReceiverScaling::SingularValue)
            scale[l] = s.sigma;
        else
            scale[l] = sol.rx_scale[l] * (spec.gain_target == channel::GainTarget::Eigenvalue ? s.sigma : 1.0);
    }
    const CMatrix G = hv.adjoint() * sol.U * sol.p.cwiseSqrt().cast<cplx>().asDiagonal();

    const int k = modulation::bits_per_symbol(spec.modulation);
    std::uniform_int_distribution<unsigned> symbol_dist(0, (1u << k) - 1);
    ComplexGaussian gauss;
    const double noise_std = std::sqrt(spec.sigma2);

    TrialResult res;
    res.sq_errors.assign(static_cast<std::size_t>(L), 0.0);
    std::vector<unsigned> value(static_cast<std::size_t>(L));
    CVector x(L);
    for (std::size_t n = 0; n < spec.symbols_per_trial; ++n) {
        for (int l = 0; l < L; ++l) {
            value[static_cast<std::size_t>(l)] = symbol_dist(rng);
            x[l] = modulation::map_symbol(spec.modulation, value[static_cast<std::size_t>(l)]);
        }
        const CVector r = G * x;
        for (int l = 0; l < L; ++l) {
            const cplx xhat = scale[l] * (r[l] + noise_std * gauss(rng));
            res.sq_errors[static_cast<std::size_t>(l)] += std::norm(xhat - x[l]);
            const unsigned got = modulation::slice_symbol(spec.modulation, xhat);
            res.bit_errors += static_cast<std::size_t>(std::popcount(got ^ value[static_cast<std::size_t>(l)]));
            res.bits += static_cast<std::size_t>(k);
        }
    }
    for (double& e : res.sq_errors) e /= static_cast<double>(spec.symbols_per_trial);
    res.predicted_smse = sol.predicted_smse;
    res.tx_power = sol.p.sum();
    return res;
}

TrialResult run_downlink_trial(const ExperimentSpec& spec, double snr_db, const Codebooks* codebooks,
                               double sigmaE2, Rng& rng) {
    const Realization real = draw_realization(spec, rng);
    if (codebooks == nullptr) return transmit(spec, real, exact_csi(real), snr_db, sigmaE2, rng);
    const QuantizedFeedback fb = quantize_csi(real, *codebooks);
    TrialResult res = transmit(spec, real, fb.csi, snr_db, sigmaE2, rng);
    res.distortion = fb.distortion;
    return res;
}

AnalyticModel analytic_model(const ExperimentSpec& spec) {
    const SystemConfig cfg = spec.system();
    Rng rng = make_rng(spec.master_seed, "eigen-stats");
    AnalyticModel am;
    am.stats = channel::estimate_eigen_stats(cfg, 0, spec.stats_trials, rng, spec.gain_target, 0);
    am.pdf = gain::GainPdfParams::for_mode(cfg.tx_antennas(), cfg.rx_antennas(0), 0, am.stats.lambda_tilde);
    am.gain = gain::kg_constant(am.pdf, spec.gain_target);
    am.shape = shape::ks_constant(cfg.tx_antennas());
    am.model = alloc::DistortionModel{am.gain.K_g, am.shape.K_s * am.stats.Eg2, cfg.tx_antennas()};
    return am;
}

MeanAccumulator measure_feedback_distortion(const ExperimentSpec& spec, const Codebooks& codebooks,
                                            std::size_t trials, Rng& rng) {
    MeanAccumulator acc;
    for (std::size_t t = 0; t < trials; ++t) {
        const Realization real = draw_realization(spec, rng);
        const QuantizedFeedback fb = quantize_csi(real, codebooks);
        acc.add(fb.distortion);
    }
    return acc;
}

SweepReport sweep_gain_distortion(const ExperimentSpec& spec) {
    spec.validate();
    return gain_sweep(spec, analytic_model(spec));
}

SweepReport sweep_shape_distortion(const ExperimentSpec& spec) {
    spec.validate();
    return shape_sweep(spec);
}

SweepReport sweep_bit_allocation(const ExperimentSpec& spec) {
    spec.validate();
    const AnalyticModel am = analytic_model(spec);
    Rng train_rng = make_rng(spec.master_seed, "gain-training");
    const std::vector<double> samples = draw_gain_samples(spec, spec.training_samples, train_rng);
    SweepReport rep;
    rep.x_name = "B_s";
    for (int bs : spec.B_s_list) {
        const Codebooks cb = train_codebooks(spec, bs, samples);
        // Same channel draws for every split.
        Rng rng = make_rng(spec.master_seed, "bitalloc-eval");
        rep.add("empirical", bs, "distortion", measure_feedback_distortion(spec, cb, spec.trials, rng));
        rep.add("analytic", bs, "distortion", alloc::total_distortion(bs, spec.B - bs, am.model));
    }
    return rep;
}

SweepReport sweep_link(const ExperimentSpec& spec) {
    spec.validate();
    AnalyticModel am;
    if (spec.sigmaE2_source == DistortionSource::Analytic) am = analytic_model(spec);
    Rng train_rng = make_rng(spec.master_seed, "gain-training");
    const std::vector<double> samples = draw_gain_samples(spec, spec.training_samples, train_rng);

    const std::size_t S = spec.B_s_list.size();
    const std::size_t P = spec.snr_db_list.size();
    std::vector<Codebooks> books;
    std::vector<double> sigmaE2;
    for (int bs : spec.B_s_list) {
        books.push_back(train_codebooks(spec, bs, samples));
        sigmaE2.push_back(feedback_error_variance(spec, &am, books.back()));
    }
    std::vector<MeanAccumulator> smse(S * P), ber(S * P), pred(S * P), dist(S);
    for (std::size_t t = 0; t < spec.trials; ++t) {
        const std::uint64_t trial_seed = derive_seed(spec.master_seed, "trial", t);
        Rng channel_rng = make_rng(trial_seed, "channel");
        const Realization real = draw_realization(spec, channel_rng);
        for (std::size_t b = 0; b < S; ++b) {
            const QuantizedFeedback fb = quantize_csi(real, books[b]);
            dist[b].add(fb.distortion);
            for (std::size_t i = 0; i < P; ++i) {
                // Symbols and noise depend on (trial, SNR) only, so every
                // series sees the same draws.
                Rng sym_rng = make_rng(trial_seed, "symbols", i);
                const TrialResult r = transmit(spec, real, fb.csi, spec.snr_db_list[i], sigmaE2[b], sym_rng);
                smse[b * P + i].add(r.smse());
                ber[b * P + i].add(r.ber());
                pred[b * P + i].add(r.predicted_smse);
            }
        }
    }
    SweepReport rep;
    rep.x_name = "snr_db";
    for (std::size_t b = 0; b < S; ++b) {
        const std::string name = series_name(spec.B_s_list[b]);
        for (std::size_t i = 0; i < P; ++i) {
            const double snr = spec.snr_db_list[i];
            rep.add(name, snr, "smse", smse[b * P + i]);
            rep.add(name, snr, "ber", ber[b * P + i]);
            rep.add(name, snr, "predicted_smse", pred[b * P + i]);
            rep.add(name, snr, "sigmaE2", sigmaE2[b]);
            rep.add(name, snr, "distortion", dist[b]);
        }
    }
    return rep;
}

SweepReport sweep_smse(const ExperimentSpec& spec) {
    return select_metrics(sweep_link(spec), {"smse", "predicted_smse", "sigmaE2"});
}

SweepReport sweep_ber(const ExperimentSpec& spec) { return select_metrics(sweep_link(spec), {"ber"}); }

SweepReport ccdf_compare(int M, int B_s, std::size_t trials, double b_max, std::size_t points,
                         std::uint64_t seed) {
    if (M < 1) throw std::invalid_argument("M must be >= 1");
    if (B_s < 0 || B_s > 24) throw std::invalid_argument("B_s must lie in [0, 24]");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (points < 2) throw std::invalid_argument("need at least two grid points");
    if (!(b_max > 0.0 && b_max <= 4.0)) throw std::invalid_argument("b_max must lie in (0, 4]");
    const std::size_t N = std::size_t{1} << B_s;
    // The codebook is isotropic, so the query can be fixed at e_1: the
    // correlation with codeword c is Re(c_1).
    std::vector<double> dmin(trials);
    ComplexGaussian gauss;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = make_rng(seed, "ccdf", t);
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < N; ++i) {
            const cplx first = gauss(rng);
            double n2 = std::norm(first);
            for (int j = 1; j < M; ++j) n2 += std::norm(gauss(rng));
            best = std::max(best, first.real() / std::sqrt(n2));
        }
        dmin[t] = std::max(0.0, 2.0 - 2.0 * best);
    }
    std::sort(dmin.begin(), dmin.end());
    SweepReport rep;
    rep.x_name = "b";
    const double n = static_cast<double>(trials);
    for (std::size_t j = 0; j < points; ++j) {
        const double b = b_max * static_cast<double>(j) / static_cast<double>(points - 1);
        const auto above = static_cast<double>(dmin.end() - std::lower_bound(dmin.begin(), dmin.end(), b));
        const double p = above / n;
        SweepRow row{"monte_carlo", b, "ccdf", p, std::sqrt(p * (1.0 - p) / n), trials};
        rep.rows.push_back(row);
        rep.add("exact", b, "ccdf", shape::exact_min_ccdf(b, M, N));
        rep.add("approx", b, "ccdf", shape::approx_min_ccdf(b, M, N));
        rep.add("approx1", b, "ccdf", shape::small_angle_min_ccdf(b, M, N));
        rep.add("approx2", b, "ccdf", shape::truncated_min_ccdf(b, M, N));
    }
    return rep;
}

AllocationReport allocation_report(const ExperimentSpec& spec) {
    spec.validate();
    AllocationReport rep;
    rep.analytic = analytic_model(spec);
    const SweepReport g = gain_sweep(spec, rep.analytic);
    for (const SweepRow& r : g.curve("empirical", "distortion"))
        rep.gain_curve.push_back({static_cast<int>(r.x), r.mean});
    const SweepReport s = shape_sweep(spec);
    for (const SweepRow& r : s.curve("empirical", "distortion"))
        rep.shape_curve.push_back({static_cast<int>(r.x), r.mean});
    rep.fitted = alloc::fit_constants_empirical(rep.gain_curve, rep.shape_curve, rep.analytic.stats.Eg2, spec.M);
    rep.fitted_real = alloc::optimal_real_allocation(rep.fitted, spec.B);
    rep.fitted_integer = alloc::optimal_integer_allocation(rep.fitted, spec.B);
    rep.analytic_real = alloc::optimal_real_allocation(rep.analytic.model, spec.B);
    rep.analytic_integer = alloc::optimal_integer_allocation(rep.analytic.model, spec.B);
    rep.asymptotic = alloc::asymptotic_allocation(spec.M, spec.B);
    return rep;
}

SweepReport to_report(const AllocationReport& a, int B) {
    SweepReport rep;
    rep.x_name = "B";
    auto emit = [&](const std::string& name, const alloc::DistortionModel& m, const alloc::RealAllocation& r,
                    const alloc::BitAllocation* i) {
        rep.add(name, B, "Kg", m.Kg);
        rep.add(name, B, "Ks_bar", m.Ks_bar);
        rep.add(name, B, "real_B_s", r.B_s);
        rep.add(name, B, "real_B_g", r.B_g);
        if (i != nullptr) {
            rep.add(name, B, "integer_B_s", i->B_s);
            rep.add(name, B, "integer_B_g", i->B_g);
        }
        rep.add(name, B, "distortion_at_optimum", alloc::distortion_at_optimum(m, B).distortion);
    };
    emit("fitted", a.fitted, a.fitted_real, &a.fitted_integer);
    emit("analytic", a.analytic.model, a.analytic_real, &a.analytic_integer);
    rep.add("asymptotic", B, "real_B_s", a.asymptotic.B_s);
    rep.add("asymptotic", B, "real_B_g", a.asymptotic.B_g);
    return rep;
}

}  // namespace sgq::sim
