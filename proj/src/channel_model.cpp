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

#include "sgq/channel_model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sgq::channel {

EffectiveChannel EffectiveChannel::from_vector(CVector z) {
    EffectiveChannel out;
    out.g = z.norm();
    if (out.g > 0.0) {
        out.s = z / out.g;
    } else {
        out.s = CVector::Zero(z.size());
        if (z.size() > 0) out.s(0) = 1.0;
    }
    out.z = std::move(z);
    return out;
}

ChannelMatrix sample_channel(const SystemConfig& config, int k, Rng& rng) {
    if (k < 0 || k >= config.users())
        throw std::out_of_range("sample_channel: user index " + std::to_string(k) + " out of range");
    ChannelMatrix H{CMatrix(config.tx_antennas(), config.rx_antennas(k))};
    sample_channel_into(H, rng);
    return H;
}

void sample_channel_into(ChannelMatrix& H, Rng& rng) {
    ComplexGaussian cn;
    // Column-major fill order is part of the determinism contract.
    for (Eigen::Index c = 0; c < H.entries.cols(); ++c)
        for (Eigen::Index r = 0; r < H.entries.rows(); ++r)
            H.entries(r, c) = cn(rng);
}

std::vector<EigenMode> dominant_modes(const ChannelMatrix& H, int count) {
    const int rank_limit = std::min(H.tx(), H.rx());
    if (count < 1 || count > rank_limit)
        throw std::invalid_argument("dominant_modes: count " + std::to_string(count) +
                                    " outside [1, " + std::to_string(rank_limit) + "]");
    if (!H.entries.allFinite())
        throw std::invalid_argument("dominant_modes: non-finite channel entries");

    Eigen::JacobiSVD<CMatrix> svd(H.entries, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    std::vector<EigenMode> modes;
    modes.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        EigenMode m;
        m.sigma = sv(i);
        m.lambda = m.sigma * m.sigma;
        m.v = svd.matrixV().col(i);
        m.u = svd.matrixU().col(i);

        // Phase convention: first nonzero entry of v real and nonnegative.
        const double vnorm = m.v.norm();
        for (Eigen::Index j = 0; j < m.v.size(); ++j) {
            const double a = std::abs(m.v(j));
            if (a > 1e-12 * vnorm) {
                const cplx rot = std::conj(m.v(j)) / a;
                m.v *= rot;
                m.u *= rot;
                m.v(j) = cplx(std::abs(m.v(j)), 0.0);
                break;
            }
        }
        if (m.sigma > 0.0) {
            CVector hv = H.entries * m.v;
            const double n = hv.norm();
            if (n > 0.0) m.u = hv / n;
        }
        modes.push_back(std::move(m));
    }
    return modes;
}

std::vector<EffectiveChannel> effective_channel(const ChannelMatrix& H, std::span<const EigenMode> modes,
                                                GainTarget target) {
    std::vector<EffectiveChannel> out;
    out.reserve(modes.size());
    for (const auto& m : modes) {
        if (m.v.size() != H.rx())
            throw std::invalid_argument("effective_channel: mode dimension does not match H");
        CVector z = H.entries * m.v;
        if (target == GainTarget::Eigenvalue) z *= m.sigma;
        out.push_back(EffectiveChannel::from_vector(std::move(z)));
    }
    return out;
}

EigenStats estimate_eigen_stats(const SystemConfig& config, int e, std::size_t trials, Rng& rng,
                                GainTarget target, int k) {
    if (trials == 0)
        throw std::invalid_argument("estimate_eigen_stats: trials must be positive");
    if (k < 0 || k >= config.users())
        throw std::out_of_range("estimate_eigen_stats: user index out of range");
    const int rank_limit = std::min(config.tx_antennas(), config.rx_antennas(k));
    if (e < 0 || e >= rank_limit)
        throw std::invalid_argument("estimate_eigen_stats: order index e must be < min(M, N_k)");

    MeanAccumulator lambda_acc;
    MeanAccumulator g2_acc;
    ChannelMatrix H{CMatrix(config.tx_antennas(), config.rx_antennas(k))};
    for (std::size_t t = 0; t < trials; ++t) {
        sample_channel_into(H, rng);
        Eigen::JacobiSVD<CMatrix> svd(H.entries);
        const double lambda = svd.singularValues()(e) * svd.singularValues()(e);
        lambda_acc.add(lambda);
        // |H v sigma|^2 = lambda^2, |H v|^2 = lambda
        g2_acc.add(target == GainTarget::Eigenvalue ? lambda * lambda : lambda);
    }
    EigenStats st;
    st.e = e;
    st.lambda_tilde = lambda_acc.mean();
    st.lambda_std_error = lambda_acc.std_error();
    st.Eg2 = g2_acc.mean();
    st.trials = trials;
    return st;
}

}  // namespace sgq::channel
