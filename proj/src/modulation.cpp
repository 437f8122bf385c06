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

#include "sgq/modulation.hpp"

#include <stdexcept>
#include <string>

namespace sgq::modulation {

namespace {

constexpr double kQpsk = 0.70710678118654752440;   // 1/sqrt(2)
constexpr double kQam16 = 0.31622776601683793320;  // 1/sqrt(10)

// Two bits per axis, Gray order 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
double gray4_level(unsigned two_bits) {
    switch (two_bits & 3u) {
        case 0: return -3.0;
        case 1: return -1.0;
        case 3: return 1.0;
        default: return 3.0;
    }
}

unsigned gray4_slice(double x) {
    if (x < -2.0) return 0;
    if (x < 0.0) return 1;
    if (x < 2.0) return 3;
    return 2;
}

}  // namespace

Scheme parse_scheme(std::string_view name) {
    if (name == "QPSK" || name == "qpsk") return Scheme::QPSK;
    if (name == "16QAM" || name == "16qam" || name == "16-QAM") return Scheme::QAM16;
    throw std::invalid_argument("unknown modulation '" + std::string(name) + "'");
}

std::string_view scheme_name(Scheme s) { return s == Scheme::QPSK ? "QPSK" : "16QAM"; }

int bits_per_symbol(Scheme s) { return s == Scheme::QPSK ? 2 : 4; }

cplx map_symbol(Scheme s, unsigned value) {
    if (s == Scheme::QPSK) {
        const double re = (value & 2u) ? kQpsk : -kQpsk;
        const double im = (value & 1u) ? kQpsk : -kQpsk;
        return {re, im};
    }
    return {gray4_level(value >> 2) * kQam16, gray4_level(value) * kQam16};
}

unsigned slice_symbol(Scheme s, cplx y) {
    if (s == Scheme::QPSK) return (y.real() >= 0.0 ? 2u : 0u) | (y.imag() >= 0.0 ? 1u : 0u);
    return (gray4_slice(y.real() / kQam16) << 2) | gray4_slice(y.imag() / kQam16);
}

std::vector<cplx> constellation(Scheme s) {
    const unsigned n = 1u << bits_per_symbol(s);
    std::vector<cplx> pts(n);
    for (unsigned v = 0; v < n; ++v) pts[v] = map_symbol(s, v);
    return pts;
}

std::vector<cplx> modulate(Scheme s, std::span<const std::uint8_t> bits) {
    const std::size_t k = static_cast<std::size_t>(bits_per_symbol(s));
    if (bits.size() % k != 0) throw std::invalid_argument("bit count must be a multiple of the symbol size");
    std::vector<cplx> out(bits.size() / k);
    for (std::size_t i = 0; i < out.size(); ++i) {
        unsigned v = 0;
        for (std::size_t j = 0; j < k; ++j) {
            const std::uint8_t b = bits[i * k + j];
            if (b > 1) throw std::invalid_argument("bits must be 0 or 1");
            v = (v << 1) | b;
        }
        out[i] = map_symbol(s, v);
    }
    return out;
}

std::vector<std::uint8_t> demodulate(Scheme s, std::span<const cplx> symbols) {
    const int k = bits_per_symbol(s);
    std::vector<std::uint8_t> out;
    out.reserve(symbols.size() * static_cast<std::size_t>(k));
    for (const cplx& y : symbols) {
        const unsigned v = slice_symbol(s, y);
        for (int j = k - 1; j >= 0; --j) out.push_back(static_cast<std::uint8_t>((v >> j) & 1u));
    }
    return out;
}

std::vector<cplx> modulate_16qam(std::span<const std::uint8_t> bits) { return modulate(Scheme::QAM16, bits); }

std::vector<std::uint8_t> demodulate_16qam(std::span<const cplx> symbols) {
    return demodulate(Scheme::QAM16, symbols);
}

}  // namespace sgq::modulation
