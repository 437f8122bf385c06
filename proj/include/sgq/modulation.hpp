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

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sgq/types.hpp"

namespace sgq::modulation {

enum class Scheme { QPSK, QAM16 };

Scheme parse_scheme(std::string_view name);
std::string_view scheme_name(Scheme s);
int bits_per_symbol(Scheme s);

// Gray-mapped square constellations with unit mean symbol energy. Bits are
// stored one per byte (0 or 1), most significant first within a symbol.
std::vector<cplx> modulate(Scheme s, std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> demodulate(Scheme s, std::span<const cplx> symbols);

std::vector<cplx> modulate_16qam(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> demodulate_16qam(std::span<const cplx> symbols);

// Single-symbol forms used in the simulation loop.
cplx map_symbol(Scheme s, unsigned value);
unsigned slice_symbol(Scheme s, cplx y);

// All 2^bits_per_symbol points, indexed by symbol value.
std::vector<cplx> constellation(Scheme s);

}  // namespace sgq::modulation
