// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "gsac/arch_config.hpp"
#include "gsac/precoder.hpp"
#include "gsac/types.hpp"

namespace gsac {

inline constexpr int kMinCodebookBits = 1;
inline constexpr int kMaxCodebookBits = 12;

/// Per-sub-array beamsteering codebooks.
///
/// Codeword n of sub-array i is exp(j pi lambda_i sin(2 pi n / 2^b)) / sqrt(N_t,i),
/// where lambda_i are the global antenna indices of that sub-array. The
/// 1/sqrt(N_t,i) prefactor keeps every codeword on the constant-amplitude
/// set of the analog precoder.
struct BeamsteeringCodebook {
    int bits = 0;
    GsacConfig cfg;
    std::vector<CMatrix> per_sub;                       // N_t,i x 2^b
    std::vector<std::vector<int>> antenna_index_sets;   // contiguous, partition 0..N_t-1

    int size() const noexcept { return 1 << bits; }
};

/// Throws OutOfRange unless 1 <= b <= 12.
BeamsteeringCodebook build_codebook(const GsacConfig& cfg, int b);

struct QuantizationResult {
    HybridPrecoder precoder;
    std::vector<std::vector<int>> codeword_index; // [sub-array][column]
};

/// Selects, block by block, the codeword with the largest |<codeword, column>|
/// for each column of the unconstrained precoder (ties to the lowest index),
/// then fits F_BB by least squares against the unconstrained block.
///
/// A column whose best codeword would make the block's analog Gram matrix
/// singular (a repeat, or a numerically identical steering vector) falls back
/// to its next-best acceptable codeword. Throws RankDeficientAnalog if none
/// is left.
QuantizationResult quantize_analog_detailed(const UnconstrainedPrecoder& f_opt, const BeamsteeringCodebook& codebook);

HybridPrecoder quantize_analog(const UnconstrainedPrecoder& f_opt, const BeamsteeringCodebook& codebook);

/// Analog feedback load: b bits per RF chain.
int feedback_bits(const BeamsteeringCodebook& codebook) noexcept;

} // namespace gsac
