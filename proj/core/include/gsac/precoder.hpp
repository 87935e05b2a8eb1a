// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gsac/arch_config.hpp"
#include "gsac/channel.hpp"
#include "gsac/types.hpp"

namespace gsac {

/// Top-k eigenpairs of a Hermitian PSD matrix.
struct EigenPairs {
    CMatrix vectors; // n x k, orthonormal columns
    RVector values;  // k, non-increasing
};

/// Top-k eigenvectors of `p` (symmetrized first), largest eigenvalue first.
///
/// Each column is rotated so its largest-magnitude entry is real and
/// non-negative (lowest index wins a magnitude tie). Within a cluster of
/// equal eigenvalues the vectors are ordered by the index of that entry.
/// Together these make the output a deterministic function of `p`.
///
/// Throws DecompositionFailure on non-finite input, OutOfRange on bad k.
EigenPairs hermitian_top_eigvecs(const CMatrix& p, int k);

/// Optimal block-diagonal precoder without the constant-amplitude
/// constraint; block i is N_t,i x N_RF,i.
struct UnconstrainedPrecoder {
    CMatrix f_opt;
    std::vector<CMatrix> per_block;
    GsacConfig cfg;
};

/// Hybrid precoder F = F_RF F_BB. Both factors are block diagonal following
/// `cfg`; N_s equals N_RF so F_BB is square.
struct HybridPrecoder {
    CMatrix f_rf;
    CMatrix f_bb;
    CMatrix f;
    GsacConfig cfg;

    int n_s() const noexcept { return static_cast<int>(f_bb.cols()); }
};

CMatrix block_diagonal(std::span<const CMatrix> blocks);

/// Diagonal blocks of an N_t x N_RF matrix laid out by `cfg`.
std::vector<CMatrix> split_blocks(const CMatrix& f, const GsacConfig& cfg);

/// Assembles F_RF, F_BB and their product from per-sub-array factors.
HybridPrecoder assemble_hybrid(const GsacConfig& cfg, std::span<const CMatrix> rf_blocks,
                               std::span<const CMatrix> bb_blocks);

/// Successive per-sub-array design with C_i = I + (snr/N_s) H F_hat_i F_hat_i^H.
/// Throws SingularUpdate if the linear solve against C_i is inaccurate.
UnconstrainedPrecoder design_unconstrained(const ChannelMatrix& h, const GsacConfig& cfg, double snr);

struct PhaseExtractedVector {
    CVector a; // analog vector, entries of modulus 1/sqrt(n)
    double d;  // digital weight, ||v||_1 / sqrt(n)
    CVector f; // a * d
};

/// Constant-amplitude approximation of a unit vector: keeps the entry phases
/// and picks the distance-optimal scale. Zero entries take phase 0.
PhaseExtractedVector phase_extract_vector(const CVector& v, int n_ti);

struct PhaseExtractedBlock {
    CMatrix f_rf;
    CMatrix f_bb;
};

/// Phase extraction for several columns. F_BB is the least-squares fit of
/// F_RF to `v_block`, so F_RF F_BB is the projection of `v_block` onto the
/// span of F_RF. Throws RankDeficientAnalog when that span is degenerate.
PhaseExtractedBlock phase_extract_matrix(const CMatrix& v_block);

/// Fits F_BB for a given analog block: (F_RF^H F_RF)^{-1} F_RF^H target.
/// Throws RankDeficientAnalog when the Gram matrix is numerically singular.
CMatrix least_squares_digital(const CMatrix& f_rf, const CMatrix& target);

/// SIC-based hybrid precoder: per sub-array, top eigenvectors of the
/// interference-whitened Gram block, then phase extraction (vector form for
/// one RF chain, matrix form otherwise), then the C_i update with the
/// practical block.
HybridPrecoder design_sic_hybrid(const ChannelMatrix& h, const GsacConfig& cfg, double snr);

/// Per-sub-array terms log2|I + (snr/N_s) F_i^H H^H C_{i-1}^{-1} H F_i| for
/// the given diagonal blocks. Their sum equals the total rate of the
/// block-diagonal assembly.
std::vector<double> sic_sub_rates(const CMatrix& h, const GsacConfig& cfg, std::span<const CMatrix> blocks,
                                  double snr);

/// Unit-norm transmit array responses at the channel's path departure angles.
std::vector<CVector> true_aod_dictionary(const ChannelMatrix& h);

/// Unit-norm responses on a uniform angle grid over [-pi/2, pi/2).
std::vector<CVector> grid_dictionary(int n_t, int n_atoms);

struct OmpResult {
    HybridPrecoder precoder;
    std::vector<int> selected; // dictionary indices, in selection order
};

/// Fully-connected OMP baseline: greedy atom selection against the residual
/// of the top-N_RF right singular vectors of H, least-squares F_BB, then
/// scaling to ||F_RF F_BB||_F^2 = N_s. Atoms are never selected twice;
/// ties go to the lowest index.
/// Throws DictionaryTooSmall when fewer atoms than RF chains are supplied.
OmpResult design_fc_omp_detailed(const ChannelMatrix& h, int n_rf, double snr,
                                 std::span<const CVector> dictionary);

HybridPrecoder design_fc_omp(const ChannelMatrix& h, int n_rf, double snr, std::span<const CVector> dictionary);

/// Precoder dump: "# cfg=(...)" header, then "# F_RF" and "# F_BB" blocks in
/// the channel CSV convention (interleaved re,im).
void write_precoder_csv(std::ostream& os, const HybridPrecoder& prec, const std::string& scheme);

struct PrecoderFile {
    std::vector<int> rf_per_sub;
    std::vector<int> ant_per_sub;
    std::string scheme;
    CMatrix f_rf;
    CMatrix f_bb;
};

PrecoderFile read_precoder_csv(std::istream& is);

} // namespace gsac
