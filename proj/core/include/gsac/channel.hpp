// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gsac/types.hpp"

namespace gsac {

/// Path-gain source. Only `Gaussian` is physical; the others are test hooks
/// (all gains 1, or all gains 0 for a rank-0 channel).
enum class GainMode { Gaussian, Unit, Zero };

inline constexpr double kDefaultSpreadRad = 7.5 * kPi / 180.0;

struct ChannelParams {
    int n_t = 0;
    int n_r = 0;
    int n_cl = 10;
    int n_ray = 5;
    /// Angular spread (radians), read as the standard deviation of the
    /// Laplacian per-ray offset, so the Laplace scale is spread / sqrt(2).
    double spread = kDefaultSpreadRad;
    std::uint64_t seed = 0;
    GainMode gains = GainMode::Gaussian;
};

/// Throws ValidationError on non-positive counts or spread.
void validate_channel_params(const ChannelParams& params);

/// Narrowband clustered channel plus the path parameters that produced it.
/// Path lists are cluster-major (index m * n_ray + n) and empty for
/// channels loaded from file.
struct ChannelMatrix {
    CMatrix h;
    ChannelParams params;
    std::vector<Complex> path_gains;
    std::vector<double> aod;
    std::vector<double> aoa;

    int n_r() const noexcept { return static_cast<int>(h.rows()); }
    int n_t() const noexcept { return static_cast<int>(h.cols()); }
};

/// Half-wavelength ULA response: entry k is exp(j pi k sin theta) / sqrt(n).
CVector ula_response(int n, double theta);

/// Maps any angle into (0, 2 pi].
double wrap_angle(double theta) noexcept;

/// H = sqrt(N_t N_r / (N_cl N_ray)) sum_{m,n} alpha_{m,n} a_r(aoa) a_t(aod)^H.
/// Gains are CN(0,1); cluster mean angles uniform on (0, 2 pi]; per-ray
/// offsets Laplacian. Deterministic in `params.seed`.
ChannelMatrix generate_channel(const ChannelParams& params);

/// Wraps an externally supplied matrix (path lists left empty).
ChannelMatrix channel_from_matrix(CMatrix h);

/// FNV-1a over the bit patterns of the entries. Equal hashes across schemes
/// certify that they saw the same realization.
std::uint64_t channel_hash(const CMatrix& h) noexcept;

/// Channel CSV: "# nr=<n_r> nt=<n_t>" then n_r rows of 2*n_t numbers,
/// interleaved re,im. Written with round-trip precision.
void write_matrix_csv(std::ostream& os, const CMatrix& m);
void write_channel_csv(std::ostream& os, const CMatrix& h);

/// Throws ParseError on malformed headers, short rows, or non-numeric fields.
CMatrix read_channel_csv(std::istream& is);

/// Reads `rows` lines of interleaved re,im data (no header).
CMatrix read_matrix_rows(std::istream& is, int rows, int cols);

} // namespace gsac
