// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference implementations. Nothing here calls into the code
// paths it is used to check, apart from shared value types.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "gsac/types.hpp"

namespace gsac::oracle {

using Rng = std::mt19937_64;

inline CMatrix random_complex(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            m(i, j) = Complex(n(rng), n(rng)) / std::sqrt(2.0);
    return m;
}

inline CVector random_unit_vector(int n, Rng& rng) {
    CVector v = random_complex(n, 1, rng).col(0);
    return v / v.norm();
}

inline CMatrix random_orthonormal(int rows, int cols, Rng& rng) {
    Eigen::HouseholderQR<CMatrix> qr(random_complex(rows, cols, rng));
    return qr.householderQ() * CMatrix::Identity(rows, cols);
}

inline CMatrix random_hermitian_psd(int n, Rng& rng) {
    const CMatrix a = random_complex(n, n, rng);
    return a * a.adjoint();
}

/// Partition counts p(0..n) by the classic coin-change recurrence.
inline std::vector<long long> partition_counts(int n) {
    std::vector<long long> p(static_cast<std::size_t>(n + 1), 0);
    p[0] = 1;
    for (int part = 1; part <= n; ++part)
        for (int total = part; total <= n; ++total)
            p[static_cast<std::size_t>(total)] += p[static_cast<std::size_t>(total - part)];
    return p;
}

/// log2 det(I + c A A^H) from the eigenvalues of A A^H.
inline double rate_by_eigenvalues(const CMatrix& h, const CMatrix& f, double snr, int n_s) {
    const CMatrix hf = h * f;
    const CMatrix q = hf * hf.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (q + q.adjoint()));
    double r = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        r += std::log2(1.0 + snr / n_s * std::max(es.eigenvalues()(i), 0.0));
    return r;
}

/// Entry-by-entry phase retention, unit amplitude 1/sqrt(n).
inline CMatrix phase_only(const CMatrix& v) {
    const double s = 1.0 / std::sqrt(static_cast<double>(v.rows()));
    CMatrix out(v.rows(), v.cols());
    for (Eigen::Index j = 0; j < v.cols(); ++j)
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            const double a = std::abs(v(i, j));
            out(i, j) = a == 0.0 ? Complex(s, 0.0) : v(i, j) / a * s;
        }
    return out;
}

/// Top-k eigenvectors straight from Eigen, no phase or tie convention.
inline CMatrix top_eigvecs(const CMatrix& p, int k) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (p + p.adjoint()));
    const auto n = p.rows();
    CMatrix out(n, k);
    for (int j = 0; j < k; ++j)
        out.col(j) = es.eigenvectors().col(n - 1 - j);
    return out;
}

/// SAC successive design written the original way: one antenna group per RF
/// chain, Gram matrix updated by Sherman-Morrison after every vector.
/// Returns the full N_t x N_RF precoder.
inline CMatrix sac_sic_reference(const CMatrix& h, int n_rf, double snr) {
    const auto n_t = static_cast<int>(h.cols());
    const int m = n_t / n_rf;
    const double c = snr / n_rf;
    CMatrix g = h.adjoint() * h; // running H^H C^{-1} H
    CMatrix f = CMatrix::Zero(n_t, n_rf);
    for (int i = 0; i < n_rf; ++i) {
        const CMatrix block = g.block(i * m, i * m, m, m);
        const CVector v = top_eigvecs(block, 1).col(0);
        double l1 = 0.0;
        for (int k = 0; k < m; ++k)
            l1 += std::abs(v(k));
        CVector fi = CVector::Zero(n_t);
        for (int k = 0; k < m; ++k) {
            const double a = std::abs(v(k));
            const Complex ph = a == 0.0 ? Complex(1.0, 0.0) : v(k) / a;
            fi(i * m + k) = ph * (l1 / m);
        }
        f.col(i) = fi;
        const CVector gf = g * fi;
        const Complex denom = 1.0 + c * (fi.adjoint() * gf)(0, 0);
        g -= c * (gf * gf.adjoint()) / denom;
    }
    return f;
}

/// Fully-connected phase extraction with least-squares digital part,
/// straight from the top right singular vectors of H.
inline CMatrix fc_phase_extraction_reference(const CMatrix& h, int n_rf) {
    const CMatrix v = top_eigvecs(h.adjoint() * h, n_rf);
    const CMatrix f_rf = phase_only(v);
    const CMatrix f_bb = (f_rf.adjoint() * f_rf).inverse() * f_rf.adjoint() * v;
    return f_rf * f_bb;
}

/// Best (distance-optimal amplitude) approximation of a unit vector v by
/// a * d with a on a phase grid of `points` values per entry. Returns the
/// largest |v^H f|^2 and the smallest ||v - f||^2 found.
struct GridBest {
    double max_objective = 0.0;
    double min_distance = 1e300;
};

inline GridBest phase_grid_search(const CVector& v, int points) {
    const auto n = static_cast<int>(v.size());
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    // contribution of entry k at grid phase p: conj(a_k) v_k
    std::vector<std::vector<Complex>> terms(static_cast<std::size_t>(n), std::vector<Complex>(points));
    for (int k = 0; k < n; ++k)
        for (int p = 0; p < points; ++p)
            terms[k][p] = std::polar(s, -2.0 * kPi * p / points) * v(k);

    GridBest best;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::vector<Complex> partial(static_cast<std::size_t>(n + 1), Complex(0.0, 0.0));
    const double vnorm2 = v.squaredNorm();
    // odometer over all points^n phase vectors
    int depth = 0;
    while (depth >= 0) {
        if (depth == n) {
            const Complex ip = partial[static_cast<std::size_t>(n)]; // a^H v
            const double d = std::max(ip.real(), 0.0);                // distance-optimal amplitude
            const double obj = std::norm(ip) * d * d;                  // |v^H f|^2 with f = a d
            const double dist = vnorm2 - 2.0 * d * ip.real() + d * d;
            best.max_objective = std::max(best.max_objective, obj);
            best.min_distance = std::min(best.min_distance, dist);
            --depth;
            if (depth >= 0)
                ++idx[static_cast<std::size_t>(depth)];
            continue;
        }
        if (idx[static_cast<std::size_t>(depth)] == points) {
            idx[static_cast<std::size_t>(depth)] = 0;
            --depth;
            if (depth >= 0)
                ++idx[static_cast<std::size_t>(depth)];
            continue;
        }
        partial[static_cast<std::size_t>(depth + 1)] =
            partial[static_cast<std::size_t>(depth)] + terms[depth][idx[static_cast<std::size_t>(depth)]];
        ++depth;
    }
    return best;
}

} // namespace gsac::oracle
