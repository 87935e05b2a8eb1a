// SPDX-License-Identifier: Apache-2.0
#include "gsac/precoder.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "gsac/errors.hpp"
#include "gsac/metrics.hpp"

namespace gsac {

namespace {

// Index of the entry that defines the phase reference of a column.
Eigen::Index lead_index(const CVector& v) {
    const double peak = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) >= peak * (1.0 - 1e-9))
            return i;
    return 0;
}

void normalize_phase(Eigen::Ref<CVector> v) {
    const CVector copy = v;
    const Eigen::Index lead = lead_index(copy);
    const double mag = std::abs(copy(lead));
    if (mag == 0.0)
        return;
    v *= std::conj(copy(lead)) / mag;
    v(lead) = Complex(mag, 0.0);
}

Complex unit_phase(Complex z) {
    // angle(0) is taken as 0
    if (z == Complex(0.0, 0.0))
        return {1.0, 0.0};
    return z / std::abs(z);
}

} // namespace

EigenPairs hermitian_top_eigvecs(const CMatrix& p, int k) {
    if (p.rows() != p.cols())
        throw DimensionMismatch("eigendecomposition needs a square matrix");
    const auto n = static_cast<int>(p.rows());
    if (k < 1 || k > n)
        throw OutOfRange("requested " + std::to_string(k) + " eigenvectors of a " + std::to_string(n) +
                         "-dimensional matrix");
    if (!p.allFinite())
        throw DecompositionFailure("matrix contains NaN/Inf");

    const CMatrix sym = 0.5 * (p + p.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
    if (es.info() != Eigen::Success)
        throw DecompositionFailure("Hermitian eigensolver did not converge");

    // Eigen returns ascending eigenvalues; walk them from the top.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::reverse(order.begin(), order.end());

    const RVector& values = es.eigenvalues();
    const double tol = 1e-12 * std::max(values.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    std::vector<Eigen::Index> leads(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        leads[static_cast<std::size_t>(j)] = lead_index(es.eigenvectors().col(j));

    for (std::size_t start = 0; start < order.size();) {
        std::size_t end = start + 1;
        while (end < order.size() && values(order[end - 1]) - values(order[end]) <= tol)
            ++end;
        std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end),
                         [&](int a, int b) { return leads[static_cast<std::size_t>(a)] < leads[static_cast<std::size_t>(b)]; });
        start = end;
    }

    EigenPairs out;
    out.vectors.resize(n, k);
    out.values.resize(k);
    for (int j = 0; j < k; ++j) {
        const int src = order[static_cast<std::size_t>(j)];
        out.vectors.col(j) = es.eigenvectors().col(src);
        normalize_phase(out.vectors.col(j));
        out.values(j) = values(src);
    }
    return out;
}

CMatrix block_diagonal(std::span<const CMatrix> blocks) {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    CMatrix out = CMatrix::Zero(rows, cols);
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

std::vector<CMatrix> split_blocks(const CMatrix& f, const GsacConfig& cfg) {
    if (f.rows() != cfg.n_t || f.cols() != cfg.n_rf_total)
        throw DimensionMismatch("matrix shape does not match the configuration");
    const auto row_off = cfg.antenna_offsets();
    const auto col_off = cfg.rf_offsets();
    std::vector<CMatrix> out;
    for (int i = 0; i < cfg.n_sub(); ++i) {
        const auto ii = static_cast<std::size_t>(i);
        out.emplace_back(f.block(row_off[ii], col_off[ii], cfg.ant_per_sub[ii], cfg.rf_per_sub[ii]));
    }
    return out;
}

HybridPrecoder assemble_hybrid(const GsacConfig& cfg, std::span<const CMatrix> rf_blocks,
                               std::span<const CMatrix> bb_blocks) {
    HybridPrecoder out;
    out.cfg = cfg;
    out.f_rf = block_diagonal(rf_blocks);
    out.f_bb = block_diagonal(bb_blocks);
    out.f = out.f_rf * out.f_bb;
    return out;
}

namespace {

// State of the successive design: the columns H F_hat designed so far.
class SicState {
public:
    SicState(const CMatrix& h, const GsacConfig& cfg, double snr)
        : h_(h), cfg_(cfg), scale_(snr / cfg.n_rf_total), offsets_(cfg.antenna_offsets()),
          hf_(h.rows(), 0) {
        if (h.cols() != cfg.n_t)
            throw DimensionMismatch("channel has " + std::to_string(h.cols()) + " transmit antennas, config has " +
                                    std::to_string(cfg.n_t));
        if (!h.allFinite())
            throw DecompositionFailure("channel contains NaN/Inf");
        if (!(snr >= 0.0) || !std::isfinite(snr))
            throw NonFinite("SNR must be finite and non-negative");
    }

    auto columns(int i) const {
        const auto ii = static_cast<std::size_t>(i);
        return h_.middleCols(offsets_[ii], cfg_.ant_per_sub[ii]);
    }

    // N_t,i x N_t,i diagonal block of H^H C_{i-1}^{-1} H.
    CMatrix reduced_gram(int i) const {
        const CMatrix h_i = columns(i);
        if (hf_.cols() == 0)
            return h_i.adjoint() * h_i;
        const Eigen::Index n_r = h_.rows();
        const CMatrix c = CMatrix::Identity(n_r, n_r) + scale_ * (hf_ * hf_.adjoint());
        Eigen::LLT<CMatrix> llt(c);
        if (llt.info() != Eigen::Success)
            throw SingularUpdate("C_i is not positive definite");
        const CMatrix x = llt.solve(h_i);
        const double residual = (c * x - h_i).norm();
        if (!std::isfinite(residual) || residual > 1e-6 * std::max(h_i.norm(), 1.0))
            throw SingularUpdate("solve against C_i left residual " + std::to_string(residual));
        return h_i.adjoint() * x;
    }

    void commit(int i, const CMatrix& block) {
        const CMatrix hb = columns(i) * block;
        CMatrix grown(hf_.rows(), hf_.cols() + hb.cols());
        grown << hf_, hb;
        hf_ = std::move(grown);
    }

    double scale() const noexcept { return scale_; }

private:
    const CMatrix& h_;
    const GsacConfig& cfg_;
    double scale_;
    std::vector<int> offsets_;
    CMatrix hf_;
};

} // namespace

UnconstrainedPrecoder design_unconstrained(const ChannelMatrix& h, const GsacConfig& cfg, double snr) {
    SicState state(h.h, cfg, snr);
    UnconstrainedPrecoder out;
    out.cfg = cfg;
    for (int i = 0; i < cfg.n_sub(); ++i) {
        const CMatrix p = state.reduced_gram(i);
        CMatrix v = hermitian_top_eigvecs(p, cfg.rf_per_sub[static_cast<std::size_t>(i)]).vectors;
        state.commit(i, v);
        out.per_block.push_back(std::move(v));
    }
    out.f_opt = block_diagonal(out.per_block);
    return out;
}

PhaseExtractedVector phase_extract_vector(const CVector& v, int n_ti) {
    if (v.size() != n_ti)
        throw DimensionMismatch("vector length differs from sub-array size");
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n_ti));
    PhaseExtractedVector out;
    out.a.resize(n_ti);
    double l1 = 0.0;
    for (int k = 0; k < n_ti; ++k) {
        out.a(k) = unit_phase(v(k)) * inv_sqrt_n;
        l1 += std::abs(v(k));
    }
    out.d = l1 * inv_sqrt_n;
    out.f = out.a * out.d;
    return out;
}

CMatrix least_squares_digital(const CMatrix& f_rf, const CMatrix& target) {
    const CMatrix gram = f_rf.adjoint() * f_rf;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
    const double hi = es.eigenvalues().maxCoeff();
    const double lo = es.eigenvalues().minCoeff();
    if (es.info() != Eigen::Success || !(hi > 0.0) || lo <= 1e-10 * hi)
        throw RankDeficientAnalog("analog block has (numerically) dependent columns");
    return gram.llt().solve(f_rf.adjoint() * target);
}

PhaseExtractedBlock phase_extract_matrix(const CMatrix& v_block) {
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(v_block.rows()));
    PhaseExtractedBlock out;
    out.f_rf = v_block.unaryExpr([&](Complex z) { return unit_phase(z) * inv_sqrt_n; });
    out.f_bb = least_squares_digital(out.f_rf, v_block);
    return out;
}

HybridPrecoder design_sic_hybrid(const ChannelMatrix& h, const GsacConfig& cfg, double snr) {
    SicState state(h.h, cfg, snr);
    std::vector<CMatrix> rf_blocks;
    std::vector<CMatrix> bb_blocks;
    for (int i = 0; i < cfg.n_sub(); ++i) {
        const auto ii = static_cast<std::size_t>(i);
        const int n_rf_i = cfg.rf_per_sub[ii];
        const CMatrix v = hermitian_top_eigvecs(state.reduced_gram(i), n_rf_i).vectors;
        if (n_rf_i == 1) {
            auto pe = phase_extract_vector(v.col(0), cfg.ant_per_sub[ii]);
            state.commit(i, pe.f);
            rf_blocks.emplace_back(std::move(pe.a));
            bb_blocks.emplace_back(CMatrix::Constant(1, 1, Complex(pe.d, 0.0)));
        } else {
            auto pe = phase_extract_matrix(v);
            state.commit(i, pe.f_rf * pe.f_bb);
            rf_blocks.push_back(std::move(pe.f_rf));
            bb_blocks.push_back(std::move(pe.f_bb));
        }
    }
    return assemble_hybrid(cfg, rf_blocks, bb_blocks);
}

std::vector<double> sic_sub_rates(const CMatrix& h, const GsacConfig& cfg, std::span<const CMatrix> blocks,
                                  double snr) {
    if (blocks.size() != static_cast<std::size_t>(cfg.n_sub()))
        throw DimensionMismatch("one block per sub-array expected");
    SicState state(h, cfg, snr);
    std::vector<double> out;
    for (int i = 0; i < cfg.n_sub(); ++i) {
        const CMatrix& f_i = blocks[static_cast<std::size_t>(i)];
        const CMatrix p = state.reduced_gram(i);
        out.push_back(log2_det_identity_plus(f_i.adjoint() * p * f_i, state.scale()));
        state.commit(i, f_i);
    }
    return out;
}

std::vector<CVector> true_aod_dictionary(const ChannelMatrix& h) {
    std::vector<CVector> atoms;
    atoms.reserve(h.aod.size());
    for (double theta : h.aod)
        atoms.push_back(ula_response(h.n_t(), theta));
    return atoms;
}

std::vector<CVector> grid_dictionary(int n_t, int n_atoms) {
    std::vector<CVector> atoms;
    atoms.reserve(static_cast<std::size_t>(n_atoms));
    for (int k = 0; k < n_atoms; ++k)
        atoms.push_back(ula_response(n_t, -kPi / 2 + kPi * k / n_atoms));
    return atoms;
}

OmpResult design_fc_omp_detailed(const ChannelMatrix& h, int n_rf, double snr,
                                 std::span<const CVector> dictionary) {
    const int n_t = h.n_t();
    if (n_rf < 1 || n_rf > n_t)
        throw OutOfRange("OMP needs 1 <= N_RF <= N_t");
    if (static_cast<int>(dictionary.size()) < n_rf)
        throw DictionaryTooSmall("dictionary has " + std::to_string(dictionary.size()) + " atoms, need " +
                                 std::to_string(n_rf));
    if (!(snr >= 0.0))
        throw NonFinite("SNR must be non-negative");

    const auto n_atoms = static_cast<Eigen::Index>(dictionary.size());
    CMatrix atoms(n_t, n_atoms);
    for (Eigen::Index k = 0; k < n_atoms; ++k) {
        if (dictionary[static_cast<std::size_t>(k)].size() != n_t)
            throw DimensionMismatch("dictionary atom length differs from N_t");
        atoms.col(k) = dictionary[static_cast<std::size_t>(k)];
    }

    const CMatrix f_opt = hermitian_top_eigvecs(h.h.adjoint() * h.h, n_rf).vectors;
    CMatrix residual = f_opt;
    std::vector<bool> used(static_cast<std::size_t>(n_atoms), false);
    OmpResult out;
    CMatrix f_rf(n_t, 0);
    CMatrix f_bb;
    for (int step = 0; step < n_rf; ++step) {
        const RVector score = (atoms.adjoint() * residual).rowwise().squaredNorm();
        Eigen::Index best = -1;
        for (Eigen::Index k = 0; k < n_atoms; ++k) {
            if (used[static_cast<std::size_t>(k)])
                continue;
            if (best < 0 || score(k) > score(best))
                best = k;
        }
        used[static_cast<std::size_t>(best)] = true;
        out.selected.push_back(static_cast<int>(best));
        CMatrix grown(n_t, f_rf.cols() + 1);
        grown << f_rf, atoms.col(best);
        f_rf = std::move(grown);

        f_bb = f_rf.completeOrthogonalDecomposition().solve(f_opt);
        residual = f_opt - f_rf * f_bb;
        const double rn = residual.norm();
        if (rn > 0.0)
            residual /= rn;
    }
    const double fn = (f_rf * f_bb).norm();
    if (fn > 0.0)
        f_bb *= std::sqrt(static_cast<double>(n_rf)) / fn;

    out.precoder.cfg = fully_connected(n_t, n_rf);
    out.precoder.f_rf = std::move(f_rf);
    out.precoder.f_bb = std::move(f_bb);
    out.precoder.f = out.precoder.f_rf * out.precoder.f_bb;
    return out;
}

HybridPrecoder design_fc_omp(const ChannelMatrix& h, int n_rf, double snr, std::span<const CVector> dictionary) {
    return design_fc_omp_detailed(h, n_rf, snr, dictionary).precoder;
}

void write_precoder_csv(std::ostream& os, const HybridPrecoder& prec, const std::string& scheme) {
    os << "# cfg=" << format_partition(prec.cfg.rf_per_sub) << " ant=" << format_partition(prec.cfg.ant_per_sub)
       << " scheme=" << scheme << '\n';
    os << "# F_RF nr=" << prec.f_rf.rows() << " nc=" << prec.f_rf.cols() << '\n';
    write_matrix_csv(os, prec.f_rf);
    os << "# F_BB nr=" << prec.f_bb.rows() << " nc=" << prec.f_bb.cols() << '\n';
    write_matrix_csv(os, prec.f_bb);
}

namespace {

std::string header_value(const std::string& line, const std::string& key) {
    const auto pos = line.find(key + "=");
    if (pos == std::string::npos)
        throw ParseError("precoder header lacks '" + key + "='");
    const auto start = pos + key.size() + 1;
    const auto end = line.find(' ', start);
    return line.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

CMatrix read_named_block(std::istream& is, const std::string& name) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# " + name, 0) != 0)
        throw ParseError("expected '# " + name + "' block header");
    const int rows = std::stoi(header_value(line, "nr"));
    const int cols = std::stoi(header_value(line, "nc"));
    return read_matrix_rows(is, rows, cols);
}

} // namespace

PrecoderFile read_precoder_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# cfg=", 0) != 0)
        throw ParseError("precoder file must start with '# cfg=(...)'");
    PrecoderFile out;
    out.rf_per_sub = parse_partition(header_value(line, "cfg"));
    out.ant_per_sub = parse_partition(header_value(line, "ant"));
    out.scheme = header_value(line, "scheme");
    out.f_rf = read_named_block(is, "F_RF");
    out.f_bb = read_named_block(is, "F_BB");
    return out;
}

} // namespace gsac
