// SPDX-License-Identifier: Apache-2.0
#include "gsac/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gsac/errors.hpp"

namespace gsac {

BeamsteeringCodebook build_codebook(const GsacConfig& cfg, int b) {
    if (b < kMinCodebookBits || b > kMaxCodebookBits)
        throw OutOfRange("codebook bits " + std::to_string(b) + " outside [" + std::to_string(kMinCodebookBits) +
                         ", " + std::to_string(kMaxCodebookBits) + "]");
    BeamsteeringCodebook cb;
    cb.bits = b;
    cb.cfg = cfg;
    const int n_words = 1 << b;
    const auto offsets = cfg.antenna_offsets();
    for (int i = 0; i < cfg.n_sub(); ++i) {
        const auto ii = static_cast<std::size_t>(i);
        const int n_ti = cfg.ant_per_sub[ii];
        std::vector<int> lambda(static_cast<std::size_t>(n_ti));
        std::iota(lambda.begin(), lambda.end(), offsets[ii]);

        const double amp = 1.0 / std::sqrt(static_cast<double>(n_ti));
        CMatrix words(n_ti, n_words);
        for (int n = 0; n < n_words; ++n) {
            const double s = std::sin(2.0 * kPi * n / n_words);
            for (int k = 0; k < n_ti; ++k)
                words(k, n) = std::polar(amp, kPi * lambda[static_cast<std::size_t>(k)] * s);
        }
        cb.per_sub.push_back(std::move(words));
        cb.antenna_index_sets.push_back(std::move(lambda));
    }
    return cb;
}

namespace {

constexpr double kTieTolerance = 1e-12;

bool well_conditioned(const CMatrix& columns) {
    const CMatrix gram = columns.adjoint() * columns;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
    const double hi = es.eigenvalues().maxCoeff();
    return es.info() == Eigen::Success && hi > 0.0 && es.eigenvalues().minCoeff() > 1e-10 * hi;
}

} // namespace

QuantizationResult quantize_analog_detailed(const UnconstrainedPrecoder& f_opt, const BeamsteeringCodebook& codebook) {
    if (!(f_opt.cfg == codebook.cfg))
        throw DimensionMismatch("codebook and precoder were built for different configurations");

    QuantizationResult out;
    std::vector<CMatrix> rf_blocks;
    std::vector<CMatrix> bb_blocks;
    for (std::size_t i = 0; i < f_opt.per_block.size(); ++i) {
        const CMatrix& target = f_opt.per_block[i];
        const CMatrix& words = codebook.per_sub[i];

        // |A_i^H V_i|, one column per unconstrained column.
        const Eigen::MatrixXd corr = (words.adjoint() * target).cwiseAbs();
        CMatrix f_rf(target.rows(), 0);
        std::vector<int> picks;
        for (Eigen::Index m = 0; m < target.cols(); ++m) {
            std::vector<int> ranked(static_cast<std::size_t>(words.cols()));
            std::iota(ranked.begin(), ranked.end(), 0);
            std::stable_sort(ranked.begin(), ranked.end(),
                             [&](int a, int b) { return corr(a, m) > corr(b, m); });
            // Codewords n and 2^(b-1) - n coincide; rounding must not decide
            // between them, so near-equal scores go to the lower index.
            for (auto first = ranked.begin(); first != ranked.end();) {
                const double lead = corr(*first, m);
                auto last = std::find_if(first, ranked.end(),
                                         [&](int n) { return corr(n, m) < lead - kTieTolerance * std::max(lead, 1.0); });
                std::sort(first, last);
                first = last;
            }
            bool placed = false;
            for (int n : ranked) {
                CMatrix trial(f_rf.rows(), f_rf.cols() + 1);
                trial << f_rf, words.col(n);
                if (f_rf.cols() > 0 && !well_conditioned(trial))
                    continue;
                f_rf = std::move(trial);
                picks.push_back(n);
                placed = true;
                break;
            }
            if (!placed)
                throw RankDeficientAnalog("no codeword keeps sub-array " + std::to_string(i) +
                                          " analog block full rank");
        }
        bb_blocks.push_back(least_squares_digital(f_rf, target));
        rf_blocks.push_back(std::move(f_rf));
        out.codeword_index.push_back(std::move(picks));
    }
    out.precoder = assemble_hybrid(f_opt.cfg, rf_blocks, bb_blocks);
    return out;
}

HybridPrecoder quantize_analog(const UnconstrainedPrecoder& f_opt, const BeamsteeringCodebook& codebook) {
    return quantize_analog_detailed(f_opt, codebook).precoder;
}

int feedback_bits(const BeamsteeringCodebook& codebook) noexcept {
    return codebook.bits * codebook.cfg.n_rf_total;
}

} // namespace gsac
