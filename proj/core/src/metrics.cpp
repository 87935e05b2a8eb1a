// SPDX-License-Identifier: Apache-2.0
#include "gsac/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsac/errors.hpp"

namespace gsac {

void validate_power_model(const PowerModel& pm) {
    for (double w : {pm.p_co, pm.p_rf, pm.p_pa, pm.p_ps})
        if (!(w >= 0.0) || !std::isfinite(w))
            throw ValidationError("power model components must be finite and non-negative");
}

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) noexcept { return 10.0 * std::log10(linear); }

double log2_det_identity_plus(const CMatrix& m, double scale) {
    const Eigen::Index n = m.rows();
    CMatrix a = CMatrix::Identity(n, n) + scale * m;
    a = 0.5 * (a + a.adjoint()).eval();
    Eigen::LLT<CMatrix> llt(a);
    if (llt.info() == Eigen::Success) {
        double acc = 0.0;
        const CMatrix& l = llt.matrixLLT();
        for (Eigen::Index i = 0; i < n; ++i)
            acc += std::log(l(i, i).real());
        return 2.0 * acc / std::log(2.0);
    }
    // Loss of definiteness only from rounding on a near-singular m; fall back
    // to eigenvalues clamped at zero.
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NonFinite("log-determinant failed to converge");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        acc += std::log1p(scale * std::max(es.eigenvalues()(i), 0.0));
    return acc / std::log(2.0);
}

double achievable_rate(const CMatrix& h, const CMatrix& f, const LinkBudget& budget) {
    if (h.cols() != f.rows())
        throw DimensionMismatch("channel has " + std::to_string(h.cols()) + " transmit antennas, precoder has " +
                                std::to_string(f.rows()) + " rows");
    if (budget.n_s < 1)
        throw DimensionMismatch("stream count must be positive");
    if (!(budget.snr >= 0.0) || !std::isfinite(budget.snr))
        throw NonFinite("SNR must be finite and non-negative");
    if (!h.allFinite() || !f.allFinite())
        throw NonFinite("channel or precoder contains NaN/Inf");
    const CMatrix hf = h * f;
    const CMatrix gram = hf.adjoint() * hf;
    const double rate = log2_det_identity_plus(gram, budget.snr / budget.n_s);
    return rate > 0.0 ? rate : 0.0;
}

double achievable_rate(const ChannelMatrix& h, const CMatrix& f, const LinkBudget& budget) {
    return achievable_rate(h.h, f, budget);
}

double total_power(const GsacConfig& cfg, const PowerModel& pm) {
    return pm.p_co + cfg.n_rf_total * pm.p_rf + cfg.n_t * pm.p_pa + cfg.n_ps_total() * pm.p_ps;
}

double energy_efficiency(double rate, double power) {
    if (!(power > 0.0))
        throw ZeroPower("energy efficiency needs positive total power");
    return rate / power;
}

} // namespace gsac
