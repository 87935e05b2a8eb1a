// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gsac/arch_config.hpp"
#include "gsac/channel.hpp"
#include "gsac/types.hpp"

namespace gsac {

/// Per-component power draw in watts. Defaults are the common-site,
/// RF-chain, power-amplifier and phase-shifter figures used throughout the
/// evaluation (10 W, 100 mW, 100 mW, 10 mW).
struct PowerModel {
    double p_co = 10.0;
    double p_rf = 0.1;
    double p_pa = 0.1;
    double p_ps = 0.01;
};

/// Throws ValidationError on a negative or non-finite component.
void validate_power_model(const PowerModel& pm);

/// SNR is rho / sigma^2 with sigma^2 = 1; power splits equally over n_s
/// streams.
struct LinkBudget {
    double snr = 1.0;
    int n_s = 1;
};

double db_to_linear(double db) noexcept;
double linear_to_db(double linear) noexcept;

/// log2 det(I + scale * m) for Hermitian PSD m, through a Cholesky factor of
/// the (symmetrized) positive-definite argument.
double log2_det_identity_plus(const CMatrix& m, double scale);

/// log2 |I + (snr / N_s) H F F^H H^H|, evaluated on the smaller
/// N_s x N_s Gram form. Throws NonFinite on NaN/Inf input and
/// DimensionMismatch on shape errors.
double achievable_rate(const CMatrix& h, const CMatrix& f, const LinkBudget& budget);
double achievable_rate(const ChannelMatrix& h, const CMatrix& f, const LinkBudget& budget);

/// P_CO + N_RF P_RF + N_t P_PA + N_PS P_PS.
double total_power(const GsacConfig& cfg, const PowerModel& pm);

/// rate / power. Throws ZeroPower when power <= 0.
double energy_efficiency(double rate, double power);

} // namespace gsac
