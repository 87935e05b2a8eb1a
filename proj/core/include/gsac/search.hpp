// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gsac/arch_config.hpp"
#include "gsac/channel.hpp"
#include "gsac/metrics.hpp"

namespace gsac {

struct SearchCandidate {
    std::vector<int> rf_per_sub;
    std::optional<GsacConfig> cfg; // empty when skipped
    int n_ps = 0;
    double power_w = 0.0;
    double mean_rate = 0.0;
    double mean_ee = 0.0;
    std::uint64_t channel_digest = 0; // combined hash of every channel seen
    std::string skipped_reason;

    bool skipped() const noexcept { return !cfg.has_value(); }
};

/// Exhaustive energy-efficiency search over all RF-chain partitions.
struct SearchReport {
    int n_t = 0;
    int n_r = 0;
    int n_rf = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    std::vector<SearchCandidate> candidates; // enumeration order
    std::size_t best = 0;

    const SearchCandidate& winner() const { return candidates.at(best); }

    /// Index of the candidate with the given partition, if present.
    std::optional<std::size_t> find(const std::vector<int>& rf_per_sub) const;
};

struct SearchOptions {
    int trials = 100;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

/// Evaluates every partition of n_rf with the SIC hybrid design on the same
/// `trials` channel realizations (trial k uses derive_seed(seed, k)), and
/// picks the candidate with the highest mean_rate / power. Equal efficiencies
/// go to fewer phase shifters, then to the lexicographically larger
/// partition.
///
/// Partitions whose antenna allocation fails are kept with a skip reason.
/// Throws IndivisibleAllocation if every candidate is skipped.
SearchReport search_best_config(int n_t, int n_r, int n_rf, const ChannelParams& channel, const LinkBudget& budget,
                                const PowerModel& pm, const SearchOptions& options);

struct RobustnessSummary {
    bool winners_agree = false;
    std::vector<int> winner_a;
    std::vector<int> winner_b;
    /// EE lost in report b's channels by using a's winner instead of b's (>= 0).
    double gap_a_in_b = 0.0;
    /// EE lost in report a's channels by using b's winner instead of a's (>= 0).
    double gap_b_in_a = 0.0;
};

/// Throws MismatchedSearchSpace unless both reports cover the same
/// (n_t, n_rf) candidate set.
RobustnessSummary config_robustness(const SearchReport& a, const SearchReport& b);

/// CSV: cfg,n_ps,power_w,mean_rate,mean_ee,skipped_reason, one row per
/// candidate, then a "# winner=..." summary line.
void write_search_csv(std::ostream& os, const SearchReport& report);

std::string winner_summary(const SearchReport& report);

} // namespace gsac
