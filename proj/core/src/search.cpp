// SPDX-License-Identifier: Apache-2.0
#include "gsac/search.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "gsac/errors.hpp"
#include "gsac/parallel.hpp"
#include "gsac/precoder.hpp"
#include "gsac/rng.hpp"

namespace gsac {

std::optional<std::size_t> SearchReport::find(const std::vector<int>& rf_per_sub) const {
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (candidates[i].rf_per_sub == rf_per_sub)
            return i;
    return std::nullopt;
}

namespace {

bool better(const SearchCandidate& c, const SearchCandidate& incumbent) {
    if (c.mean_ee != incumbent.mean_ee)
        return c.mean_ee > incumbent.mean_ee;
    if (c.n_ps != incumbent.n_ps)
        return c.n_ps < incumbent.n_ps;
    return std::lexicographical_compare(incumbent.rf_per_sub.begin(), incumbent.rf_per_sub.end(),
                                        c.rf_per_sub.begin(), c.rf_per_sub.end());
}

} // namespace

SearchReport search_best_config(int n_t, int n_r, int n_rf, const ChannelParams& channel, const LinkBudget& budget,
                                const PowerModel& pm, const SearchOptions& options) {
    if (options.trials < 1)
        throw ValidationError("search needs at least one trial");
    validate_power_model(pm);

    SearchReport report;
    report.n_t = n_t;
    report.n_r = n_r;
    report.n_rf = n_rf;
    report.trials = options.trials;
    report.seed = options.seed;

    std::vector<std::size_t> active;
    for (auto& rf : enumerate_partitions(n_rf).partitions) {
        SearchCandidate c;
        c.rf_per_sub = rf;
        try {
            c.cfg = make_config(n_t, rf);
            c.n_ps = c.cfg->n_ps_total();
            c.power_w = total_power(*c.cfg, pm);
            active.push_back(report.candidates.size());
        } catch (const ValidationError& e) {
            c.skipped_reason = e.what();
        }
        report.candidates.push_back(std::move(c));
    }
    if (active.empty())
        throw IndivisibleAllocation("no RF configuration of N_RF=" + std::to_string(n_rf) +
                                    " admits an antenna allocation for N_t=" + std::to_string(n_t));

    const LinkBudget link{budget.snr, n_rf};
    const auto trials = static_cast<std::size_t>(options.trials);
    std::vector<std::vector<double>> rates(trials, std::vector<double>(active.size()));
    std::vector<std::uint64_t> hashes(trials);

    parallel_for(trials, options.workers, [&](std::size_t k) {
        ChannelParams params = channel;
        params.n_t = n_t;
        params.n_r = n_r;
        params.seed = derive_seed(options.seed, k);
        const ChannelMatrix h = generate_channel(params);
        hashes[k] = channel_hash(h.h);
        for (std::size_t a = 0; a < active.size(); ++a) {
            const GsacConfig& cfg = *report.candidates[active[a]].cfg;
            rates[k][a] = achievable_rate(h, design_sic_hybrid(h, cfg, link.snr).f, link);
        }
    });

    for (std::size_t a = 0; a < active.size(); ++a) {
        SearchCandidate& c = report.candidates[active[a]];
        double sum = 0.0;
        std::uint64_t digest = 0;
        for (std::size_t k = 0; k < trials; ++k) {
            sum += rates[k][a];
            digest = splitmix64(digest ^ hashes[k]);
        }
        c.mean_rate = sum / static_cast<double>(trials);
        c.mean_ee = energy_efficiency(c.mean_rate, c.power_w);
        c.channel_digest = digest;
    }

    report.best = active.front();
    for (std::size_t idx : active)
        if (better(report.candidates[idx], report.candidates[report.best]))
            report.best = idx;
    return report;
}

RobustnessSummary config_robustness(const SearchReport& a, const SearchReport& b) {
    if (a.n_t != b.n_t || a.n_rf != b.n_rf || a.candidates.size() != b.candidates.size())
        throw MismatchedSearchSpace("reports cover different (N_t, N_RF) search spaces");
    RobustnessSummary s;
    s.winner_a = a.winner().rf_per_sub;
    s.winner_b = b.winner().rf_per_sub;
    s.winners_agree = s.winner_a == s.winner_b;
    const auto a_in_b = b.find(s.winner_a);
    const auto b_in_a = a.find(s.winner_b);
    if (!a_in_b || !b_in_a)
        throw MismatchedSearchSpace("winner of one report is missing from the other");
    s.gap_a_in_b = b.winner().mean_ee - b.candidates[*a_in_b].mean_ee;
    s.gap_b_in_a = a.winner().mean_ee - a.candidates[*b_in_a].mean_ee;
    return s;
}

std::string winner_summary(const SearchReport& report) {
    const SearchCandidate& w = report.winner();
    std::ostringstream os;
    os << std::setprecision(10) << "# winner=" << format_partition(w.rf_per_sub) << " ant="
       << format_partition(w.cfg->ant_per_sub) << " n_ps=" << w.n_ps << " power_w=" << w.power_w
       << " mean_rate=" << w.mean_rate << " mean_ee=" << w.mean_ee << " trials=" << report.trials
       << " seed=" << report.seed;
    return os.str();
}

void write_search_csv(std::ostream& os, const SearchReport& report) {
    const auto old = os.precision(10);
    os << "cfg,n_ps,power_w,mean_rate,mean_ee,skipped_reason\n";
    for (const auto& c : report.candidates) {
        os << '"' << format_partition(c.rf_per_sub) << '"' << ',';
        if (c.skipped()) {
            std::string reason = c.skipped_reason;
            std::replace(reason.begin(), reason.end(), '"', '\'');
            os << ",,,,\"" << reason << "\"\n";
        } else {
            os << c.n_ps << ',' << c.power_w << ',' << c.mean_rate << ',' << c.mean_ee << ",\n";
        }
    }
    os << winner_summary(report) << '\n';
    os.precision(old);
}

} // namespace gsac
