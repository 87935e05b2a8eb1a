// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gsac/errors.hpp"
#include "gsac/metrics.hpp"
#include "gsac/precoder.hpp"
#include "gsac/rng.hpp"
#include "gsac/search.hpp"

using namespace gsac;

namespace {

SearchReport run(int n_t, int n_r, int n_rf, int trials, std::uint64_t seed, unsigned workers = 1) {
    ChannelParams ch;
    return search_best_config(n_t, n_r, n_rf, ch, {1.0, n_rf}, PowerModel{}, {trials, seed, workers});
}

} // namespace

TEST_CASE("search covers every partition and the winner has the highest efficiency") {
    const SearchReport r = run(16, 4, 4, 6, 3);
    REQUIRE(r.candidates.size() == 5);
    CHECK(r.candidates.front().rf_per_sub == std::vector<int>{4});
    CHECK(r.candidates.back().rf_per_sub == std::vector<int>{1, 1, 1, 1});
    for (const auto& c : r.candidates) {
        CHECK_FALSE(c.skipped());
        CHECK(c.mean_ee <= r.winner().mean_ee);
        CHECK(c.mean_ee == doctest::Approx(c.mean_rate / c.power_w).epsilon(1e-15));
        CHECK(c.channel_digest == r.candidates.front().channel_digest);
    }
}

TEST_CASE("search means match an independent per-trial recomputation") {
    const int trials = 4;
    const SearchReport r = run(12, 4, 3, trials, 17);
    for (const auto& c : r.candidates) {
        double sum = 0.0;
        for (int k = 0; k < trials; ++k) {
            ChannelParams p;
            p.n_t = 12;
            p.n_r = 4;
            p.seed = derive_seed(17, static_cast<std::uint64_t>(k));
            const ChannelMatrix h = generate_channel(p);
            sum += achievable_rate(h, design_sic_hybrid(h, *c.cfg, 1.0).f, {1.0, 3});
        }
        CHECK(c.mean_rate == doctest::Approx(sum / trials).epsilon(1e-12));
        CHECK(c.power_w == doctest::Approx(total_power(*c.cfg, PowerModel{})).epsilon(1e-15));
    }
}

TEST_CASE("search results do not depend on the worker count") {
    const SearchReport a = run(16, 4, 4, 5, 9, 1);
    const SearchReport b = run(16, 4, 4, 5, 9, 3);
    REQUIRE(a.candidates.size() == b.candidates.size());
    for (std::size_t i = 0; i < a.candidates.size(); ++i)
        CHECK(a.candidates[i].mean_rate == b.candidates[i].mean_rate);
    CHECK(a.best == b.best);
}

TEST_CASE("indivisible antenna count fails every candidate") {
    CHECK_THROWS_AS(run(10, 4, 4, 2, 1), IndivisibleAllocation);
    CHECK_THROWS_AS(run(16, 4, 4, 0, 1), ValidationError);
}

TEST_CASE("robustness across two seeds") {
    const SearchReport a = run(16, 4, 4, 4, 1);
    const SearchReport b = run(16, 4, 4, 4, 2);
    const RobustnessSummary s = config_robustness(a, b);
    CHECK(s.winner_a == a.winner().rf_per_sub);
    CHECK(s.winner_b == b.winner().rf_per_sub);
    CHECK(s.gap_a_in_b >= 0.0);
    CHECK(s.gap_b_in_a >= 0.0);
    if (s.winners_agree) {
        CHECK(s.gap_a_in_b == 0.0);
        CHECK(s.gap_b_in_a == 0.0);
    }
    CHECK_THROWS_AS(config_robustness(a, run(16, 4, 2, 2, 1)), MismatchedSearchSpace);
}

TEST_CASE("search CSV lists every candidate and the winner") {
    const SearchReport r = run(8, 4, 2, 2, 4);
    std::ostringstream os;
    write_search_csv(os, r);
    const std::string text = os.str();
    CHECK(text.rfind("cfg,n_ps,power_w,mean_rate,mean_ee,skipped_reason\n", 0) == 0);
    CHECK(text.find("\"(2)\",") != std::string::npos);
    CHECK(text.find("\"(1,1)\",") != std::string::npos);
    CHECK(text.find("# winner=" + format_partition(r.winner().rf_per_sub)) != std::string::npos);
}
