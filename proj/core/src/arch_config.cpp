// SPDX-License-Identifier: Apache-2.0
#include "gsac/arch_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gsac/errors.hpp"
#include "gsac/types.hpp"

namespace gsac {

const char* to_string(ConfigRule rule) noexcept {
    switch (rule) {
    case ConfigRule::Empty: return "empty";
    case ConfigRule::LengthMismatch: return "length-mismatch";
    case ConfigRule::RfSum: return "rf-sum";
    case ConfigRule::AntennaSum: return "antenna-sum";
    case ConfigRule::RfPerSubArray: return "rf-per-sub-array";
    case ConfigRule::PhaseShifterCount: return "phase-shifter-count";
    case ConfigRule::Ordering: return "ordering";
    }
    return "unknown";
}

int GsacConfig::n_ps_total() const noexcept {
    int total = 0;
    for (std::size_t i = 0; i < rf_per_sub.size() && i < n_ps_per_rf.size(); ++i)
        total += n_ps_per_rf[i] * rf_per_sub[i];
    return total;
}

std::vector<int> GsacConfig::antenna_offsets() const {
    std::vector<int> out(ant_per_sub.size());
    std::exclusive_scan(ant_per_sub.begin(), ant_per_sub.end(), out.begin(), 0);
    return out;
}

std::vector<int> GsacConfig::rf_offsets() const {
    std::vector<int> out(rf_per_sub.size());
    std::exclusive_scan(rf_per_sub.begin(), rf_per_sub.end(), out.begin(), 0);
    return out;
}

GsacConfig validate_config(GsacConfig cfg) {
    const std::size_t n = cfg.rf_per_sub.size();
    if (n == 0)
        throw ConstraintViolation(ConfigRule::Empty, "configuration has no sub-arrays");
    if (cfg.ant_per_sub.size() != n || cfg.n_ps_per_rf.size() != n)
        throw ConstraintViolation(ConfigRule::LengthMismatch,
                                  "rf_per_sub, ant_per_sub and n_ps_per_rf must have equal length");

    const int rf_sum = std::accumulate(cfg.rf_per_sub.begin(), cfg.rf_per_sub.end(), 0);
    if (rf_sum != cfg.n_rf_total)
        throw ConstraintViolation(ConfigRule::RfSum,
                                  "RF chains per sub-array sum to " + std::to_string(rf_sum) +
                                      ", expected " + std::to_string(cfg.n_rf_total));
    const int ant_sum = std::accumulate(cfg.ant_per_sub.begin(), cfg.ant_per_sub.end(), 0);
    if (ant_sum != cfg.n_t)
        throw ConstraintViolation(ConfigRule::AntennaSum,
                                  "antennas per sub-array sum to " + std::to_string(ant_sum) +
                                      ", expected " + std::to_string(cfg.n_t));

    for (std::size_t i = 0; i < n; ++i) {
        const int rf = cfg.rf_per_sub[i];
        const int ant = cfg.ant_per_sub[i];
        if (rf < 1 || rf > ant)
            throw ConstraintViolation(ConfigRule::RfPerSubArray,
                                      "sub-array " + std::to_string(i) + " has " + std::to_string(rf) +
                                          " RF chains for " + std::to_string(ant) + " antennas");
        if (cfg.n_ps_per_rf[i] != ant)
            throw ConstraintViolation(ConfigRule::PhaseShifterCount,
                                      "sub-array " + std::to_string(i) +
                                          " phase shifters per RF chain differ from its antenna count");
    }

    const int n_sub = static_cast<int>(n);
    const int n_ps = cfg.n_ps_total();
    if (!(n_sub <= cfg.n_rf_total && cfg.n_rf_total <= cfg.n_t && cfg.n_t <= n_ps))
        throw ConstraintViolation(ConfigRule::Ordering, "N_sub <= N_RF <= N_t <= N_PS does not hold");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (cfg.rf_per_sub[a] != cfg.rf_per_sub[b])
            return cfg.rf_per_sub[a] > cfg.rf_per_sub[b];
        return cfg.ant_per_sub[a] > cfg.ant_per_sub[b];
    });
    GsacConfig out = cfg;
    for (std::size_t k = 0; k < n; ++k) {
        out.rf_per_sub[k] = cfg.rf_per_sub[order[k]];
        out.ant_per_sub[k] = cfg.ant_per_sub[order[k]];
        out.n_ps_per_rf[k] = cfg.n_ps_per_rf[order[k]];
    }
    return out;
}

std::vector<int> allocate_antennas(int n_t, std::span<const int> rf_per_sub) {
    const int n_rf = std::accumulate(rf_per_sub.begin(), rf_per_sub.end(), 0);
    if (n_rf <= 0 || n_t <= 0)
        throw IndivisibleAllocation("antenna allocation needs positive N_t and N_RF");
    if (n_t % n_rf != 0)
        throw IndivisibleAllocation("N_t=" + std::to_string(n_t) + " is not divisible by N_RF=" +
                                    std::to_string(n_rf));
    const int per_chain = n_t / n_rf;
    std::vector<int> out;
    out.reserve(rf_per_sub.size());
    for (int rf : rf_per_sub)
        out.push_back(per_chain * rf);
    return out;
}

GsacConfig make_config(int n_t, std::span<const int> rf_per_sub,
                       std::optional<std::vector<int>> ant_per_sub) {
    GsacConfig cfg;
    cfg.n_t = n_t;
    cfg.rf_per_sub.assign(rf_per_sub.begin(), rf_per_sub.end());
    cfg.n_rf_total = std::accumulate(rf_per_sub.begin(), rf_per_sub.end(), 0);
    cfg.ant_per_sub = ant_per_sub ? std::move(*ant_per_sub) : allocate_antennas(n_t, rf_per_sub);
    cfg.n_ps_per_rf = cfg.ant_per_sub;
    return validate_config(std::move(cfg));
}

GsacConfig fully_connected(int n_t, int n_rf) {
    const std::vector<int> rf{n_rf};
    return make_config(n_t, rf, std::vector<int>{n_t});
}

GsacConfig sub_array_connected(int n_t, int n_rf) {
    const std::vector<int> rf(static_cast<std::size_t>(std::max(n_rf, 0)), 1);
    return make_config(n_t, rf);
}

namespace {

void partitions_rec(int remaining, int max_part, std::vector<int>& prefix,
                    const std::function<void(std::span<const int>)>& visit) {
    if (remaining == 0) {
        visit(prefix);
        return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        prefix.push_back(part);
        partitions_rec(remaining - part, part, prefix, visit);
        prefix.pop_back();
    }
}

void check_partition_range(int n) {
    if (n < 1 || n > kMaxPartitionN)
        throw OutOfRange("partition size " + std::to_string(n) + " outside [1, " +
                         std::to_string(kMaxPartitionN) + "]");
}

} // namespace

void for_each_partition(int n, const std::function<void(std::span<const int>)>& visit) {
    check_partition_range(n);
    std::vector<int> prefix;
    prefix.reserve(static_cast<std::size_t>(n));
    partitions_rec(n, n, prefix, visit);
}

PartitionSet enumerate_partitions(int n) {
    PartitionSet set;
    set.n = n;
    for_each_partition(n, [&](std::span<const int> p) { set.partitions.emplace_back(p.begin(), p.end()); });
    return set;
}

double partition_count_estimate(int n) {
    const double x = static_cast<double>(n);
    return std::exp(kPi * std::sqrt(2.0 * x / 3.0)) / (4.0 * x * std::sqrt(3.0));
}

std::vector<int> parse_partition(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
            s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
            s.remove_suffix(1);
        return s;
    };
    const std::string_view whole = trim(text);
    if (whole.size() < 2 || whole.front() != '(' || whole.back() != ')')
        throw ParseError("configuration '" + std::string(text) + "' must look like (5,2,1)");
    std::string_view body = whole.substr(1, whole.size() - 2);
    std::vector<int> parts;
    while (true) {
        const auto comma = body.find(',');
        const std::string_view token = trim(body.substr(0, comma));
        int value = 0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
            throw ParseError("configuration '" + std::string(text) + "' has a non-integer entry");
        parts.push_back(value);
        if (comma == std::string_view::npos)
            break;
        body.remove_prefix(comma + 1);
    }
    return parts;
}

std::string format_partition(std::span<const int> parts) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < parts.size(); ++i)
        os << (i ? "," : "") << parts[i];
    os << ')';
    return os.str();
}

} // namespace gsac
