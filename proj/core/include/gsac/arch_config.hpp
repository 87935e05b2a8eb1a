// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gsac {

/// RF-chain / antenna partition of the transmit array.
///
/// Sub-array i drives `ant_per_sub[i]` antennas from `rf_per_sub[i]` RF
/// chains; each RF chain in sub-array i feeds `n_ps_per_rf[i]` phase shifters
/// (always equal to the antenna count of that sub-array). Validated configs
/// are stored in canonical order: `rf_per_sub` non-increasing, ties broken by
/// antenna count, also non-increasing.
struct GsacConfig {
    int n_t = 0;
    int n_rf_total = 0;
    std::vector<int> rf_per_sub;
    std::vector<int> ant_per_sub;
    std::vector<int> n_ps_per_rf;

    int n_sub() const noexcept { return static_cast<int>(rf_per_sub.size()); }

    /// Total phase-shifter count, sum of N_PS,i * N_RF,i.
    int n_ps_total() const noexcept;

    /// First antenna row of each sub-array (size n_sub()).
    std::vector<int> antenna_offsets() const;

    /// First RF-chain column of each sub-array (size n_sub()).
    std::vector<int> rf_offsets() const;

    bool is_fully_connected() const noexcept { return n_sub() == 1; }
    bool is_sub_array_connected() const noexcept { return n_sub() == n_rf_total; }

    friend bool operator==(const GsacConfig&, const GsacConfig&) = default;
};

/// Checks every structural rule and returns the canonical form. A config
/// that is already canonical comes back unchanged.
/// Throws ConstraintViolation naming the failed rule.
GsacConfig validate_config(GsacConfig cfg);

/// Antenna split proportional to the RF-chain split:
/// N_t,i = (N_t / N_RF) * N_RF,i. Order of `rf_per_sub` is preserved.
/// Throws IndivisibleAllocation unless N_RF divides N_t.
std::vector<int> allocate_antennas(int n_t, std::span<const int> rf_per_sub);

/// Builds and validates a config. Antennas are allocated proportionally
/// unless `ant_per_sub` is given.
GsacConfig make_config(int n_t, std::span<const int> rf_per_sub,
                       std::optional<std::vector<int>> ant_per_sub = std::nullopt);

/// The boundary architectures.
GsacConfig fully_connected(int n_t, int n_rf);
GsacConfig sub_array_connected(int n_t, int n_rf);

inline constexpr int kMaxPartitionN = 64;

/// All partitions of n, canonical (non-increasing parts), reverse
/// lexicographic order: (n) first, (1,...,1) last.
struct PartitionSet {
    int n = 0;
    std::vector<std::vector<int>> partitions;

    std::size_t size() const noexcept { return partitions.size(); }
};

/// Visits partitions of n in the same order as enumerate_partitions without
/// materializing them. The span is only valid during the call.
void for_each_partition(int n, const std::function<void(std::span<const int>)>& visit);

/// Throws OutOfRange unless 1 <= n <= kMaxPartitionN.
PartitionSet enumerate_partitions(int n);

/// Asymptotic partition count (1 / (4 n sqrt 3)) exp(pi sqrt(2n/3)).
/// Reporting only.
double partition_count_estimate(int n);

/// Parses "(5,2,1)". Whitespace around tokens is ignored. Throws ParseError.
std::vector<int> parse_partition(std::string_view text);

/// Formats as "(5,2,1)".
std::string format_partition(std::span<const int> parts);

} // namespace gsac
