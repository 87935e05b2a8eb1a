// SPDX-License-Identifier: Apache-2.0
#include "gsac/experiment.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "gsac/codebook.hpp"
#include "gsac/errors.hpp"
#include "gsac/parallel.hpp"
#include "gsac/precoder.hpp"
#include "gsac/rng.hpp"

namespace gsac {

const char* to_string(SweepAxis axis) noexcept {
    switch (axis) {
    case SweepAxis::SnrDb: return "snr_db";
    case SweepAxis::NumAntennas: return "n_t";
    case SweepAxis::NumSubArrays: return "n_sub";
    case SweepAxis::RfPerSubArray: return "n_rf_i";
    case SweepAxis::Bits: return "bits";
    }
    return "unknown";
}

const char* to_string(Scheme scheme) noexcept {
    switch (scheme) {
    case Scheme::GsacSic: return "gsac-sic";
    case Scheme::GsacOpt: return "gsac-opt";
    case Scheme::GsacCodebook: return "gsac-codebook";
    case Scheme::SacSic: return "sac-sic";
    case Scheme::FcOmp: return "fc-omp";
    case Scheme::GsacSicEqualRf: return "gsac-sic-equal-rf";
    }
    return "unknown";
}

SweepAxis parse_sweep_axis(std::string_view name) {
    for (auto axis : {SweepAxis::SnrDb, SweepAxis::NumAntennas, SweepAxis::NumSubArrays, SweepAxis::RfPerSubArray,
                      SweepAxis::Bits})
        if (name == to_string(axis))
            return axis;
    throw ParseError("unknown sweep axis '" + std::string(name) + "'");
}

Scheme parse_scheme(std::string_view name) {
    for (auto s : {Scheme::GsacSic, Scheme::GsacOpt, Scheme::GsacCodebook, Scheme::SacSic, Scheme::FcOmp,
                   Scheme::GsacSicEqualRf})
        if (name == to_string(s))
            return s;
    throw ParseError("unknown scheme '" + std::string(name) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos)
            return out;
        s.remove_prefix(comma + 1);
    }
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError("key '" + std::string(key) + "': '" + std::string(text) + "' is not a valid number");
    return value;
}

std::vector<std::vector<int>> parse_config_list(std::string_view text) {
    std::vector<std::vector<int>> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const char c = text[pos];
        if (std::isspace(static_cast<unsigned char>(c)) || c == ';' || c == ',') {
            ++pos;
            continue;
        }
        const auto close = text.find(')', pos);
        if (c != '(' || close == std::string_view::npos)
            throw ParseError("rf_configs: expected a list like '(2,2) (3,1)'");
        out.push_back(parse_partition(text.substr(pos, close - pos + 1)));
        pos = close + 1;
    }
    return out;
}

// A resolved sweep point.
struct SweepPoint {
    double value = 0.0;
    int n_t = 0;
    int n_rf = 0;
    double snr = 1.0;
    int bits = 7;
    std::vector<std::vector<int>> gsac_configs;
};

std::vector<SweepPoint> resolve_points(const ExperimentSpec& spec) {
    std::vector<SweepPoint> points;
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        SweepPoint p;
        p.value = spec.values[i];
        p.n_t = spec.n_t;
        p.n_rf = spec.n_rf;
        p.snr = db_to_linear(spec.snr_db);
        p.bits = spec.bits;
        p.gsac_configs = spec.rf_configs;
        const double v = spec.values[i];
        const int iv = static_cast<int>(std::lround(v));
        switch (spec.axis) {
        case SweepAxis::SnrDb: p.snr = spec.snr_linear.at(i); break;
        case SweepAxis::NumAntennas: p.n_t = iv; break;
        case SweepAxis::NumSubArrays:
            p.n_rf = spec.n_rf_i * iv;
            p.gsac_configs = {std::vector<int>(static_cast<std::size_t>(std::max(iv, 0)), spec.n_rf_i)};
            break;
        case SweepAxis::RfPerSubArray:
            p.n_rf = iv * spec.n_sub;
            p.gsac_configs = {std::vector<int>(static_cast<std::size_t>(spec.n_sub), iv)};
            break;
        case SweepAxis::Bits: p.bits = iv; break;
        }
        points.push_back(std::move(p));
    }
    return points;
}

// One curve: a scheme evaluated under one configuration.
struct Series {
    Scheme scheme;
    GsacConfig cfg;
};

std::vector<Series> build_series(const ExperimentSpec& spec, const SweepPoint& p) {
    std::vector<Series> out;
    for (Scheme s : spec.schemes) {
        switch (s) {
        case Scheme::GsacSic:
        case Scheme::GsacOpt:
        case Scheme::GsacCodebook:
            for (const auto& rf : p.gsac_configs)
                out.push_back({s, make_config(p.n_t, rf)});
            break;
        case Scheme::SacSic: out.push_back({s, sub_array_connected(p.n_t, p.n_rf)}); break;
        case Scheme::FcOmp: out.push_back({s, fully_connected(p.n_t, p.n_rf)}); break;
        case Scheme::GsacSicEqualRf: {
            if (spec.n_sub < 1 || p.n_rf % spec.n_sub != 0)
                throw ValidationError("gsac-sic-equal-rf: N_RF=" + std::to_string(p.n_rf) +
                                      " is not divisible by n_sub=" + std::to_string(spec.n_sub));
            const std::vector<int> rf(static_cast<std::size_t>(spec.n_sub), p.n_rf / spec.n_sub);
            out.push_back({s, make_config(p.n_t, rf)});
            break;
        }
        }
    }
    return out;
}

bool is_integral(double v) { return std::isfinite(v) && v == std::floor(v); }

} // namespace

void validate_experiment_spec(const ExperimentSpec& spec) {
    if (spec.values.empty())
        throw ValidationError("values: sweep axis has no points");
    if (spec.schemes.empty())
        throw ValidationError("schemes: no scheme selected");
    if (spec.trials < 1)
        throw ValidationError("trials: must be >= 1");
    if (spec.n_r < 1)
        throw ValidationError("n_r: must be >= 1");
    if (spec.axis == SweepAxis::SnrDb && spec.snr_linear.size() != spec.values.size())
        throw ValidationError("values: SNR sweep was not converted to linear scale");
    if (spec.axis != SweepAxis::SnrDb)
        for (double v : spec.values)
            if (!is_integral(v) || v < 1)
                throw ValidationError(std::string(to_string(spec.axis)) + " sweep values must be positive integers");
    if (spec.omp_grid_atoms < 1)
        throw ValidationError("omp_grid_atoms: must be >= 1");
    validate_power_model(spec.power);

    ChannelParams probe = spec.channel;
    probe.n_t = std::max(spec.n_t, 1);
    probe.n_r = spec.n_r;
    validate_channel_params(probe);

    const bool needs_configs = std::any_of(spec.schemes.begin(), spec.schemes.end(), [](Scheme s) {
        return s == Scheme::GsacSic || s == Scheme::GsacOpt || s == Scheme::GsacCodebook;
    });
    const bool derived = spec.axis == SweepAxis::NumSubArrays || spec.axis == SweepAxis::RfPerSubArray;
    if (needs_configs && !derived && spec.rf_configs.empty())
        throw ValidationError("rf_configs: required by the selected gsac-* schemes");
    if (derived && !spec.rf_configs.empty())
        throw ValidationError("rf_configs: not allowed when sweeping " + std::string(to_string(spec.axis)));

    for (const auto& p : resolve_points(spec)) {
        for (const auto& rf : p.gsac_configs) {
            const int sum = std::accumulate(rf.begin(), rf.end(), 0);
            if (sum != p.n_rf)
                throw ValidationError("rf_configs: " + format_partition(rf) + " does not sum to n_rf=" +
                                      std::to_string(p.n_rf));
        }
        if (std::find(spec.schemes.begin(), spec.schemes.end(), Scheme::GsacCodebook) != spec.schemes.end() &&
            (p.bits < kMinCodebookBits || p.bits > kMaxCodebookBits))
            throw ValidationError("bits: must lie in [1, 12]");
        build_series(spec, p); // throws on invalid configs or allocations
    }
}

ExperimentSpec parse_experiment_spec(std::istream& is) {
    ExperimentSpec spec;
    std::set<std::string, std::less<>> seen;
    std::string line;
    int line_no = 0;
    std::string spread_key_value;
    while (std::getline(is, line)) {
        ++line_no;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty())
            continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key(trim(view.substr(0, eq)));
        const std::string_view value = trim(view.substr(eq + 1));
        if (!seen.insert(key).second)
            throw ParseError("line " + std::to_string(line_no) + ": key '" + key + "' given twice");

        if (key == "experiment") {
            spec.id = std::string(value);
        } else if (key == "sweep") {
            spec.axis = parse_sweep_axis(value);
        } else if (key == "values") {
            spec.values.clear();
            for (auto tok : split_commas(value))
                spec.values.push_back(parse_number<double>(key, tok));
        } else if (key == "n_t") {
            spec.n_t = parse_number<int>(key, value);
        } else if (key == "n_r") {
            spec.n_r = parse_number<int>(key, value);
        } else if (key == "n_rf") {
            spec.n_rf = parse_number<int>(key, value);
        } else if (key == "snr_db") {
            spec.snr_db = parse_number<double>(key, value);
        } else if (key == "n_cl") {
            spec.channel.n_cl = parse_number<int>(key, value);
        } else if (key == "n_ray") {
            spec.channel.n_ray = parse_number<int>(key, value);
        } else if (key == "spread_deg") {
            spec.channel.spread = parse_number<double>(key, value) * kPi / 180.0;
        } else if (key == "gains") {
            if (value == "gaussian")
                spec.channel.gains = GainMode::Gaussian;
            else if (value == "unit")
                spec.channel.gains = GainMode::Unit;
            else if (value == "zero")
                spec.channel.gains = GainMode::Zero;
            else
                throw ParseError("gains: expected gaussian, unit or zero");
        } else if (key == "p_co") {
            spec.power.p_co = parse_number<double>(key, value);
        } else if (key == "p_rf") {
            spec.power.p_rf = parse_number<double>(key, value);
        } else if (key == "p_pa") {
            spec.power.p_pa = parse_number<double>(key, value);
        } else if (key == "p_ps") {
            spec.power.p_ps = parse_number<double>(key, value);
        } else if (key == "schemes") {
            for (auto tok : split_commas(value))
                spec.schemes.push_back(parse_scheme(tok));
        } else if (key == "rf_configs") {
            spec.rf_configs = parse_config_list(value);
        } else if (key == "bits") {
            spec.bits = parse_number<int>(key, value);
        } else if (key == "n_sub") {
            spec.n_sub = parse_number<int>(key, value);
        } else if (key == "n_rf_i") {
            spec.n_rf_i = parse_number<int>(key, value);
        } else if (key == "omp_dictionary") {
            if (value == "true-aod")
                spec.omp_dictionary = OmpDictionary::TrueAod;
            else if (value == "grid")
                spec.omp_dictionary = OmpDictionary::Grid;
            else
                throw ParseError("omp_dictionary: expected true-aod or grid");
        } else if (key == "omp_grid_atoms") {
            spec.omp_grid_atoms = parse_number<int>(key, value);
        } else if (key == "trials") {
            spec.trials = parse_number<int>(key, value);
        } else if (key == "seed") {
            spec.seed = parse_number<std::uint64_t>(key, value);
        } else {
            throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    for (const char* required : {"sweep", "values", "n_r", "schemes"})
        if (!seen.contains(std::string_view(required)))
            throw ParseError(std::string("missing required key '") + required + "'");
    if (spec.axis != SweepAxis::NumAntennas && !seen.contains(std::string_view("n_t")))
        throw ParseError("missing required key 'n_t'");
    const bool derived_rf = spec.axis == SweepAxis::NumSubArrays || spec.axis == SweepAxis::RfPerSubArray;
    if (!derived_rf && !seen.contains(std::string_view("n_rf")))
        throw ParseError("missing required key 'n_rf'");

    if (spec.axis == SweepAxis::SnrDb) {
        spec.snr_linear.clear();
        for (double db : spec.values)
            spec.snr_linear.push_back(db_to_linear(db));
    }
    validate_experiment_spec(spec);
    return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open experiment file '" + path + "'");
    return parse_experiment_spec(in);
}

ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned workers) {
    validate_experiment_spec(spec);
    ExperimentResult result;
    result.axis = spec.axis;

    for (const auto& point : resolve_points(spec)) {
        const std::vector<Series> series = build_series(spec, point);

        std::map<std::vector<int>, BeamsteeringCodebook> codebooks;
        for (const auto& s : series)
            if (s.scheme == Scheme::GsacCodebook && !codebooks.contains(s.cfg.rf_per_sub))
                codebooks.emplace(s.cfg.rf_per_sub, build_codebook(s.cfg, point.bits));

        const auto trials = static_cast<std::size_t>(spec.trials);
        std::vector<std::vector<TrialRecord>> slots(trials);

        parallel_for(trials, workers, [&](std::size_t k) {
            ChannelParams params = spec.channel;
            params.n_t = point.n_t;
            params.n_r = spec.n_r;
            params.seed = derive_seed(spec.seed, k);
            const ChannelMatrix h = generate_channel(params);
            const std::uint64_t hash = channel_hash(h.h);
            const LinkBudget link{point.snr, point.n_rf};

            auto& row = slots[k];
            for (const auto& s : series) {
                TrialRecord r;
                r.experiment = spec.id;
                r.scheme = to_string(s.scheme);
                r.cfg = format_partition(s.cfg.rf_per_sub);
                r.sweep_value = point.value;
                r.trial = static_cast<int>(k);
                r.seed = params.seed;
                r.channel_hash = hash;
                r.power = total_power(s.cfg, spec.power);
                try {
                    CMatrix f;
                    switch (s.scheme) {
                    case Scheme::GsacSic:
                    case Scheme::SacSic:
                    case Scheme::GsacSicEqualRf: f = design_sic_hybrid(h, s.cfg, point.snr).f; break;
                    case Scheme::GsacOpt: f = design_unconstrained(h, s.cfg, point.snr).f_opt; break;
                    case Scheme::GsacCodebook:
                        f = quantize_analog(design_unconstrained(h, s.cfg, point.snr),
                                            codebooks.at(s.cfg.rf_per_sub))
                                .f;
                        break;
                    case Scheme::FcOmp: {
                        const auto dict = spec.omp_dictionary == OmpDictionary::TrueAod
                                              ? true_aod_dictionary(h)
                                              : grid_dictionary(point.n_t, spec.omp_grid_atoms);
                        f = design_fc_omp(h, point.n_rf, point.snr, dict).f;
                        break;
                    }
                    }
                    r.rate = achievable_rate(h, f, link);
                    r.ee = energy_efficiency(r.rate, r.power);
                } catch (const Error& e) {
                    r.rate = std::nan("");
                    r.ee = std::nan("");
                    r.error = e.what();
                }
                row.push_back(std::move(r));
            }
        });

        // Emit in (scheme, cfg, trial) order for this sweep point.
        for (std::size_t s = 0; s < series.size(); ++s)
            for (std::size_t k = 0; k < trials; ++k)
                result.records.push_back(std::move(slots[k][s]));
    }
    result.aggregates = aggregate(result.records);
    return result;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records) {
    std::vector<AggregateRow> out;
    std::size_t i = 0;
    while (i < records.size()) {
        const TrialRecord& head = records[i];
        std::size_t j = i;
        while (j < records.size() && records[j].sweep_value == head.sweep_value && records[j].scheme == head.scheme &&
               records[j].cfg == head.cfg)
            ++j;

        AggregateRow row;
        row.experiment = head.experiment;
        row.scheme = head.scheme;
        row.cfg = head.cfg;
        row.sweep_value = head.sweep_value;
        row.power_w = head.power;
        double sum = 0.0;
        int n = 0;
        for (std::size_t k = i; k < j; ++k)
            if (records[k].error.empty()) {
                sum += records[k].rate;
                ++n;
            }
        row.trials = n;
        row.mean_rate = n > 0 ? sum / n : std::nan("");
        double ss = 0.0;
        for (std::size_t k = i; k < j; ++k)
            if (records[k].error.empty()) {
                const double d = records[k].rate - row.mean_rate;
                ss += d * d;
            }
        row.std_rate = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
        row.mean_ee = n > 0 ? row.mean_rate / row.power_w : std::nan("");
        out.push_back(std::move(row));
        i = j;
    }
    return out;
}

namespace {

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

} // namespace

void write_aggregate_csv(std::ostream& os, const ExperimentResult& result) {
    const auto old = os.precision(10);
    os << "experiment,scheme,cfg," << to_string(result.axis) << ",mean_rate,std_rate,power_w,mean_ee,trials\n";
    for (const auto& r : result.aggregates)
        os << r.experiment << ',' << r.scheme << ',' << csv_quote(r.cfg) << ',' << r.sweep_value << ','
           << r.mean_rate << ',' << r.std_rate << ',' << r.power_w << ',' << r.mean_ee << ',' << r.trials << '\n';
    os.precision(old);
}

void write_trials_csv(std::ostream& os, const ExperimentResult& result) {
    const auto old = os.precision(17);
    os << "experiment,scheme,cfg," << to_string(result.axis)
       << ",trial,seed,rate,power_w,ee,channel_hash,error\n";
    for (const auto& r : result.records) {
        os << r.experiment << ',' << r.scheme << ',' << csv_quote(r.cfg) << ',' << r.sweep_value << ',' << r.trial
           << ',' << r.seed << ',';
        if (r.error.empty())
            os << r.rate << ',' << r.power << ',' << r.ee;
        else
            os << ',' << r.power << ',';
        os << ',' << std::hex << r.channel_hash << std::dec << ',' << (r.error.empty() ? "" : csv_quote(r.error))
           << '\n';
    }
    os.precision(old);
}

} // namespace gsac
