// SPDX-License-Identifier: Apache-2.0
#include "gsac/channel.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "gsac/errors.hpp"
#include "gsac/rng.hpp"

namespace gsac {

void validate_channel_params(const ChannelParams& params) {
    if (params.n_t < 1 || params.n_r < 1)
        throw ValidationError("channel needs n_t >= 1 and n_r >= 1");
    if (params.n_cl < 1 || params.n_ray < 1)
        throw ValidationError("channel needs n_cl >= 1 and n_ray >= 1");
    if (!(params.spread > 0.0) || !std::isfinite(params.spread))
        throw ValidationError("angular spread must be positive and finite");
}

CVector ula_response(int n, double theta) {
    CVector a(n);
    const double s = std::sin(theta);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k)
        a(k) = std::polar(scale, kPi * k * s);
    return a;
}

double wrap_angle(double theta) noexcept {
    constexpr double two_pi = 2.0 * kPi;
    double w = std::fmod(theta, two_pi);
    if (w <= 0.0)
        w += two_pi;
    return w;
}

namespace {

// Uniform on (0, 2 pi].
double uniform_angle(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return 2.0 * kPi * (1.0 - u(rng));
}

// Zero-mean Laplace with the given scale, by inverse CDF.
double laplace(Rng& rng, double scale) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const double x = u(rng);
    const double mag = -scale * std::log1p(-2.0 * std::abs(x));
    return x < 0.0 ? -mag : mag;
}

} // namespace

ChannelMatrix generate_channel(const ChannelParams& params) {
    validate_channel_params(params);
    Rng rng(splitmix64(params.seed));
    std::normal_distribution<double> normal(0.0, 1.0);
    const double laplace_scale = params.spread / std::sqrt(2.0);

    const int paths = params.n_cl * params.n_ray;
    ChannelMatrix ch;
    ch.params = params;
    ch.path_gains.reserve(static_cast<std::size_t>(paths));
    ch.aod.reserve(static_cast<std::size_t>(paths));
    ch.aoa.reserve(static_cast<std::size_t>(paths));

    for (int m = 0; m < params.n_cl; ++m) {
        const double mean_aod = uniform_angle(rng);
        const double mean_aoa = uniform_angle(rng);
        for (int n = 0; n < params.n_ray; ++n) {
            ch.aod.push_back(wrap_angle(mean_aod + laplace(rng, laplace_scale)));
            ch.aoa.push_back(wrap_angle(mean_aoa + laplace(rng, laplace_scale)));
            const double re = normal(rng);
            const double im = normal(rng);
            switch (params.gains) {
            case GainMode::Gaussian: ch.path_gains.emplace_back(re / std::sqrt(2.0), im / std::sqrt(2.0)); break;
            case GainMode::Unit: ch.path_gains.emplace_back(1.0, 0.0); break;
            case GainMode::Zero: ch.path_gains.emplace_back(0.0, 0.0); break;
            }
        }
    }

    // H = scale * A_r diag(alpha) A_t^H
    CMatrix a_r(params.n_r, paths);
    CMatrix a_t(params.n_t, paths);
    for (int p = 0; p < paths; ++p) {
        a_r.col(p) = ula_response(params.n_r, ch.aoa[static_cast<std::size_t>(p)]) *
                     ch.path_gains[static_cast<std::size_t>(p)];
        a_t.col(p) = ula_response(params.n_t, ch.aod[static_cast<std::size_t>(p)]);
    }
    const double scale = std::sqrt(static_cast<double>(params.n_t) * params.n_r / paths);
    ch.h = scale * (a_r * a_t.adjoint());
    return ch;
}

ChannelMatrix channel_from_matrix(CMatrix h) {
    ChannelMatrix ch;
    ch.params.n_r = static_cast<int>(h.rows());
    ch.params.n_t = static_cast<int>(h.cols());
    ch.h = std::move(h);
    return ch;
}

std::uint64_t channel_hash(const CMatrix& h) noexcept {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    auto mix = [&](std::uint64_t word) {
        for (int b = 0; b < 8; ++b) {
            hash ^= (word >> (8 * b)) & 0xffULL;
            hash *= 0x100000001b3ULL;
        }
    };
    mix(static_cast<std::uint64_t>(h.rows()));
    mix(static_cast<std::uint64_t>(h.cols()));
    for (Eigen::Index j = 0; j < h.cols(); ++j)
        for (Eigen::Index i = 0; i < h.rows(); ++i) {
            mix(std::bit_cast<std::uint64_t>(h(i, j).real()));
            mix(std::bit_cast<std::uint64_t>(h(i, j).imag()));
        }
    return hash;
}

void write_matrix_csv(std::ostream& os, const CMatrix& m) {
    const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j)
                os << ',';
            os << m(i, j).real() << ',' << m(i, j).imag();
        }
        os << '\n';
    }
    os.precision(old_precision);
}

void write_channel_csv(std::ostream& os, const CMatrix& h) {
    os << "# nr=" << h.rows() << " nt=" << h.cols() << '\n';
    write_matrix_csv(os, h);
}

namespace {

double parse_double(std::string_view token, int line) {
    while (!token.empty() && token.front() == ' ')
        token.remove_prefix(1);
    while (!token.empty() && (token.back() == ' ' || token.back() == '\r'))
        token.remove_suffix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError("line " + std::to_string(line) + ": '" + std::string(token) + "' is not a number");
    return value;
}

int header_field(const std::string& header, const std::string& key) {
    const auto pos = header.find(key + "=");
    if (pos == std::string::npos)
        throw ParseError("channel header lacks '" + key + "='");
    int value = 0;
    const char* begin = header.data() + pos + key.size() + 1;
    const auto [ptr, ec] = std::from_chars(begin, header.data() + header.size(), value);
    if (ec != std::errc{} || ptr == begin || value < 1)
        throw ParseError("channel header field '" + key + "' is not a positive integer");
    return value;
}

} // namespace

CMatrix read_matrix_rows(std::istream& is, int rows, int cols) {
    CMatrix m(rows, cols);
    std::string line;
    for (int i = 0; i < rows; ++i) {
        if (!std::getline(is, line))
            throw ParseError("expected " + std::to_string(rows) + " data rows, got " + std::to_string(i));
        std::string_view rest(line);
        std::vector<double> values;
        values.reserve(static_cast<std::size_t>(2 * cols));
        while (true) {
            const auto comma = rest.find(',');
            values.push_back(parse_double(rest.substr(0, comma), i + 1));
            if (comma == std::string_view::npos)
                break;
            rest.remove_prefix(comma + 1);
        }
        if (values.size() != static_cast<std::size_t>(2 * cols))
            throw ParseError("row " + std::to_string(i + 1) + " has " + std::to_string(values.size()) +
                             " numbers, expected " + std::to_string(2 * cols));
        for (int j = 0; j < cols; ++j)
            m(i, j) = Complex(values[static_cast<std::size_t>(2 * j)], values[static_cast<std::size_t>(2 * j + 1)]);
    }
    return m;
}

CMatrix read_channel_csv(std::istream& is) {
    std::string header;
    while (std::getline(is, header)) {
        if (!header.empty() && header != "\r")
            break;
    }
    if (header.rfind("#", 0) != 0)
        throw ParseError("channel file must start with '# nr=<..> nt=<..>'");
    const int n_r = header_field(header, "nr");
    const int n_t = header_field(header, "nt");
    return read_matrix_rows(is, n_r, n_t);
}

} // namespace gsac
