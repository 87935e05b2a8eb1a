// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gsac/arch_config.hpp"
#include "gsac/channel.hpp"
#include "gsac/errors.hpp"
#include "gsac/metrics.hpp"
#include "gsac/precoder.hpp"
#include "oracles.hpp"

using namespace gsac;

namespace {

ChannelMatrix channel(int n_t, int n_r, std::uint64_t seed) {
    ChannelParams p;
    p.n_t = n_t;
    p.n_r = n_r;
    p.seed = seed;
    return generate_channel(p);
}

CMatrix projector(const CMatrix& v) {
    return v * (v.adjoint() * v).inverse() * v.adjoint();
}

double max_off_block(const CMatrix& f, const GsacConfig& cfg) {
    const auto ro = cfg.antenna_offsets();
    const auto co = cfg.rf_offsets();
    double worst = 0.0;
    for (int r = 0; r < f.rows(); ++r)
        for (int c = 0; c < f.cols(); ++c) {
            bool inside = false;
            for (int i = 0; i < cfg.n_sub(); ++i) {
                const auto ii = static_cast<std::size_t>(i);
                if (r >= ro[ii] && r < ro[ii] + cfg.ant_per_sub[ii] && c >= co[ii] && c < co[ii] + cfg.rf_per_sub[ii])
                    inside = true;
            }
            if (!inside)
                worst = std::max(worst, std::abs(f(r, c)));
        }
    return worst;
}

} // namespace

TEST_CASE("top eigenvectors: eigen equation, order and phase convention") {
    oracle::Rng rng(21);
    for (int iter = 0; iter < 30; ++iter) {
        const CMatrix p = oracle::random_hermitian_psd(7, rng);
        const EigenPairs e = hermitian_top_eigvecs(p, 3);
        CHECK((e.vectors.adjoint() * e.vectors - CMatrix::Identity(3, 3)).norm() < 1e-12);
        for (int j = 0; j < 3; ++j) {
            CHECK((p * e.vectors.col(j) - e.values(j) * e.vectors.col(j)).norm() < 1e-10 * p.norm());
            if (j)
                CHECK(e.values(j) <= e.values(j - 1));
            Eigen::Index lead = 0;
            e.vectors.col(j).cwiseAbs().maxCoeff(&lead);
            CHECK(e.vectors(lead, j).real() >= 0.0);
            CHECK(std::abs(e.vectors(lead, j).imag()) < 1e-14);
        }
        CHECK((projector(e.vectors) - projector(oracle::top_eigvecs(p, 3))).norm() < 1e-9);
    }
}

TEST_CASE("top eigenvectors are a deterministic function of the input") {
    oracle::Rng rng(4);
    const CMatrix p = oracle::random_hermitian_psd(5, rng);
    const EigenPairs a = hermitian_top_eigvecs(p, 2);
    const EigenPairs b = hermitian_top_eigvecs(p, 2);
    CHECK(a.vectors == b.vectors);
}

TEST_CASE("equal eigenvalues are ordered by their lead index") {
    RVector d(4);
    d << 1.0, 3.0, 3.0, 0.5;
    const CMatrix p = d.cast<Complex>().asDiagonal();
    const EigenPairs e = hermitian_top_eigvecs(p, 2);
    CHECK(std::abs(e.vectors(1, 0) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(e.vectors(2, 1) - Complex(1.0, 0.0)) < 1e-12);
    CHECK_THROWS_AS(hermitian_top_eigvecs(p, 5), OutOfRange);
}

TEST_CASE("unconstrained blocks follow a step-by-step inverse recursion") {
    oracle::Rng rng(9);
    const ChannelMatrix ch = channel(16, 6, 77);
    const GsacConfig cfg = make_config(16, std::vector<int>{2, 1, 1});
    const double snr = 3.0;
    const UnconstrainedPrecoder u = design_unconstrained(ch, cfg, snr);
    REQUIRE(u.per_block.size() == 3);

    CMatrix c = CMatrix::Identity(6, 6);
    const auto off = cfg.antenna_offsets();
    for (int i = 0; i < 3; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        const CMatrix h_i = ch.h.middleCols(off[ii], cfg.ant_per_sub[ii]);
        const CMatrix p = h_i.adjoint() * c.inverse() * h_i;
        const CMatrix ref = oracle::top_eigvecs(p, cfg.rf_per_sub[ii]);
        CHECK((projector(u.per_block[ii]) - projector(ref)).norm() < 1e-9);
        c += snr / cfg.n_rf_total * h_i * u.per_block[ii] * u.per_block[ii].adjoint() * h_i.adjoint();
    }
    CHECK(max_off_block(u.f_opt, cfg) == 0.0);
}

TEST_CASE("fully connected unconstrained design reaches the eigenmode rate") {
    const ChannelMatrix ch = channel(12, 8, 5);
    const double snr = 2.0;
    const int n_rf = 3;
    const UnconstrainedPrecoder u = design_unconstrained(ch, fully_connected(12, n_rf), snr);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(ch.h.adjoint() * ch.h);
    double expected = 0.0;
    for (int j = 0; j < n_rf; ++j)
        expected += std::log2(1.0 + snr / n_rf * es.eigenvalues()(11 - j));
    CHECK(achievable_rate(ch, u.f_opt, {snr, n_rf}) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("per-sub-array terms sum to the total rate") {
    oracle::Rng rng(31);
    for (int iter = 0; iter < 20; ++iter) {
        const ChannelMatrix ch = channel(24, 8, 100 + static_cast<std::uint64_t>(iter));
        const GsacConfig cfg = make_config(24, std::vector<int>{3, 2, 1});
        std::vector<CMatrix> blocks;
        for (int i = 0; i < cfg.n_sub(); ++i) {
            const auto ii = static_cast<std::size_t>(i);
            blocks.push_back(oracle::random_complex(cfg.ant_per_sub[ii], cfg.rf_per_sub[ii], rng));
        }
        const double snr = 0.5 + iter;
        double sum = 0.0;
        for (double r : sic_sub_rates(ch.h, cfg, blocks, snr))
            sum += r;
        const double total = achievable_rate(ch.h, block_diagonal(blocks), {snr, cfg.n_rf_total});
        CHECK(std::abs(sum - total) < 1e-9 * std::max(1.0, total));
    }
}

TEST_CASE("vector phase extraction") {
    CVector v(3);
    v << Complex(0.6, 0.0), Complex(0.0, -0.48), Complex(0.0, 0.0);
    v /= v.norm();
    const PhaseExtractedVector pe = phase_extract_vector(v, 3);
    for (int k = 0; k < 3; ++k)
        CHECK(std::abs(pe.a(k)) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(std::abs(pe.a(2) - Complex(1.0 / std::sqrt(3.0), 0.0)) < 1e-15);
    CHECK(std::arg(pe.a(1)) == doctest::Approx(-kPi / 2));
    CHECK(pe.d == doctest::Approx(v.cwiseAbs().sum() / std::sqrt(3.0)).epsilon(1e-14));
    CHECK((pe.f - pe.a * pe.d).norm() < 1e-15);
    CHECK_THROWS_AS(phase_extract_vector(v, 4), DimensionMismatch);

    CVector one(1);
    one << std::polar(1.0, 0.7);
    const auto single = phase_extract_vector(one, 1);
    CHECK((single.f - one).norm() < 1e-15);
}

TEST_CASE("vector phase extraction beats a 16-point phase grid") {
    oracle::Rng rng(12);
    for (int n = 1; n <= 3; ++n)
        for (int iter = 0; iter < 10; ++iter) {
            const CVector v = oracle::random_unit_vector(n, rng);
            const auto pe = phase_extract_vector(v, n);
            const auto grid = oracle::phase_grid_search(v, 16);
            CHECK((v - pe.f).squaredNorm() <= grid.min_distance + 1e-12);
            CHECK(std::norm(v.dot(pe.f)) >= grid.max_objective - 1e-12);
        }
}

TEST_CASE("matrix phase extraction projects onto the analog span") {
    oracle::Rng rng(13);
    for (int iter = 0; iter < 20; ++iter) {
        const CMatrix v = oracle::random_orthonormal(8, 3, rng);
        const PhaseExtractedBlock pe = phase_extract_matrix(v);
        CHECK((pe.f_rf - oracle::phase_only(v)).norm() < 1e-14);
        const CMatrix proj = projector(pe.f_rf) * v;
        CHECK((pe.f_rf * pe.f_bb - proj).norm() < 1e-10);
        CHECK((pe.f_rf * pe.f_bb).squaredNorm() <= 3.0 + 1e-9);
    }
    CMatrix dup(4, 2);
    dup.col(0) = CVector::Constant(4, Complex(0.5, 0.0));
    dup.col(1) = dup.col(0);
    CHECK_THROWS_AS(phase_extract_matrix(dup), RankDeficientAnalog);
}

TEST_CASE("SIC hybrid precoder structure") {
    for (const auto& parts : {std::vector<int>{2, 2}, std::vector<int>{3, 1}, std::vector<int>{1, 1, 1, 1},
                              std::vector<int>{4}}) {
        const ChannelMatrix ch = channel(16, 8, 555);
        const GsacConfig cfg = make_config(16, parts);
        const HybridPrecoder hp = design_sic_hybrid(ch, cfg, 1.0);
        CHECK(hp.f_rf.rows() == 16);
        CHECK(hp.f_rf.cols() == 4);
        CHECK(hp.n_s() == 4);
        CHECK((hp.f - hp.f_rf * hp.f_bb).norm() < 1e-14);
        CHECK(max_off_block(hp.f_rf, cfg) == 0.0);
        CHECK(max_off_block(hp.f, cfg) == 0.0);
        const auto ro = cfg.antenna_offsets();
        const auto co = cfg.rf_offsets();
        for (int i = 0; i < cfg.n_sub(); ++i) {
            const auto ii = static_cast<std::size_t>(i);
            const CMatrix blk = hp.f_rf.block(ro[ii], co[ii], cfg.ant_per_sub[ii], cfg.rf_per_sub[ii]);
            const double amp = 1.0 / std::sqrt(static_cast<double>(cfg.ant_per_sub[ii]));
            CHECK((blk.cwiseAbs().array() - amp).abs().maxCoeff() < 1e-12);
        }
        CHECK(hp.f.squaredNorm() <= 4.0 + 1e-9);
        const double r = achievable_rate(ch, hp.f, {1.0, 4});
        const double r_opt = achievable_rate(ch, design_unconstrained(ch, cfg, 1.0).f_opt, {1.0, 4});
        CHECK(r > 0.0);
        CHECK(r <= r_opt * 1.05 + 1e-9);
    }
}

TEST_CASE("SIC hybrid is deterministic and rejects mismatched channels") {
    const ChannelMatrix ch = channel(16, 4, 8);
    const GsacConfig cfg = make_config(16, std::vector<int>{2, 2});
    CHECK(design_sic_hybrid(ch, cfg, 1.0).f == design_sic_hybrid(ch, cfg, 1.0).f);
    CHECK_THROWS_AS(design_sic_hybrid(channel(12, 4, 8), cfg, 1.0), DimensionMismatch);
}

TEST_CASE("SIC on a zero channel gives a finite precoder and zero rate") {
    ChannelParams p;
    p.n_t = 8;
    p.n_r = 4;
    p.gains = GainMode::Zero;
    const ChannelMatrix ch = generate_channel(p);
    const GsacConfig cfg = make_config(8, std::vector<int>{1, 1});
    const HybridPrecoder hp = design_sic_hybrid(ch, cfg, 1.0);
    CHECK(hp.f.allFinite());
    CHECK(achievable_rate(ch, hp.f, {1.0, 2}) == 0.0);
}

TEST_CASE("OMP on a single-path channel picks the path and reaches the eigenmode rate") {
    ChannelParams p;
    p.n_t = 32;
    p.n_r = 8;
    p.n_cl = 1;
    p.n_ray = 1;
    p.seed = 3;
    const ChannelMatrix ch = generate_channel(p);
    const auto dict = true_aod_dictionary(ch);
    const OmpResult r = design_fc_omp_detailed(ch, 1, 1.0, dict);
    CHECK(r.selected == std::vector<int>{0});
    const double gain = ch.h.squaredNorm();
    CHECK(achievable_rate(ch, r.precoder.f, {1.0, 1}) == doctest::Approx(std::log2(1.0 + gain)).epsilon(1e-10));
    CHECK(r.precoder.f.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("OMP on an on-grid two-path channel matches an exhaustive pair search") {
    const int n_t = 32;
    const int n_r = 8;
    const auto grid = grid_dictionary(n_t, 64);
    oracle::Rng rng(44);
    for (int iter = 0; iter < 10; ++iter) {
        std::uniform_int_distribution<int> pick(0, 63);
        int k1 = pick(rng);
        int k2 = pick(rng);
        while (std::abs(std::sin(-kPi / 2 + kPi * k1 / 64) - std::sin(-kPi / 2 + kPi * k2 / 64)) < 0.5)
            k2 = pick(rng);
        const CVector ar1 = oracle::random_unit_vector(n_r, rng);
        const CVector ar2 = oracle::random_unit_vector(n_r, rng);
        const CMatrix h = 3.0 * ar1 * grid[static_cast<std::size_t>(k1)].adjoint() +
                          1.5 * ar2 * grid[static_cast<std::size_t>(k2)].adjoint();
        const ChannelMatrix ch = channel_from_matrix(h);
        const OmpResult r = design_fc_omp_detailed(ch, 2, 1.0, grid);

        const CMatrix f_opt = oracle::top_eigvecs(h.adjoint() * h, 2);
        double best = -1.0;
        std::pair<int, int> arg{-1, -1};
        for (int a = 0; a < 64; ++a)
            for (int b = a + 1; b < 64; ++b) {
                CMatrix frf(n_t, 2);
                frf << grid[static_cast<std::size_t>(a)], grid[static_cast<std::size_t>(b)];
                const CMatrix fbb = (frf.adjoint() * frf).inverse() * frf.adjoint() * f_opt;
                const double fit = (frf * fbb).squaredNorm();
                if (fit > best) {
                    best = fit;
                    arg = {a, b};
                }
            }
        std::vector<int> sel = r.selected;
        std::sort(sel.begin(), sel.end());
        CHECK(sel == std::vector<int>{arg.first, arg.second});
        CHECK(r.precoder.f.squaredNorm() == doctest::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("OMP dictionary errors") {
    const ChannelMatrix ch = channel(8, 4, 1);
    const auto tiny = grid_dictionary(8, 2);
    CHECK_THROWS_AS(design_fc_omp(ch, 3, 1.0, tiny), DictionaryTooSmall);
    const auto wrong = grid_dictionary(6, 8);
    CHECK_THROWS_AS(design_fc_omp(ch, 2, 1.0, wrong), DimensionMismatch);
}

TEST_CASE("OMP never selects an atom twice") {
    const ChannelMatrix ch = channel(16, 4, 2);
    const auto dict = grid_dictionary(16, 8);
    const OmpResult r = design_fc_omp_detailed(ch, 8, 1.0, dict);
    std::vector<int> sel = r.selected;
    std::sort(sel.begin(), sel.end());
    CHECK(std::adjacent_find(sel.begin(), sel.end()) == sel.end());
}

TEST_CASE("precoder CSV round trip") {
    const ChannelMatrix ch = channel(12, 4, 6);
    const GsacConfig cfg = make_config(12, std::vector<int>{2, 1});
    const HybridPrecoder hp = design_sic_hybrid(ch, cfg, 1.0);
    std::stringstream ss;
    write_precoder_csv(ss, hp, "gsac-sic");
    const PrecoderFile pf = read_precoder_csv(ss);
    CHECK(pf.rf_per_sub == cfg.rf_per_sub);
    CHECK(pf.ant_per_sub == cfg.ant_per_sub);
    CHECK(pf.scheme == "gsac-sic");
    CHECK(pf.f_rf == hp.f_rf);
    CHECK(pf.f_bb == hp.f_bb);
}
