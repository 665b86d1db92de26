#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "huffcomm/errors.hpp"
#include "huffcomm/harness.hpp"
#include "test_support.hpp"

using namespace huffcomm;
using namespace testsupport;

namespace {

double grid_mse(const ComplexSequence& truth, const ComplexSequence& est, int points) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
        const cplx rot = std::polar(1.0, -2.0 * std::numbers::pi * i / points);
        double s = 0.0;
        for (std::size_t k = 0; k < truth.size(); ++k) s += std::norm(rot * est[k] - truth[k]);
        best = std::min(best, s / static_cast<double>(truth.size()));
    }
    return best;
}

TrialConfig noiseless_config(std::size_t L, std::size_t K, std::uint64_t seed) {
    TrialConfig cfg;
    cfg.frame = FrameConfig::make(L, K);
    cfg.energy = 2.5;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("mse_phase_aligned examples") {
    std::mt19937_64 rng(601);
    const auto x = random_sequence(rng, 8);
    for (double th : {0.0, 0.4, 2.0, -3.0}) CHECK(mse_phase_aligned(x, x.scaled(std::polar(1.0, th))) < 1e-28);
    CHECK(mse_phase_aligned(x, x.scaled(0.0)) == doctest::Approx(x.energy() / 8.0).epsilon(1e-14));
    CHECK_THROWS_AS(mse_phase_aligned(x, ComplexSequence{1.0}), DimensionError);

    for (int t = 0; t < 20; ++t) {
        const auto truth = random_sequence(rng, 6);
        std::vector<cplx> e = truth.vector();
        e[0] += cplx{0.3, -0.2};
        const ComplexSequence est = ComplexSequence(e).scaled(std::polar(1.0, 1.3));
        const double exact = mse_phase_aligned(truth, est);
        const double grid = grid_mse(truth, est, 10000);
        CHECK(exact <= grid + 1e-14);
        CHECK(grid - exact <= 1e-6 * truth.energy());
        CHECK(exact <= 0.13 / 6.0 + 1e-14);
    }
}

TEST_CASE("noiseless trials are exact") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        CAPTURE(s);
        const auto res = run_trial(noiseless_config(16, 4, derive_seed(61, s)));
        REQUIRE_FALSE(res.failed);
        CHECK(res.solve.converged);
        CHECK(res.bit_errors == 0);
        CHECK(res.bits_total == 15);
        CHECK(res.sent == res.decoded);
        CHECK(res.mse_data < 1e-8);
        CHECK(res.mse_channel < 1e-8);
        CHECK(std::abs(res.energy_rel_err) < 1e-10);
        REQUIRE(res.coprimality_margin.has_value());
        CHECK(*res.coprimality_margin > 0.0);
    }
}

TEST_CASE("trials are deterministic") {
    TrialConfig cfg = noiseless_config(16, 4, 99);
    cfg.rsnr_db = 15.0;
    const auto a = run_trial(cfg);
    const auto b = run_trial(cfg);
    CHECK(a == b);
    cfg.seed = 100;
    CHECK_FALSE(run_trial(cfg) == a);
}

TEST_CASE("fixed message and channel") {
    TrialConfig cfg = noiseless_config(8, 2, 1);
    cfg.bits = BitMessage::from_string("1110001");
    cfg.channel = ChannelTaps(ComplexSequence{0.8, cplx{0.1, 0.5}});
    const auto res = run_trial(cfg);
    CHECK(res.sent == *cfg.bits);
    CHECK(res.decoded == *cfg.bits);
    cfg.channel = ChannelTaps(ComplexSequence{1.0, 0.1, 0.2});
    CHECK_THROWS_AS(run_trial(cfg), DimensionError);
}

TEST_CASE("failed trials count every bit") {
    TrialConfig cfg = noiseless_config(16, 4, 5);
    cfg.rsnr_db = 10.0;
    cfg.solver.max_iters = 1;
    const auto res = run_trial(cfg);
    CHECK(res.failed);
    CHECK(res.failed_stage == TrialStage::solve);
    CHECK(res.bit_errors == res.bits_total);
    CHECK(std::string(to_string(res.failed_stage)) == "solve");
}

TEST_CASE("known energy skips the estimate") {
    TrialConfig cfg = noiseless_config(16, 4, 8);
    cfg.rsnr_db = 12.0;
    cfg.known_energy = true;
    const auto res = run_trial(cfg);
    CHECK(res.energy_estimate != cfg.energy);

    const auto x = encode(make_params(16, 2.5), BitMessage::all(15, true));
    const auto r = add_awgn(transmit(x, random_channel(4, 3)), 12.0, 4);
    CHECK(recover_frame(r, cfg.frame, 2.5).E_hat == 2.5);
    CHECK(recover_frame(r, cfg.frame).E_hat != 2.5);
}

TEST_CASE("recover_frame on a clean frame") {
    const auto cfg = FrameConfig::make(8, 3);
    const auto msg = BitMessage::from_string("0100111");
    const auto h = random_channel(3, 12);
    const auto rec = recover_frame(transmit(encode(make_params(8, 2.5), msg), h), cfg);
    CHECK(rec.bits == msg);
    CHECK(rec.E_hat == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(mse_phase_aligned(h.taps(), rec.h_hat) < 1e-8);
}

TEST_CASE("aggregate bookkeeping") {
    TrialConfig point;
    point.rsnr_db = 20.0;
    std::vector<TrialResult> results(3);
    for (auto& r : results) r.bits_total = 7;
    results[0].bit_errors = 1;
    results[0].mse_data = 0.2;
    results[0].energy_rel_err = 0.1;
    results[1].bit_errors = 0;
    results[1].mse_data = 0.4;
    results[1].energy_rel_err = -0.3;
    results[2].failed = true;
    results[2].bit_errors = 7;
    results[2].mse_data = 100.0;
    const auto row = aggregate(point, results);
    CHECK(row.trials == 3);
    CHECK(row.fail_count == 1);
    CHECK(row.bit_errors == 8);
    CHECK(row.bits_total == 21);
    CHECK(row.ber == doctest::Approx(8.0 / 21.0));
    CHECK(row.mse_data == doctest::Approx(0.3));
    CHECK(row.energy_rel_rmse == doctest::Approx(std::sqrt(0.05)));
}

TEST_CASE("noiseless sweep has no errors") {
    TrialConfig point = noiseless_config(8, 2, 0);
    SweepOptions opts;
    opts.trials_per_point = 8;
    opts.master_seed = 3;
    int called = 0;
    opts.on_point = [&](const SweepRow&) { ++called; };
    const auto rows = run_sweep({point}, opts);
    REQUIRE(rows.size() == 1);
    CHECK(called == 1);
    CHECK(rows[0].ber == 0.0);
    CHECK(rows[0].fail_count == 0);

    opts.trials_per_point = 0;
    CHECK_THROWS_AS(run_sweep({point}, opts), DomainError);
}

TEST_CASE("sweeps do not depend on the thread count") {
    TrialConfig a = noiseless_config(8, 2, 0);
    a.rsnr_db = 10.0;
    TrialConfig b = a;
    b.rsnr_db = 20.0;
    SweepOptions opts;
    opts.trials_per_point = 6;
    opts.master_seed = 17;
    const auto one = run_sweep({a, b}, opts);
    opts.threads = 3;
    const auto three = run_sweep({a, b}, opts);
    std::ostringstream s1, s3;
    write_results_csv(s1, one, {});
    write_results_csv(s3, three, {});
    CHECK(s1.str() == s3.str());
}

TEST_CASE("parse_snr_grid") {
    CHECK(parse_snr_grid("5:5:40") == std::vector<double>{5, 10, 15, 20, 25, 30, 35, 40});
    CHECK(parse_snr_grid("0:0.5:1") == std::vector<double>{0, 0.5, 1});
    const auto g = parse_snr_grid("18.5,29,inf");
    REQUIRE(g.size() == 3);
    CHECK(g[0] == 18.5);
    CHECK(std::isinf(g[2]));
    CHECK(std::isinf(parse_snr_grid("noiseless")[0]));
    CHECK_THROWS_AS(parse_snr_grid("5:0:10"), DomainError);
    CHECK_THROWS_AS(parse_snr_grid("1:2"), DomainError);
    CHECK_THROWS_AS(parse_snr_grid("10dB"), DomainError);
    CHECK_THROWS_AS(parse_snr_grid(""), DomainError);
}

TEST_CASE("results csv layout") {
    SweepRow row;
    row.rsnr_db = 18.5;
    row.trials = 500;
    row.fail_count = 2;
    row.ber = 0.125;
    CsvMetadata meta{7, 32, 8, 2.1, true, 500};
    std::ostringstream os;
    write_results_csv(os, {row}, meta);
    std::istringstream is(os.str());
    std::string line;
    std::vector<std::string> data;
    bool seen_seed = false;
    while (std::getline(is, line)) {
        if (line.starts_with("#")) {
            seen_seed = seen_seed || line.find("seed=7") != std::string::npos;
            continue;
        }
        data.push_back(line);
    }
    CHECK(seen_seed);
    REQUIRE(data.size() == 2);
    CHECK(data[0] == "rsnr_db,trials,fail_count,mse_data,mse_channel,ber,energy_rel_rmse,mean_iters,mean_rank1_gap");
    CHECK(data[1].starts_with("18.5,500,2,"));
}

TEST_CASE("sequence csv round trip") {
    std::mt19937_64 rng(602);
    const auto s = random_sequence(rng, 12);
    std::stringstream ss;
    ss << "# frame\n";
    write_sequence_csv(ss, s);
    ss << "\n";
    CHECK(read_sequence_csv(ss) == s);

    std::istringstream bad("1.0,2.0\nfoo,1\n");
    CHECK_THROWS_AS(read_sequence_csv(bad), DomainError);
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(read_sequence_csv(empty), DimensionError);
}
