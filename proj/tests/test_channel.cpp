#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "huffcomm/channel.hpp"
#include "huffcomm/errors.hpp"
#include "huffcomm/huffman.hpp"
#include "test_support.hpp"

using namespace huffcomm;
using namespace testsupport;

TEST_CASE("FrameConfig") {
    const auto cfg = FrameConfig::make(32, 8);
    CHECK(cfg.M == 16);
    CHECK(cfg.N == 40);
    CHECK(cfg.frame_length() == 39);
    CHECK(FrameConfig::make(4, 2).M == 0);
    CHECK_THROWS_AS(FrameConfig::make(6, 4), ConfigError);
    CHECK_THROWS_AS(FrameConfig::make(7, 2), ConfigError);
    CHECK_THROWS_AS(FrameConfig::make(8, 0), ConfigError);
}

TEST_CASE("ChannelTaps needs nonzero edges") {
    CHECK_NOTHROW(ChannelTaps(ComplexSequence{1.0, 0.0, 0.5}));
    CHECK_THROWS_AS(ChannelTaps(ComplexSequence{1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(ChannelTaps(ComplexSequence{0.0, 1.0}), DomainError);
}

TEST_CASE("derive_seed spreads indices") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(derive_seed(7, i));
    CHECK(seen.size() == 10000);
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
    CHECK(derive_seed(7, 3) != derive_seed(8, 3));
}

TEST_CASE("random_channel") {
    const auto one = random_channel(1, 5);
    REQUIRE(one.size() == 1);
    CHECK(std::abs(one[0]) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK(random_channel(8, 42).taps() == random_channel(8, 42).taps());
    CHECK_FALSE(random_channel(8, 42).taps() == random_channel(8, 43).taps());

    for (std::uint64_t s = 0; s < 1000; ++s) {
        const auto h = random_channel(8, derive_seed(99, s));
        double peak = 0.0;
        for (const cplx& t : h.taps()) peak = std::max(peak, std::abs(t));
        CHECK(std::abs(h[0]) >= kDefaultEdgeFloor * peak);
        CHECK(std::abs(h[7]) >= kDefaultEdgeFloor * peak);
        CHECK(std::abs(std::sqrt(h.taps().energy()) - 1.0) <= 1e-12);
    }
    CHECK_THROWS_AS(random_channel(4, 1, 0.0), DomainError);
    CHECK_THROWS_AS(random_channel(4, 1, 1.0), DomainError);
}

TEST_CASE("transmit") {
    std::mt19937_64 rng(301);
    const auto x = random_sequence(rng, 6);
    CHECK(transmit(x, ChannelTaps(ComplexSequence::impulse())) == x);

    const ChannelTaps h(ComplexSequence{0.3, -0.2, 0.7});
    const auto y = transmit(ComplexSequence::impulse(4), h);
    CHECK(max_diff(y.vector(), {0.3, -0.2, 0.7, 0.0, 0.0, 0.0}) == 0.0);

    for (int t = 0; t < 100; ++t) {
        const auto u = random_sequence(rng, 8);
        const auto g = random_channel(3, rng());
        double l1 = 0.0;
        double hmax = 0.0;
        for (const cplx& c : u) l1 += std::abs(c);
        for (const cplx& c : g.taps()) hmax = std::max(hmax, std::abs(c));
        CHECK(std::sqrt(transmit(u, g).energy()) <= l1 * hmax + 1e-12);
        const cplx a = gauss(rng);
        CHECK(max_diff(transmit(u.scaled(a), g).vector(), transmit(u, g).scaled(a).vector()) < 1e-12);
    }
}

TEST_CASE("add_awgn noiseless and input checks") {
    const ComplexSequence y{1.0, 2.0, -1.0};
    CHECK(add_awgn(y, kNoiseless, 1) == y);
    CHECK(add_awgn(y, 10.0, 9) == add_awgn(y, 10.0, 9));
    CHECK_THROWS_AS(add_awgn(ComplexSequence{0.0, 0.0}, 10.0, 1), DomainError);
}

TEST_CASE("add_awgn realizes the requested rSNR") {
    std::mt19937_64 rng(302);
    const std::size_t n = 100000;
    const auto y = random_sequence(rng, n);
    const auto r = add_awgn(y, 20.0, 77);
    const double noise = (r - y).energy() / static_cast<double>(n);
    const double signal = y.energy() / static_cast<double>(n);
    CHECK(std::abs(10.0 * std::log10(signal / noise) - 20.0) <= 0.2);
}

TEST_CASE("add_awgn noise energy stays within three sigma") {
    // |n_k|^2 is exponential with mean s2, so the sum over n samples has mean
    // n s2 and standard deviation sqrt(n) s2.
    std::mt19937_64 rng(303);
    const std::size_t n = 4000;
    const auto y = random_sequence(rng, n);
    const double s2 = y.energy() / static_cast<double>(n) * std::pow(10.0, -1.0);
    const auto r1 = add_awgn(y, 10.0, 1);
    const auto r2 = add_awgn(y, 10.0, 2);
    CHECK_FALSE(r1 == r2);
    for (const auto* r : {&r1, &r2}) {
        const double e = (*r - y).energy();
        CHECK(std::abs(e - static_cast<double>(n) * s2) <= 3.0 * std::sqrt(static_cast<double>(n)) * s2);
    }
}

TEST_CASE("add_awgn is zero mean") {
    const ComplexSequence y{1.0, -0.5, 0.25, 2.0};
    const int draws = 4000;
    std::vector<cplx> mean(y.size());
    for (int s = 0; s < draws; ++s) {
        const auto r = add_awgn(y, 0.0, derive_seed(11, static_cast<std::uint64_t>(s)));
        for (std::size_t k = 0; k < y.size(); ++k) mean[k] += (r[k] - y[k]) / static_cast<double>(draws);
    }
    const double sigma = std::sqrt(y.energy() / static_cast<double>(y.size()));
    for (const cplx& m : mean) CHECK(std::abs(m) <= 5.0 * sigma / std::sqrt(static_cast<double>(draws)));
}

TEST_CASE("poly_roots") {
    const std::vector<cplx> want{0.5, cplx{-1.0, 2.0}, 3.0};
    const auto p = poly_from_roots(want, cplx{2.0, -1.0});
    const auto got = poly_roots(p);
    REQUIRE(got.has_value());
    REQUIRE(got->size() == 3);
    for (const cplx& w : want) {
        double best = 1e9;
        for (const cplx& g : *got) best = std::min(best, std::abs(g - w));
        CHECK(best < 1e-10);
    }
    CHECK(poly_roots(ComplexSequence{4.0})->empty());
}

TEST_CASE("coprimality_margin") {
    // x has w-root 0.5; conj_reverse(h) = [-0.5, 1] has the same root.
    const std::vector<cplx> xr{0.5, cplx{0.0, 2.0}};
    const auto x = poly_from_roots(xr, 1.0);
    const ChannelTaps h(ComplexSequence{1.0, -0.5});
    REQUIRE(coprimality_margin(x, h).has_value());
    CHECK(*coprimality_margin(x, h) < 1e-12);

    CHECK(std::isinf(*coprimality_margin(x, ChannelTaps(ComplexSequence{cplx{0.0, 1.0}}))));

    std::mt19937_64 rng(304);
    const auto params = make_params(16, 2.1);
    for (std::uint64_t s = 0; s < 1000; ++s) {
        std::vector<std::uint8_t> bits(15);
        for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1U);
        const auto margin = coprimality_margin(encode(params, BitMessage(bits)), random_channel(4, derive_seed(5, s)));
        REQUIRE(margin.has_value());
        CHECK(*margin > 0.0);
    }
}
