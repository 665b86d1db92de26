#include "huffcomm/channel.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "huffcomm/errors.hpp"

namespace huffcomm {

ChannelTaps::ChannelTaps(ComplexSequence taps) : taps_(std::move(taps)) {
    if (!taps_.edge_nonvanishing()) throw DomainError("ChannelTaps: first and last tap must be nonzero");
}

FrameConfig FrameConfig::make(std::size_t L, std::size_t K) {
    if (K < 1) throw ConfigError("FrameConfig: channel length must be at least 1");
    if (L < 2 || L % 2 != 0) throw ConfigError("FrameConfig: codeword length must be even and at least 2");
    if (L < 2 * K)
        throw ConfigError("FrameConfig: channel length " + std::to_string(K) + " exceeds half the codeword length " +
                          std::to_string(L));
    return FrameConfig{L, K, L - 2 * K, L + K};
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    // splitmix64 finalizer applied to a combination of both inputs
    auto mix = [](std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    return mix(mix(master) ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
}

namespace {

cplx complex_gaussian(std::mt19937_64& rng, double variance) {
    std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

}  // namespace

ChannelTaps random_channel(std::size_t K, std::uint64_t seed, double edge_floor) {
    if (K < 1) throw ConfigError("random_channel: K must be at least 1");
    if (!(edge_floor > 0.0 && edge_floor < 1.0)) throw DomainError("random_channel: edge_floor must lie in (0, 1)");

    std::mt19937_64 rng(seed);
    std::vector<cplx> taps(K);
    for (;;) {
        for (auto& t : taps) t = complex_gaussian(rng, 1.0);
        double peak = 0.0;
        double total = 0.0;
        for (const auto& t : taps) {
            peak = std::max(peak, std::abs(t));
            total += std::norm(t);
        }
        if (total == 0.0) continue;
        if (std::abs(taps.front()) < edge_floor * peak || std::abs(taps.back()) < edge_floor * peak) continue;
        const double scale = 1.0 / std::sqrt(total);
        for (auto& t : taps) t *= scale;
        return ChannelTaps(ComplexSequence(taps));
    }
}

ComplexSequence transmit(const ComplexSequence& x, const ChannelTaps& h) { return convolve(x, h.taps()); }

ComplexSequence add_awgn(const ComplexSequence& y, double rsnr_db, std::uint64_t seed) {
    if (std::isinf(rsnr_db) && rsnr_db > 0) return y;
    const double power = y.energy() / static_cast<double>(y.size());
    if (power == 0.0) throw DomainError("add_awgn: received signal is zero");
    const double variance = power * std::pow(10.0, -rsnr_db / 10.0);

    std::mt19937_64 rng(seed);
    std::vector<cplx> r(y.vector());
    for (auto& v : r) v += complex_gaussian(rng, variance);
    return ComplexSequence(std::move(r));
}

std::optional<std::vector<cplx>> poly_roots(const ComplexSequence& u) {
    const std::size_t degree = u.size() - 1;
    if (degree == 0) return std::vector<cplx>{};
    if (u.back() == cplx{}) throw DomainError("poly_roots: leading coefficient is zero");

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(degree),
                                                        static_cast<Eigen::Index>(degree));
    for (std::size_t i = 1; i < degree; ++i)
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    for (std::size_t i = 0; i < degree; ++i)
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(degree - 1)) = -u[i] / u.back();

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) return std::nullopt;
    const auto& ev = solver.eigenvalues();
    return std::vector<cplx>(ev.data(), ev.data() + ev.size());
}

std::optional<double> coprimality_margin(const ComplexSequence& x, const ChannelTaps& h) {
    if (!x.edge_nonvanishing()) throw DomainError("coprimality_margin: codeword edges must be nonzero");
    const auto xr = poly_roots(x);
    const auto hr = poly_roots(conj_reverse(h.taps()));
    if (!xr || !hr) return std::nullopt;

    double margin = std::numeric_limits<double>::infinity();
    for (const auto& a : *xr) {
        for (const auto& b : *hr) margin = std::min(margin, std::abs(a - b));
    }
    return margin;
}

}  // namespace huffcomm
