#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "huffcomm/seqcore.hpp"

namespace huffcomm {

/// FIR impulse response with nonzero first and last tap.
class ChannelTaps {
public:
    explicit ChannelTaps(ComplexSequence taps);

    std::size_t size() const noexcept { return taps_.size(); }
    const ComplexSequence& taps() const noexcept { return taps_; }
    const cplx& operator[](std::size_t k) const { return taps_[k]; }

private:
    ComplexSequence taps_;
};

/// Dimensions shared by transmitter, channel and receiver: L = 2K + M, N = L + K.
struct FrameConfig {
    std::size_t L = 0;
    std::size_t K = 0;
    std::size_t M = 0;
    std::size_t N = 0;

    /// Throws ConfigError unless L is even, K >= 1 and L >= 2K.
    static FrameConfig make(std::size_t L, std::size_t K);

    std::size_t frame_length() const noexcept { return L + K - 1; }
    friend bool operator==(const FrameConfig&, const FrameConfig&) = default;
};

/// Noise level sentinel for a noiseless link.
inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();

/// Mixes a master seed with a stream index; used for every seed split.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

inline constexpr double kDefaultEdgeFloor = 0.05;

/// i.i.d. CN(0,1) taps scaled to unit norm, redrawn until both edge taps reach
/// edge_floor * max|h_k|.
ChannelTaps random_channel(std::size_t K, std::uint64_t seed, double edge_floor = kDefaultEdgeFloor);

/// y = x * h.
ComplexSequence transmit(const ComplexSequence& x, const ChannelTaps& h);

/// r = y + n with per-sample noise variance (|y|^2/len) * 10^(-rsnr_db/10).
/// rsnr_db = +inf returns y unchanged.
ComplexSequence add_awgn(const ComplexSequence& y, double rsnr_db, std::uint64_t seed);

/// Roots of a polynomial in w by companion-matrix eigenvalues. Empty for
/// constants; nullopt if the eigensolver fails.
std::optional<std::vector<cplx>> poly_roots(const ComplexSequence& u);

/// Smallest distance between a w-root of x and a w-root of conj_reverse(h).
/// +inf when either side has no roots, nullopt if root finding failed.
std::optional<double> coprimality_margin(const ComplexSequence& x, const ChannelTaps& h);

}  // namespace huffcomm
