#include "huffcomm/huffman.hpp"

#include <cmath>
#include <numbers>

#include "huffcomm/errors.hpp"

namespace huffcomm {

namespace {

// Deviation from the template that encode() tolerates before reporting an
// internal error.
constexpr double kTemplateTolerance = 1e-9;

}  // namespace

cplx HuffmanParams::slot_phase(std::size_t slot) const {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(slot) / static_cast<double>(length - 1);
    return std::polar(1.0, angle);
}

HuffmanParams make_params(std::size_t length, double energy) {
    if (length < 2) throw ConfigError("make_params: length must be at least 2");
    if (length % 2 != 0) throw ConfigError("make_params: odd lengths are not supported");
    if (!(energy > 2.0) || !std::isfinite(energy))
        throw DomainError("make_params: energy must be finite and greater than 2");

    HuffmanParams p;
    p.length = length;
    p.energy = energy;
    const double disc = std::sqrt(energy * energy / 4.0 - 1.0);
    p.r_plus = energy / 2.0 + disc;
    p.r_minus = 1.0 / p.r_plus;  // == E/2 - disc, without the cancellation
    const double inv_deg = 1.0 / static_cast<double>(length - 1);
    p.R_plus = std::pow(p.r_plus, inv_deg);
    p.R_minus = 1.0 / p.R_plus;
    return p;
}

BitMessage::BitMessage(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) {
        if (b > 1) throw DomainError("BitMessage: bits must be 0 or 1");
    }
}

BitMessage BitMessage::from_string(std::string_view s) {
    std::vector<std::uint8_t> bits;
    bits.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') throw DomainError("BitMessage: expected only '0' and '1'");
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return BitMessage(std::move(bits));
}

BitMessage BitMessage::all(std::size_t count, bool value) {
    return BitMessage(std::vector<std::uint8_t>(count, value ? 1 : 0));
}

BitMessage BitMessage::from_index(std::uint64_t value, std::size_t count) {
    std::vector<std::uint8_t> bits(count);
    for (std::size_t k = 0; k < count; ++k) bits[count - 1 - k] = static_cast<std::uint8_t>((value >> k) & 1U);
    return BitMessage(std::move(bits));
}

std::string BitMessage::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) s.push_back(b ? '1' : '0');
    return s;
}

BitMessage BitMessage::complement() const {
    std::vector<std::uint8_t> c(bits_);
    for (auto& b : c) b ^= 1U;
    return BitMessage(std::move(c));
}

std::size_t BitMessage::ones() const noexcept {
    std::size_t n = 0;
    for (auto b : bits_) n += b;
    return n;
}

std::size_t hamming_distance(const BitMessage& a, const BitMessage& b) {
    if (a.size() != b.size()) throw DimensionError("hamming_distance: length mismatch");
    std::size_t d = 0;
    for (std::size_t k = 0; k < a.size(); ++k) d += (a[k] != b[k]) ? 1 : 0;
    return d;
}

ComplexSequence encode(const HuffmanParams& params, const BitMessage& msg) {
    const std::size_t slots = params.bits_per_codeword();
    if (msg.size() != slots)
        throw DimensionError("encode: expected " + std::to_string(slots) + " bits, got " + std::to_string(msg.size()));

    std::vector<cplx> roots(slots);
    double log_radius_sum = 0.0;
    for (std::size_t k = 0; k < slots; ++k) {
        roots[k] = msg[k] ? params.inner_root(k) : params.outer_root(k);
        log_radius_sum += std::log(msg[k] ? params.R_minus : params.R_plus);
    }
    // x_0 * conj(x_{L-1}) = -c^2 prod|rho| must equal -1; the leading
    // coefficient -c < 0 and, for even L, x_0 = c prod|rho| > 0.
    const double c = std::exp(-0.5 * log_radius_sum);
    ComplexSequence x = poly_from_roots(roots, cplx{-c, 0.0});

    const CorrelationVector expected = autocorr_template(params);
    const CorrelationVector actual = correlate(x, x);
    if (max_abs_diff(actual.coeffs(), expected.coeffs()) > kTemplateTolerance * std::max(1.0, params.energy))
        throw NumericalFailure("encode: codeword autocorrelation deviates from the Huffman template");
    return x;
}

CorrelationVector autocorr_template(std::size_t length, double energy) {
    if (length < 2) throw ConfigError("autocorr_template: length must be at least 2");
    std::vector<cplx> a(2 * length - 1, cplx{});
    a.front() = -1.0;
    a[length - 1] = energy;
    a.back() = -1.0;
    return CorrelationVector(ComplexSequence(std::move(a)), length - 1);
}

CorrelationVector autocorr_template(const HuffmanParams& params) {
    return autocorr_template(params.length, params.energy);
}

BitMessage decode(const HuffmanParams& params, const ComplexSequence& xhat) {
    if (xhat.size() != params.length) throw DimensionError("decode: codeword length mismatch");
    if (xhat.energy() == 0.0) throw DomainError("decode: zero codeword");
    const std::size_t slots = params.bits_per_codeword();
    std::vector<std::uint8_t> bits(slots);
    for (std::size_t k = 0; k < slots; ++k) {
        const double inner = std::abs(poly_eval(xhat, params.inner_root(k)));
        const double outer = std::abs(poly_eval(xhat, params.outer_root(k)));
        bits[k] = inner <= outer ? 1 : 0;
    }
    return BitMessage(std::move(bits));
}

double worst_case_papr(const HuffmanParams& params) {
    return papr_db(encode(params, BitMessage::all(params.bits_per_codeword(), true)));
}

}  // namespace huffcomm
