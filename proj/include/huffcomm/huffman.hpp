#pragma once

// Huffman sequence codebook.
//
// A codeword of length L has the aperiodic autocorrelation
// (-1, 0...0, E, 0...0, -1). Its L-1 w-roots sit one per phase slot
// e^{2 pi i k/(L-1)}, k = 0..L-2, on either the inner circle R_minus or the
// outer circle R_plus; each slot carries one bit.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "huffcomm/seqcore.hpp"

namespace huffcomm {

struct HuffmanParams {
    std::size_t length = 0;  ///< L, even
    double energy = 0.0;     ///< E = main-to-sidelobe ratio, > 2
    double r_plus = 0.0;
    double r_minus = 0.0;
    double R_plus = 0.0;   ///< r_plus^(1/(L-1))
    double R_minus = 0.0;  ///< r_minus^(1/(L-1))

    std::size_t bits_per_codeword() const noexcept { return length - 1; }

    /// Unit phase of slot `slot` (0-based) in the w-domain.
    cplx slot_phase(std::size_t slot) const;
    /// w-root selected by bit 1 (z-zero on the outer circle).
    cplx inner_root(std::size_t slot) const { return slot_phase(slot) * R_minus; }
    /// w-root selected by bit 0.
    cplx outer_root(std::size_t slot) const { return slot_phase(slot) * R_plus; }
};

/// Throws ConfigError for odd or too-small L and DomainError for E <= 2.
HuffmanParams make_params(std::size_t length, double energy);

/// L-1 bits; slot 1 is the leftmost character of the string form.
class BitMessage {
public:
    BitMessage() = default;
    explicit BitMessage(std::vector<std::uint8_t> bits);

    static BitMessage from_string(std::string_view s);
    static BitMessage all(std::size_t count, bool value);
    /// Bits of `value`, slot 1 taking the most significant of `count` bits.
    static BitMessage from_index(std::uint64_t value, std::size_t count);

    std::string to_string() const;
    std::size_t size() const noexcept { return bits_.size(); }
    bool operator[](std::size_t k) const { return bits_[k] != 0; }
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
    BitMessage complement() const;
    std::size_t ones() const noexcept;

    friend bool operator==(const BitMessage&, const BitMessage&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

std::size_t hamming_distance(const BitMessage& a, const BitMessage& b);

ComplexSequence encode(const HuffmanParams& params, const BitMessage& msg);

CorrelationVector autocorr_template(const HuffmanParams& params);
CorrelationVector autocorr_template(std::size_t length, double energy);

/// Per slot, bit 1 iff the polynomial is smaller at the inner candidate root.
BitMessage decode(const HuffmanParams& params, const ComplexSequence& xhat);

/// PAPR in dB of the all-ones codeword.
double worst_case_papr(const HuffmanParams& params);

}  // namespace huffcomm
