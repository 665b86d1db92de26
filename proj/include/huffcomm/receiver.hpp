#pragma once

// Receiver front end. The autocorrelation of a received Huffman frame is the
// template convolved with the channel autocorrelation, i.e. the block layout
//
//   (-a_h, 0_M, E a_h, 0_M, -a_h)
//
// so a_h and E can be read off before the lifted solve.

#include <vector>

#include "huffcomm/channel.hpp"
#include "huffcomm/lifted_sdp.hpp"
#include "huffcomm/seqcore.hpp"

namespace huffcomm {

struct SegmentBundle {
    CorrelationVector seg1;  ///< a_r[0, 2K-1)
    std::vector<cplx> gap2;  ///< M noise-only lags
    CorrelationVector seg3;  ///< a_r[L-1, L+2K-2)
    std::vector<cplx> gap4;
    CorrelationVector seg5;  ///< a_r[2L-2, 2L+2K-3)
};

struct ReceiverEstimates {
    CorrelationVector a_h_hat;  ///< conjugate-symmetric channel autocorrelation
    double E_hat;
    CorrelationVector a_x_hat;  ///< Huffman template at E_hat
};

/// Smallest energy estimate handed to the decoder.
inline constexpr double kEnergyFloor = 2.0 + 1e-9;

CorrelationVector received_autocorr(const ComplexSequence& r, const FrameConfig& cfg);

SegmentBundle extract_segments(const CorrelationVector& a_r, const FrameConfig& cfg);

/// -(seg1 + conj_reverse(seg1)) / 2.
CorrelationVector estimate_channel_autocorr(const SegmentBundle& bundle);

/// |seg3| / |symmetrized seg1|, clamped below at kEnergyFloor.
/// Throws NumericalFailure when the channel segment vanishes.
double estimate_energy(const SegmentBundle& bundle);

/// Runs the estimators. With `known_energy` set, that value is used as E_hat.
ReceiverEstimates estimate(const SegmentBundle& bundle, const FrameConfig& cfg,
                           std::optional<double> known_energy = std::nullopt);

/// b = (a_x_hat; a_h_hat; r; conj_reverse(r)).
MeasurementVector build_measurements(const ReceiverEstimates& est, const ComplexSequence& r, const FrameConfig& cfg);

}  // namespace huffcomm
