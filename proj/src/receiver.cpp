#include "huffcomm/receiver.hpp"

#include <cmath>

#include "huffcomm/errors.hpp"
#include "huffcomm/huffman.hpp"

namespace huffcomm {

namespace {

CorrelationVector take(const CorrelationVector& a, std::size_t first, std::size_t count) {
    return CorrelationVector(a.values().slice(first, count), count / 2);
}

std::vector<cplx> take_raw(const CorrelationVector& a, std::size_t first, std::size_t count) {
    const auto c = a.coeffs().subspan(first, count);
    return {c.begin(), c.end()};
}

double l2(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return std::sqrt(s);
}

}  // namespace

CorrelationVector received_autocorr(const ComplexSequence& r, const FrameConfig& cfg) {
    if (r.size() != cfg.frame_length())
        throw DimensionError("received_autocorr: frame has " + std::to_string(r.size()) + " samples, expected " +
                             std::to_string(cfg.frame_length()));
    return correlate(r, r);
}

SegmentBundle extract_segments(const CorrelationVector& a_r, const FrameConfig& cfg) {
    const std::size_t L = cfg.L;
    const std::size_t K = cfg.K;
    if (L < 2 * K) throw ConfigError("extract_segments: channel longer than half the codeword");
    if (a_r.size() != 2 * L + 2 * K - 3)
        throw DimensionError("extract_segments: autocorrelation length " + std::to_string(a_r.size()) +
                             ", expected " + std::to_string(2 * L + 2 * K - 3));
    const std::size_t seg = 2 * K - 1;
    const std::size_t M = L - 2 * K;

    // seg1 | gap2 | seg3 | gap4 | seg5 partitions [0, 2L+2K-3)
    const std::size_t s3 = L - 1;
    const std::size_t s5 = 2 * L - 2;
    if (seg + M != s3 || s3 + seg + M != s5 || s5 + seg != a_r.size())
        throw DimensionError("extract_segments: inconsistent segment layout");

    return SegmentBundle{take(a_r, 0, seg), take_raw(a_r, seg, M), take(a_r, s3, seg), take_raw(a_r, s3 + seg, M),
                         take(a_r, s5, seg)};
}

CorrelationVector estimate_channel_autocorr(const SegmentBundle& bundle) {
    const ComplexSequence& s1 = bundle.seg1.values();
    const ComplexSequence mirrored = conj_reverse(s1);
    std::vector<cplx> out(s1.size());
    for (std::size_t k = 0; k < s1.size(); ++k) out[k] = -0.5 * (s1[k] + mirrored[k]);
    return CorrelationVector(ComplexSequence(std::move(out)), s1.size() / 2);
}

double estimate_energy(const SegmentBundle& bundle) {
    const CorrelationVector a_h = estimate_channel_autocorr(bundle);
    const double denom = l2(a_h.coeffs());
    if (denom == 0.0) throw NumericalFailure("estimate_energy: channel autocorrelation estimate vanishes");
    return std::max(kEnergyFloor, l2(bundle.seg3.coeffs()) / denom);
}

ReceiverEstimates estimate(const SegmentBundle& bundle, const FrameConfig& cfg, std::optional<double> known_energy) {
    CorrelationVector a_h = estimate_channel_autocorr(bundle);
    const double E_used = known_energy ? *known_energy : estimate_energy(bundle);
    return ReceiverEstimates{std::move(a_h), E_used, autocorr_template(cfg.L, E_used)};
}

MeasurementVector build_measurements(const ReceiverEstimates& est, const ComplexSequence& r, const FrameConfig& cfg) {
    if (r.size() != cfg.frame_length()) throw DimensionError("build_measurements: frame length mismatch");
    if (est.a_x_hat.size() != 2 * cfg.L - 1 || est.a_h_hat.size() != 2 * cfg.K - 1)
        throw DimensionError("build_measurements: estimate lengths do not match the frame");
    const ComplexSequence r_rev = conj_reverse(r);
    return MeasurementVector::from_blocks(BlockShape{cfg.L, cfg.K}, est.a_x_hat.coeffs(), est.a_h_hat.coeffs(),
                                          r.coeffs(), r_rev.coeffs());
}

}  // namespace huffcomm
