#pragma once

// End-to-end link simulation: encode -> channel -> noise -> blind recovery
// -> decode, plus Monte Carlo sweeps and CSV output.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "huffcomm/channel.hpp"
#include "huffcomm/huffman.hpp"
#include "huffcomm/lifted_sdp.hpp"
#include "huffcomm/receiver.hpp"

namespace huffcomm {

inline constexpr const char* kVersion = "0.1.0";

/// min over theta of |e^{-i theta} est - truth|^2 / len.
double mse_phase_aligned(const ComplexSequence& truth, const ComplexSequence& est);

/// Everything the receiver produces from one frame.
struct Recovery {
    BitMessage bits;
    ComplexSequence x_hat;
    ComplexSequence h_hat;
    double E_hat;  ///< energy used for the template and the decoder
    SolveReport report;
};

/// Blind receiver: autocorrelation estimates, lifted solve, rank-1 step,
/// phase fix and decode. With `known_energy` the receiver skips the energy
/// estimate. Throws NumericalFailure from whichever stage fails.
Recovery recover_frame(const ComplexSequence& r, const FrameConfig& cfg, std::optional<double> known_energy = {},
                       const SolverOptions& opts = {});

enum class TrialStage { none, estimate, solve, rank1, phase, decode };

const char* to_string(TrialStage s) noexcept;

struct TrialConfig {
    FrameConfig frame;
    double energy = 2.1;
    double rsnr_db = kNoiseless;
    std::uint64_t seed = 0;
    bool known_energy = false;
    SolverOptions solver;
    double edge_floor = kDefaultEdgeFloor;
    /// Fixed message / channel; drawn from the seed when unset.
    std::optional<BitMessage> bits;
    std::optional<ChannelTaps> channel;
};

struct TrialResult {
    bool failed = false;
    TrialStage failed_stage = TrialStage::none;
    std::string failure;

    double mse_data = 0.0;
    double mse_channel = 0.0;
    std::size_t bit_errors = 0;
    std::size_t bits_total = 0;
    double energy_estimate = 0.0;  ///< blind estimate, computed in both modes
    double energy_rel_err = 0.0;   ///< (energy_estimate - E) / E
    SolveReport solve;
    std::optional<double> coprimality_margin;

    BitMessage sent;
    BitMessage decoded;

    friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

/// Seed streams used inside one trial.
enum class SeedStream : std::uint64_t { bits = 1, channel = 2, noise = 3 };

TrialResult run_trial(const TrialConfig& cfg);

struct SweepRow {
    double rsnr_db = 0.0;
    bool known_energy = false;
    std::size_t trials = 0;
    std::size_t fail_count = 0;
    double mse_data = 0.0;
    double mse_channel = 0.0;
    double ber = 0.0;
    double energy_rel_rmse = 0.0;
    double mean_iters = 0.0;
    double mean_rank1_gap = 0.0;
    std::size_t bit_errors = 0;
    std::size_t bits_total = 0;
};

struct SweepOptions {
    std::size_t trials_per_point = 500;
    std::uint64_t master_seed = 1;
    unsigned threads = 1;
    /// Called after each finished grid point.
    std::function<void(const SweepRow&)> on_point;
};

/// Trial i of every grid point uses seed derive_seed(master_seed, i), so the
/// points share messages and channels and differ only in noise level and
/// receiver mode.
std::vector<SweepRow> run_sweep(const std::vector<TrialConfig>& grid, const SweepOptions& opts);

/// Aggregates per-trial results into one row. Failed trials count all bits
/// as errors and are left out of the means.
SweepRow aggregate(const TrialConfig& point, const std::vector<TrialResult>& results);

/// Parses "start:step:stop" (inclusive) or a comma list into rSNR values in dB.
/// "inf" or "noiseless" denotes a noiseless point.
std::vector<double> parse_snr_grid(const std::string& spec);

struct CsvMetadata {
    std::uint64_t master_seed = 0;
    std::size_t L = 0;
    std::size_t K = 0;
    double energy = 0.0;
    bool known_energy = false;
    std::size_t trials_per_point = 0;
};

/// results.csv: '#' metadata lines, then the header row
/// rsnr_db,trials,fail_count,mse_data,mse_channel,ber,energy_rel_rmse,mean_iters,mean_rank1_gap
void write_results_csv(std::ostream& os, const std::vector<SweepRow>& rows, const CsvMetadata& meta);

/// One "re,im" line per sample.
void write_sequence_csv(std::ostream& os, const ComplexSequence& s);
ComplexSequence read_sequence_csv(std::istream& is);

}  // namespace huffcomm
