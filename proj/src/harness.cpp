#include "huffcomm/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "huffcomm/errors.hpp"

namespace huffcomm {

double mse_phase_aligned(const ComplexSequence& truth, const ComplexSequence& est) {
    if (truth.size() != est.size()) throw DimensionError("mse_phase_aligned: length mismatch");
    cplx corr{};
    for (std::size_t k = 0; k < truth.size(); ++k) corr += est[k] * std::conj(truth[k]);
    const cplx rot = corr == cplx{} ? cplx{1.0, 0.0} : std::polar(1.0, -std::arg(corr));
    double s = 0.0;
    for (std::size_t k = 0; k < truth.size(); ++k) s += std::norm(rot * est[k] - truth[k]);
    return s / static_cast<double>(truth.size());
}

const char* to_string(TrialStage s) noexcept {
    switch (s) {
        case TrialStage::none: return "none";
        case TrialStage::estimate: return "estimate";
        case TrialStage::solve: return "solve";
        case TrialStage::rank1: return "rank1";
        case TrialStage::phase: return "phase";
        case TrialStage::decode: return "decode";
    }
    return "unknown";
}

namespace {

Recovery recover_impl(const ComplexSequence& r, const FrameConfig& cfg, std::optional<double> known_energy,
                      const SolverOptions& opts, TrialStage& stage) {
    stage = TrialStage::estimate;
    const CorrelationVector a_r = received_autocorr(r, cfg);
    const SegmentBundle bundle = extract_segments(a_r, cfg);
    const ReceiverEstimates est = estimate(bundle, cfg, known_energy);
    const MeasurementVector b = build_measurements(est, r, cfg);

    stage = TrialStage::solve;
    const SolveResult solved = solve_psd_least_squares(b, opts);

    stage = TrialStage::rank1;
    const Rank1 lead = extract_rank1(solved.X);

    stage = TrialStage::phase;
    PhaseFixed fixed = fix_global_phase(lead.x, cfg.L, cfg.K);

    stage = TrialStage::decode;
    const HuffmanParams params = make_params(cfg.L, est.E_hat);
    BitMessage bits = decode(params, fixed.x_hat);
    stage = TrialStage::none;
    return Recovery{std::move(bits), std::move(fixed.x_hat), std::move(fixed.h_hat), est.E_hat, solved.report};
}

BitMessage random_bits(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> bits(count);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
    return BitMessage(std::move(bits));
}

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

Recovery recover_frame(const ComplexSequence& r, const FrameConfig& cfg, std::optional<double> known_energy,
                       const SolverOptions& opts) {
    TrialStage stage = TrialStage::none;
    return recover_impl(r, cfg, known_energy, opts, stage);
}

TrialResult run_trial(const TrialConfig& cfg) {
    const FrameConfig& frame = cfg.frame;
    const HuffmanParams params = make_params(frame.L, cfg.energy);

    TrialResult res;
    res.bits_total = params.bits_per_codeword();
    res.sent = cfg.bits ? *cfg.bits : random_bits(res.bits_total, derive_seed(cfg.seed, static_cast<std::uint64_t>(SeedStream::bits)));
    const ChannelTaps h = cfg.channel ? *cfg.channel
                                      : random_channel(frame.K, derive_seed(cfg.seed, static_cast<std::uint64_t>(SeedStream::channel)),
                                                       cfg.edge_floor);
    if (h.size() != frame.K) throw DimensionError("run_trial: channel length does not match the frame");

    const ComplexSequence x = encode(params, res.sent);
    const ComplexSequence y = transmit(x, h);
    const ComplexSequence r = add_awgn(y, cfg.rsnr_db, derive_seed(cfg.seed, static_cast<std::uint64_t>(SeedStream::noise)));
    res.coprimality_margin = coprimality_margin(x, h);

    TrialStage stage = TrialStage::none;
    try {
        stage = TrialStage::estimate;
        res.energy_estimate = estimate_energy(extract_segments(received_autocorr(r, frame), frame));
        res.energy_rel_err = (res.energy_estimate - cfg.energy) / cfg.energy;

        const std::optional<double> known = cfg.known_energy ? std::optional<double>(cfg.energy) : std::nullopt;
        Recovery rec = recover_impl(r, frame, known, cfg.solver, stage);
        res.solve = rec.report;
        res.decoded = std::move(rec.bits);
        res.bit_errors = hamming_distance(res.sent, res.decoded);
        res.mse_data = mse_phase_aligned(x, rec.x_hat);
        res.mse_channel = mse_phase_aligned(h.taps(), rec.h_hat);
        if (!rec.report.converged) {
            res.failed = true;
            res.failed_stage = TrialStage::solve;
            res.failure = "solver reached max_iters";
        }
    } catch (const NumericalFailure& e) {
        res.failed = true;
        res.failed_stage = stage;
        res.failure = e.what();
    }
    if (res.failed) res.bit_errors = res.bits_total;
    return res;
}

SweepRow aggregate(const TrialConfig& point, const std::vector<TrialResult>& results) {
    SweepRow row;
    row.rsnr_db = point.rsnr_db;
    row.known_energy = point.known_energy;
    row.trials = results.size();
    std::size_t ok = 0;
    double mse_d = 0.0, mse_c = 0.0, e2 = 0.0, iters = 0.0, gap = 0.0;
    for (const auto& t : results) {
        row.bit_errors += t.bit_errors;
        row.bits_total += t.bits_total;
        if (t.failed) {
            ++row.fail_count;
            continue;
        }
        ++ok;
        mse_d += t.mse_data;
        mse_c += t.mse_channel;
        e2 += t.energy_rel_err * t.energy_rel_err;
        iters += t.solve.iterations;
        gap += t.solve.rank1_gap;
    }
    row.ber = row.bits_total ? static_cast<double>(row.bit_errors) / static_cast<double>(row.bits_total) : 0.0;
    if (ok > 0) {
        const double n = static_cast<double>(ok);
        row.mse_data = mse_d / n;
        row.mse_channel = mse_c / n;
        row.energy_rel_rmse = std::sqrt(e2 / n);
        row.mean_iters = iters / n;
        row.mean_rank1_gap = gap / n;
    } else {
        row.mse_data = row.mse_channel = row.energy_rel_rmse = row.mean_iters = row.mean_rank1_gap = std::nan("");
    }
    return row;
}

std::vector<SweepRow> run_sweep(const std::vector<TrialConfig>& grid, const SweepOptions& opts) {
    if (opts.trials_per_point < 1) throw DomainError("run_sweep: trials_per_point must be at least 1");
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    const unsigned threads = std::max(1U, opts.threads);

    for (const TrialConfig& point : grid) {
        std::vector<TrialResult> results(opts.trials_per_point);
        auto run_index = [&](std::size_t i) {
            TrialConfig cfg = point;
            cfg.seed = derive_seed(opts.master_seed, i);
            results[i] = run_trial(cfg);
        };
        if (threads == 1) {
            for (std::size_t i = 0; i < results.size(); ++i) run_index(i);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::jthread> pool;
            for (unsigned t = 0; t < threads; ++t) {
                pool.emplace_back([&] {
                    for (std::size_t i = next++; i < results.size(); i = next++) run_index(i);
                });
            }
        }
        rows.push_back(aggregate(point, results));
        if (opts.on_point) opts.on_point(rows.back());
    }
    return rows;
}

std::vector<double> parse_snr_grid(const std::string& spec) {
    auto parse_one = [](const std::string& s) {
        if (s == "inf" || s == "noiseless") return kNoiseless;
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw DomainError("parse_snr_grid: bad number '" + s + "'");
        return v;
    };
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw DomainError("parse_snr_grid: expected start:step:stop");
        const double start = parse_one(parts[0]);
        const double step = parse_one(parts[1]);
        const double stop = parse_one(parts[2]);
        if (!(step > 0.0) || stop < start || !std::isfinite(start) || !std::isfinite(stop))
            throw DomainError("parse_snr_grid: invalid range");
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    } else {
        std::stringstream ss(spec);
        for (std::string p; std::getline(ss, p, ',');) {
            if (!p.empty()) out.push_back(parse_one(p));
        }
    }
    if (out.empty()) throw DomainError("parse_snr_grid: empty grid");
    return out;
}

void write_results_csv(std::ostream& os, const std::vector<SweepRow>& rows, const CsvMetadata& meta) {
    os << "# huffcomm " << kVersion << " simulate\n";
    os << "# seed=" << meta.master_seed << " L=" << meta.L << " K=" << meta.K << " E=" << fmt(meta.energy)
       << " trials_per_point=" << meta.trials_per_point << " known_energy=" << (meta.known_energy ? 1 : 0) << '\n';
    os << "# rsnr: mean received power per complex sample over noise variance, dB\n";
    os << "# channel: iid CN(0,1) taps, unit norm, edge taps >= 0.05 max|h|\n";
    os << "# mse: per dimension after optimal global phase alignment\n";
    os << "# failures: counted as all bits wrong in ber, excluded from the means\n";
    os << "rsnr_db,trials,fail_count,mse_data,mse_channel,ber,energy_rel_rmse,mean_iters,mean_rank1_gap\n";
    for (const auto& r : rows) {
        os << fmt(r.rsnr_db) << ',' << r.trials << ',' << r.fail_count << ',' << fmt(r.mse_data) << ','
           << fmt(r.mse_channel) << ',' << fmt(r.ber) << ',' << fmt(r.energy_rel_rmse) << ',' << fmt(r.mean_iters)
           << ',' << fmt(r.mean_rank1_gap) << '\n';
    }
}

void write_sequence_csv(std::ostream& os, const ComplexSequence& s) {
    char buf[96];
    for (const cplx& c : s) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", c.real(), c.imag());
        os << buf;
    }
}

ComplexSequence read_sequence_csv(std::istream& is) {
    std::vector<cplx> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        try {
            const double re = std::stod(line.substr(0, comma));
            const double im = comma == std::string::npos ? 0.0 : std::stod(line.substr(comma + 1));
            values.emplace_back(re, im);
        } catch (const std::exception&) {
            throw DomainError("read_sequence_csv: cannot parse line " + std::to_string(lineno) + ": '" + line + "'");
        }
    }
    if (values.empty()) throw DimensionError("read_sequence_csv: no samples");
    return ComplexSequence(std::move(values));
}

}  // namespace huffcomm
