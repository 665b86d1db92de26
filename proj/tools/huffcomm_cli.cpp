#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "huffcomm/errors.hpp"
#include "huffcomm/harness.hpp"

using namespace huffcomm;

namespace {

ComplexSequence read_sequence_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_sequence_csv(in);
}

void write_sequence_file(const std::string& path, const ComplexSequence& s) {
    if (path.empty() || path == "-") {
        write_sequence_csv(std::cout, s);
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_sequence_csv(out, s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Blind transmission over unknown FIR channels with Huffman sequences"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::size_t len = 32;
    std::size_t chan_len = 8;
    double energy = 2.1;
    std::string bits;
    std::string in_path;
    std::string out_path;

    auto* enc = app.add_subcommand("encode", "Encode a bit string into a Huffman codeword");
    enc->add_option("--len", len, "codeword length L (even)")->required();
    enc->add_option("--energy", energy, "energy E > 2")->required();
    enc->add_option("--bits", bits, "L-1 bits, slot 1 first")->required();
    enc->add_option("--out", out_path, "output CSV (default stdout)");

    auto* dec = app.add_subcommand("decode", "Decode a codeword CSV into bits");
    dec->add_option("--len", len, "codeword length L")->required();
    dec->add_option("--energy", energy, "energy E > 2")->required();
    dec->add_option("--in", in_path, "codeword CSV")->required();

    auto* pap = app.add_subcommand("papr", "Peak-to-average power ratio in dB");
    pap->add_option("--len", len, "codeword length L")->required();
    pap->add_option("--energy", energy, "energy E > 2")->required();
    pap->add_option("--bits", bits, "codeword to measure (default: worst case)");

    std::optional<double> rx_energy;
    std::string x_out;
    std::string h_out;
    auto* rec = app.add_subcommand("recover", "Blindly recover bits and channel from a received frame");
    rec->add_option("--len", len, "codeword length L")->required();
    rec->add_option("--chan-len", chan_len, "channel length K")->required();
    rec->add_option("--in", in_path, "received frame CSV, L+K-1 samples")->required();
    rec->add_option("--energy", rx_energy, "known energy (default: estimate it)");
    rec->add_option("--x-out", x_out, "write the recovered codeword");
    rec->add_option("--h-out", h_out, "write the recovered channel");

    std::string snr = "5:5:40";
    std::size_t trials = 500;
    std::uint64_t seed = 1;
    bool known = false;
    unsigned threads = 1;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo sweep over rSNR, results as CSV");
    sim->add_option("--len", len, "codeword length L")->required();
    sim->add_option("--chan-len", chan_len, "channel length K")->required();
    sim->add_option("--energy", energy, "energy E > 2")->required();
    sim->add_option("--snr", snr, "grid as start:step:stop or a comma list (inf = noiseless)")->capture_default_str();
    sim->add_option("--trials", trials, "trials per point")->capture_default_str();
    sim->add_option("--seed", seed, "master seed")->capture_default_str();
    sim->add_flag("--known-energy", known, "receiver uses the true energy");
    sim->add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();
    sim->add_option("--out", out_path, "results CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*enc) {
            const auto x = encode(make_params(len, energy), BitMessage::from_string(bits));
            write_sequence_file(out_path, x);
        } else if (*dec) {
            std::cout << decode(make_params(len, energy), read_sequence_file(in_path)).to_string() << '\n';
        } else if (*pap) {
            const auto p = make_params(len, energy);
            const double db = bits.empty() ? worst_case_papr(p) : papr_db(encode(p, BitMessage::from_string(bits)));
            std::printf("%.4f\n", db);
        } else if (*rec) {
            const auto cfg = FrameConfig::make(len, chan_len);
            const auto r = recover_frame(read_sequence_file(in_path), cfg, rx_energy);
            std::cout << r.bits.to_string() << '\n';
            std::printf("# E_hat=%.10g iterations=%d residual=%.3e rank1_gap=%.3e converged=%d\n", r.E_hat,
                        r.report.iterations, r.report.residual, r.report.rank1_gap, r.report.converged ? 1 : 0);
            if (!x_out.empty()) write_sequence_file(x_out, r.x_hat);
            if (!h_out.empty()) write_sequence_file(h_out, r.h_hat);
        } else if (*sim) {
            const auto frame = FrameConfig::make(len, chan_len);
            make_params(len, energy);
            std::vector<TrialConfig> grid;
            for (double s : parse_snr_grid(snr)) {
                TrialConfig cfg;
                cfg.frame = frame;
                cfg.energy = energy;
                cfg.rsnr_db = s;
                cfg.known_energy = known;
                grid.push_back(cfg);
            }
            SweepOptions opts;
            opts.trials_per_point = trials;
            opts.master_seed = seed;
            opts.threads = threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : threads;
            opts.on_point = [](const SweepRow& r) {
                std::fprintf(stderr, "rsnr %6.2f dB  ber %.4g  mse_data %.3e  mse_channel %.3e  fails %zu\n", r.rsnr_db,
                             r.ber, r.mse_data, r.mse_channel, r.fail_count);
            };
            const auto rows = run_sweep(grid, opts);
            std::ofstream out(out_path);
            if (!out) throw std::runtime_error("cannot write " + out_path);
            write_results_csv(out, rows, CsvMetadata{seed, len, chan_len, energy, known, trials});
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
