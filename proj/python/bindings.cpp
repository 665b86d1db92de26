#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "huffcomm/errors.hpp"
#include "huffcomm/harness.hpp"

namespace py = pybind11;
using namespace huffcomm;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

ComplexSequence to_seq(const CArray& a) {
    if (a.ndim() != 1) throw DimensionError("expected a one-dimensional array");
    return ComplexSequence(std::vector<cplx>(a.data(), a.data() + a.size()));
}

CArray to_array(std::span<const cplx> s) {
    CArray out(static_cast<py::ssize_t>(s.size()));
    std::copy(s.begin(), s.end(), out.mutable_data());
    return out;
}

CArray to_array(const ComplexSequence& s) { return to_array(s.coeffs()); }

py::dict report_dict(const SolveReport& r) {
    py::dict d;
    d["iterations"] = r.iterations;
    d["residual"] = r.residual;
    d["rank1_gap"] = r.rank1_gap;
    d["converged"] = r.converged;
    return d;
}

py::dict row_dict(const SweepRow& r) {
    py::dict d;
    d["rsnr_db"] = r.rsnr_db;
    d["known_energy"] = r.known_energy;
    d["trials"] = r.trials;
    d["fail_count"] = r.fail_count;
    d["mse_data"] = r.mse_data;
    d["mse_channel"] = r.mse_channel;
    d["ber"] = r.ber;
    d["energy_rel_rmse"] = r.energy_rel_rmse;
    d["mean_iters"] = r.mean_iters;
    d["mean_rank1_gap"] = r.mean_rank1_gap;
    return d;
}

}  // namespace

PYBIND11_MODULE(_huffcomm, m) {
    m.doc() = "Blind transmission over unknown FIR channels with Huffman sequences";
    m.attr("__version__") = kVersion;

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);

    m.def("convolve", [](const CArray& u, const CArray& v) { return to_array(convolve(to_seq(u), to_seq(v))); });
    m.def("correlate", [](const CArray& u, const CArray& v) { return to_array(correlate(to_seq(u), to_seq(v)).coeffs()); });
    m.def("conj_reverse", [](const CArray& u) { return to_array(conj_reverse(to_seq(u))); });
    m.def("papr_db", [](const CArray& u) { return papr_db(to_seq(u)); });

    py::class_<HuffmanParams>(m, "HuffmanParams")
        .def_readonly("length", &HuffmanParams::length)
        .def_readonly("energy", &HuffmanParams::energy)
        .def_readonly("r_plus", &HuffmanParams::r_plus)
        .def_readonly("r_minus", &HuffmanParams::r_minus)
        .def_readonly("R_plus", &HuffmanParams::R_plus)
        .def_readonly("R_minus", &HuffmanParams::R_minus)
        .def("__repr__", [](const HuffmanParams& p) {
            return "HuffmanParams(length=" + std::to_string(p.length) + ", energy=" + std::to_string(p.energy) + ")";
        });
    m.def("make_params", &make_params, py::arg("length"), py::arg("energy"));

    m.def(
        "encode", [](std::size_t L, double E, const std::string& bits) {
            return to_array(encode(make_params(L, E), BitMessage::from_string(bits)));
        },
        py::arg("length"), py::arg("energy"), py::arg("bits"), "Codeword for a '0'/'1' string, slot 1 first.");
    m.def(
        "decode", [](std::size_t L, double E, const CArray& x) {
            return decode(make_params(L, E), to_seq(x)).to_string();
        },
        py::arg("length"), py::arg("energy"), py::arg("x"));
    m.def("autocorr_template", [](std::size_t L, double E) { return to_array(autocorr_template(L, E).coeffs()); },
          py::arg("length"), py::arg("energy"));
    m.def("worst_case_papr", [](std::size_t L, double E) { return worst_case_papr(make_params(L, E)); },
          py::arg("length"), py::arg("energy"));

    m.def("random_channel", [](std::size_t K, std::uint64_t seed, double floor) {
        return to_array(random_channel(K, seed, floor).taps());
    }, py::arg("length"), py::arg("seed"), py::arg("edge_floor") = kDefaultEdgeFloor);
    m.def("transmit", [](const CArray& x, const CArray& h) { return to_array(transmit(to_seq(x), ChannelTaps(to_seq(h)))); },
          py::arg("x"), py::arg("h"));
    m.def("add_awgn", [](const CArray& y, double snr, std::uint64_t seed) { return to_array(add_awgn(to_seq(y), snr, seed)); },
          py::arg("y"), py::arg("rsnr_db"), py::arg("seed"));
    m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("index"));

    m.def(
        "apply_operator", [](const Eigen::MatrixXcd& X, std::size_t len1, std::size_t len2) {
            return to_array(apply_operator(LiftedMatrix{BlockShape{len1, len2}, X}).data());
        },
        py::arg("X"), py::arg("len1"), py::arg("len2"));
    m.def(
        "apply_adjoint", [](const CArray& v, std::size_t len1, std::size_t len2) {
            const auto s = to_seq(v);
            return apply_adjoint(MeasurementVector(BlockShape{len1, len2}, s.vector())).entries;
        },
        py::arg("v"), py::arg("len1"), py::arg("len2"));

    m.def(
        "recover_frame",
        [](const CArray& r, std::size_t L, std::size_t K, std::optional<double> energy) {
            const auto cfg = FrameConfig::make(L, K);
            const auto seq = to_seq(r);
            Recovery rec = [&] {
                py::gil_scoped_release release;
                return recover_frame(seq, cfg, energy);
            }();
            py::dict d;
            d["bits"] = rec.bits.to_string();
            d["x_hat"] = to_array(rec.x_hat);
            d["h_hat"] = to_array(rec.h_hat);
            d["energy"] = rec.E_hat;
            d["report"] = report_dict(rec.report);
            return d;
        },
        py::arg("r"), py::arg("length"), py::arg("chan_length"), py::arg("energy") = py::none());

    m.def(
        "run_trial",
        [](std::size_t L, std::size_t K, double E, double snr, std::uint64_t seed, bool known) {
            TrialConfig cfg;
            cfg.frame = FrameConfig::make(L, K);
            cfg.energy = E;
            cfg.rsnr_db = snr;
            cfg.seed = seed;
            cfg.known_energy = known;
            TrialResult t = [&] {
                py::gil_scoped_release release;
                return run_trial(cfg);
            }();
            py::dict d;
            d["failed"] = t.failed;
            d["stage"] = std::string(to_string(t.failed_stage));
            d["mse_data"] = t.mse_data;
            d["mse_channel"] = t.mse_channel;
            d["bit_errors"] = t.bit_errors;
            d["bits_total"] = t.bits_total;
            d["energy_estimate"] = t.energy_estimate;
            d["sent"] = t.sent.to_string();
            d["decoded"] = t.decoded.to_string();
            d["report"] = report_dict(t.solve);
            return d;
        },
        py::arg("length"), py::arg("chan_length"), py::arg("energy"), py::arg("rsnr_db") = kNoiseless,
        py::arg("seed") = 0, py::arg("known_energy") = false);

    m.def(
        "simulate",
        [](std::size_t L, std::size_t K, double E, const std::vector<double>& snrs, std::size_t trials,
           std::uint64_t seed, bool known, unsigned threads) {
            std::vector<TrialConfig> grid;
            for (double s : snrs) {
                TrialConfig cfg;
                cfg.frame = FrameConfig::make(L, K);
                cfg.energy = E;
                cfg.rsnr_db = s;
                cfg.known_energy = known;
                grid.push_back(cfg);
            }
            SweepOptions opts;
            opts.trials_per_point = trials;
            opts.master_seed = seed;
            opts.threads = threads;
            std::vector<SweepRow> rows;
            {
                py::gil_scoped_release release;
                rows = run_sweep(grid, opts);
            }
            py::list out;
            for (const auto& r : rows) out.append(row_dict(r));
            return out;
        },
        py::arg("length"), py::arg("chan_length"), py::arg("energy"), py::arg("rsnr_db"), py::arg("trials") = 500,
        py::arg("seed") = 1, py::arg("known_energy") = false, py::arg("threads") = 1);
}
