#pragma once

// Random draws and brute-force reference formulas shared by the unit tests.
// The references are written directly from the defining sums and avoid the
// library's own helpers.

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "huffcomm/seqcore.hpp"

namespace testsupport {

using huffcomm::ComplexSequence;
using huffcomm::cplx;

inline cplx gauss(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double a = n(rng);
    const double b = n(rng);
    return {a, b};
}

inline ComplexSequence random_sequence(std::mt19937_64& rng, std::size_t len) {
    std::vector<cplx> v(len);
    for (auto& c : v) c = gauss(rng);
    return ComplexSequence(std::move(v));
}

inline std::size_t random_length(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Eigen::MatrixXcd random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
    Eigen::MatrixXcd A(n, n);
    for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index q = 0; q < n; ++q) A(p, q) = gauss(rng);
    return 0.5 * (A + A.adjoint());
}

inline Eigen::MatrixXcd random_psd(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rank) {
    Eigen::MatrixXcd B(n, rank);
    for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index q = 0; q < rank; ++q) B(p, q) = gauss(rng);
    return B * B.adjoint();
}

// out[k] = sum_l u[l] v[k - l]
inline std::vector<cplx> ref_convolve(const std::vector<cplx>& u, const std::vector<cplx>& v) {
    std::vector<cplx> out(u.size() + v.size() - 1);
    for (std::size_t k = 0; k < out.size(); ++k) {
        for (std::size_t l = 0; l < u.size(); ++l) {
            if (k >= l && k - l < v.size()) out[k] += u[l] * v[k - l];
        }
    }
    return out;
}

// out[k] = sum_l u[l] conj(v[l + len(v) - 1 - k])
inline std::vector<cplx> ref_correlate(const std::vector<cplx>& u, const std::vector<cplx>& v) {
    const long lv = static_cast<long>(v.size());
    std::vector<cplx> out(u.size() + v.size() - 1);
    for (long k = 0; k < static_cast<long>(out.size()); ++k) {
        for (long l = 0; l < static_cast<long>(u.size()); ++l) {
            const long m = l + lv - 1 - k;
            if (m >= 0 && m < lv) out[static_cast<std::size_t>(k)] += u[static_cast<std::size_t>(l)] * std::conj(v[static_cast<std::size_t>(m)]);
        }
    }
    return out;
}

// sum_k c_k w^k by explicit powers
inline cplx ref_eval(const std::vector<cplx>& c, cplx w) {
    cplx acc{};
    for (std::size_t k = 0; k < c.size(); ++k) acc += c[k] * std::pow(w, static_cast<double>(k));
    return acc;
}

inline double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

}  // namespace testsupport
