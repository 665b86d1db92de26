#include "huffcomm/seqcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "huffcomm/errors.hpp"

namespace huffcomm {

ComplexSequence::ComplexSequence(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw DimensionError("ComplexSequence: length must be at least 1");
}

ComplexSequence::ComplexSequence(std::initializer_list<cplx> coeffs)
    : ComplexSequence(std::vector<cplx>(coeffs)) {}

ComplexSequence ComplexSequence::impulse(std::size_t length, std::size_t position) {
    if (position >= length) throw DimensionError("impulse: position outside sequence");
    std::vector<cplx> c(length, cplx{0.0, 0.0});
    c[position] = 1.0;
    return ComplexSequence(std::move(c));
}

bool ComplexSequence::edge_nonvanishing() const noexcept {
    return coeffs_.front() != cplx{} && coeffs_.back() != cplx{};
}

double ComplexSequence::energy() const noexcept {
    return std::accumulate(coeffs_.begin(), coeffs_.end(), 0.0,
                           [](double acc, const cplx& c) { return acc + std::norm(c); });
}

ComplexSequence ComplexSequence::scaled(cplx factor) const {
    std::vector<cplx> c(coeffs_);
    for (auto& v : c) v *= factor;
    return ComplexSequence(std::move(c));
}

ComplexSequence ComplexSequence::slice(std::size_t first, std::size_t count) const {
    if (count == 0 || first + count > coeffs_.size())
        throw DimensionError("slice: range outside sequence");
    return ComplexSequence(std::vector<cplx>(coeffs_.begin() + static_cast<std::ptrdiff_t>(first),
                                             coeffs_.begin() + static_cast<std::ptrdiff_t>(first + count)));
}

namespace {

template <class Op>
ComplexSequence elementwise(const ComplexSequence& a, const ComplexSequence& b, Op op) {
    if (a.size() != b.size()) throw DimensionError("elementwise: length mismatch");
    std::vector<cplx> c(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) c[k] = op(a[k], b[k]);
    return ComplexSequence(std::move(c));
}

}  // namespace

ComplexSequence operator+(const ComplexSequence& a, const ComplexSequence& b) {
    return elementwise(a, b, std::plus<>{});
}

ComplexSequence operator-(const ComplexSequence& a, const ComplexSequence& b) {
    return elementwise(a, b, std::minus<>{});
}

CorrelationVector::CorrelationVector(ComplexSequence values, std::size_t zero_lag)
    : values_(std::move(values)), zero_lag_(zero_lag) {
    if (zero_lag_ >= values_.size()) throw DimensionError("CorrelationVector: zero lag outside range");
}

bool CorrelationVector::is_conjugate_symmetric(double tol) const noexcept {
    const std::size_t n = values_.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(values_[k] - std::conj(values_[n - 1 - k])) > tol) return false;
    }
    return true;
}

ComplexSequence convolve(const ComplexSequence& u, const ComplexSequence& v) {
    std::vector<cplx> out(u.size() + v.size() - 1, cplx{});
    for (std::size_t l = 0; l < u.size(); ++l) {
        for (std::size_t m = 0; m < v.size(); ++m) out[l + m] += u[l] * v[m];
    }
    return ComplexSequence(std::move(out));
}

ComplexSequence conj_reverse(const ComplexSequence& u) {
    std::vector<cplx> out(u.size());
    const std::size_t n = u.size();
    for (std::size_t k = 0; k < n; ++k) out[k] = std::conj(u[n - 1 - k]);
    return ComplexSequence(std::move(out));
}

CorrelationVector correlate(const ComplexSequence& u, const ComplexSequence& v) {
    return CorrelationVector(convolve(u, conj_reverse(v)), v.size() - 1);
}

ComplexSequence poly_from_roots(std::span<const cplx> roots, cplx scale) {
    if (scale == cplx{}) throw DomainError("poly_from_roots: scale must be nonzero");

    // Leja order: start from the largest root, then repeatedly take the root
    // farthest (in product-of-distances sense) from those already used. Keeps
    // partial products bounded when roots cluster near a circle.
    std::vector<cplx> ordered(roots.begin(), roots.end());
    if (!ordered.empty()) {
        auto first = std::max_element(ordered.begin(), ordered.end(),
                                      [](const cplx& a, const cplx& b) { return std::abs(a) < std::abs(b); });
        std::iter_swap(ordered.begin(), first);
        std::vector<double> log_dist(ordered.size(), 0.0);
        for (std::size_t i = 1; i < ordered.size(); ++i) {
            std::size_t best = i;
            double best_val = -std::numeric_limits<double>::infinity();
            for (std::size_t j = i; j < ordered.size(); ++j) {
                log_dist[j] += std::log(std::abs(ordered[j] - ordered[i - 1]));
                if (log_dist[j] > best_val) {
                    best_val = log_dist[j];
                    best = j;
                }
            }
            std::swap(ordered[i], ordered[best]);
            std::swap(log_dist[i], log_dist[best]);
        }
    }

    std::vector<cplx> c{cplx{1.0, 0.0}};
    c.reserve(ordered.size() + 1);
    for (const cplx& rho : ordered) {
        // (c0 + c1 w + ...) * (w - rho)
        c.push_back(cplx{});
        for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - rho * c[k];
        c[0] = -rho * c[0];
    }
    for (auto& v : c) v *= scale;
    return ComplexSequence(std::move(c));
}

cplx poly_eval(const ComplexSequence& u, cplx w) noexcept {
    cplx acc{};
    for (std::size_t k = u.size(); k-- > 0;) acc = acc * w + u[k];
    return acc;
}

double papr(const ComplexSequence& u) {
    const double total = u.energy();
    if (total == 0.0) throw DomainError("papr: zero sequence");
    double peak = 0.0;
    for (const cplx& c : u) peak = std::max(peak, std::norm(c));
    return static_cast<double>(u.size()) * peak / total;
}

double papr_db(const ComplexSequence& u) { return 10.0 * std::log10(papr(u)); }

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw DimensionError("max_abs_diff: length mismatch");
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

}  // namespace huffcomm
