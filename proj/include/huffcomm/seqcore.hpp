#pragma once

// Complex sequences viewed both as time-domain signals and as polynomials.
//
// Storage convention: index k holds the coefficient of w^k with w = 1/z,
// which is the same thing as the time sample x_k. A z-domain zero zeta is a
// w-root 1/zeta.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace huffcomm {

using cplx = std::complex<double>;

class ComplexSequence {
public:
    explicit ComplexSequence(std::vector<cplx> coeffs);
    ComplexSequence(std::initializer_list<cplx> coeffs);

    /// Unit impulse of the given length with its single 1 at `position`.
    static ComplexSequence impulse(std::size_t length = 1, std::size_t position = 0);

    std::size_t size() const noexcept { return coeffs_.size(); }
    const cplx& operator[](std::size_t k) const { return coeffs_[k]; }
    const cplx& front() const noexcept { return coeffs_.front(); }
    const cplx& back() const noexcept { return coeffs_.back(); }
    std::span<const cplx> coeffs() const noexcept { return coeffs_; }
    const std::vector<cplx>& vector() const noexcept { return coeffs_; }
    auto begin() const noexcept { return coeffs_.begin(); }
    auto end() const noexcept { return coeffs_.end(); }

    /// First and last coefficient both nonzero.
    bool edge_nonvanishing() const noexcept;

    /// Squared Euclidean norm.
    double energy() const noexcept;

    ComplexSequence scaled(cplx factor) const;
    ComplexSequence slice(std::size_t first, std::size_t count) const;

    friend bool operator==(const ComplexSequence&, const ComplexSequence&) = default;

private:
    std::vector<cplx> coeffs_;
};

ComplexSequence operator+(const ComplexSequence& a, const ComplexSequence& b);
ComplexSequence operator-(const ComplexSequence& a, const ComplexSequence& b);

/// Aperiodic correlation a_{i,j}; entry k sits at lag k - zero_lag().
class CorrelationVector {
public:
    CorrelationVector(ComplexSequence values, std::size_t zero_lag);

    std::size_t size() const noexcept { return values_.size(); }
    std::size_t zero_lag() const noexcept { return zero_lag_; }
    const cplx& operator[](std::size_t k) const { return values_[k]; }
    const ComplexSequence& values() const noexcept { return values_; }
    std::span<const cplx> coeffs() const noexcept { return values_.coeffs(); }

    /// values[k] == conj(values[n-1-k]) within `tol` (absolute).
    bool is_conjugate_symmetric(double tol = 0.0) const noexcept;

    friend bool operator==(const CorrelationVector&, const CorrelationVector&) = default;

private:
    ComplexSequence values_;
    std::size_t zero_lag_;
};

/// out[k] = sum_l u[l] v[k-l].
ComplexSequence convolve(const ComplexSequence& u, const ComplexSequence& v);

/// out[k] = conj(u[L-1-k]).
ComplexSequence conj_reverse(const ComplexSequence& u);

/// convolve(u, conj_reverse(v)); zero lag at index v.size()-1.
CorrelationVector correlate(const ComplexSequence& u, const ComplexSequence& v);

/// Coefficients of scale * prod_k (w - roots[k]) in ascending powers of w.
ComplexSequence poly_from_roots(std::span<const cplx> roots, cplx scale);

/// sum_k u[k] w^k by Horner's scheme.
cplx poly_eval(const ComplexSequence& u, cplx w) noexcept;

/// L * max|u_k|^2 / sum|u_k|^2. Throws DomainError for the zero vector.
double papr(const ComplexSequence& u);
double papr_db(const ComplexSequence& u);

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace huffcomm
