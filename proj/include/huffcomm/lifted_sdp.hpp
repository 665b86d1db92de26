#pragma once

// Lifted correlation measurements and the positive-semidefinite least-squares
// recovery.
//
// The unknown x = (x1; x2), x1 of length len1 and x2 of length len2, is lifted
// to X = x x^*. Every auto- and cross-correlation of the two parts is a sum
// along one diagonal of one block of X:
//
//   a_{i,j}[k] = sum_l X[off_i + l, off_j + l + len_j - 1 - k]
//
// which gives 4N - 4 linear measurements for N = len1 + len2.

#include <Eigen/Dense>
#include <array>
#include <span>
#include <vector>

#include "huffcomm/seqcore.hpp"

namespace huffcomm {

struct BlockShape {
    std::size_t len1 = 0;
    std::size_t len2 = 0;

    std::size_t n() const noexcept { return len1 + len2; }
    std::size_t measurement_count() const noexcept { return 4 * n() - 4; }
    friend bool operator==(const BlockShape&, const BlockShape&) = default;
};

/// Canonical block order of the measurement vector.
enum class Block { auto11 = 0, auto22 = 1, cross12 = 2, cross21 = 3 };

class MeasurementVector {
public:
    /// All-zero measurements for `shape`.
    explicit MeasurementVector(BlockShape shape);
    MeasurementVector(BlockShape shape, std::vector<cplx> data);

    static MeasurementVector from_blocks(BlockShape shape, std::span<const cplx> a11, std::span<const cplx> a22,
                                         std::span<const cplx> a12, std::span<const cplx> a21);

    const BlockShape& shape() const noexcept { return shape_; }
    std::size_t size() const noexcept { return data_.size(); }
    std::span<const cplx> data() const noexcept { return data_; }
    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> block(Block b) const;
    std::span<cplx> block(Block b);

    std::size_t block_offset(Block b) const noexcept;
    std::size_t block_length(Block b) const noexcept;

    double norm() const noexcept;

private:
    BlockShape shape_;
    std::vector<cplx> data_;
};

/// Complex inner product sum a_k conj(b_k).
cplx inner(const MeasurementVector& a, const MeasurementVector& b);

struct LiftedMatrix {
    BlockShape shape;
    Eigen::MatrixXcd entries;

    /// x x^* for a stacked vector of length shape.n().
    static LiftedMatrix outer(const ComplexSequence& x, BlockShape shape);
    bool is_hermitian(double tol = 1e-12) const;
};

/// Frobenius inner product sum A_pq conj(B_pq).
cplx inner(const LiftedMatrix& a, const LiftedMatrix& b);

MeasurementVector apply_operator(const LiftedMatrix& X);

/// Adjoint with respect to the real inner product Re<.,.> on Hermitian
/// matrices: measurements are spread along their diagonals, then the result
/// is Hermitianized.
LiftedMatrix apply_adjoint(const MeasurementVector& v);

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clamped).
/// Throws NumericalFailure if the eigensolver fails.
LiftedMatrix psd_project(const LiftedMatrix& H);

enum class SolverMethod {
    projected_gradient,  ///< (accelerated) projected gradient
    admm,                ///< operator splitting X = Z, Z >= 0
};

struct SolverOptions {
    SolverMethod method = SolverMethod::projected_gradient;
    int max_iters = 5000;
    double rel_tol = 1e-7;           ///< step test: |X_{t+1} - X_t|_F <= rel_tol |X_{t+1}|_F
    int plateau_window = 200;        ///< the step test also needs the objective flat over this many iterates
    double plateau_tol = 1e-3;       ///< relative objective decrease counted as flat
    double residual_tol = 1e-8;      ///< stop at once when |b - A(X)| <= residual_tol |b|
    double accept_residual = 1e-6;   ///< at max_iters, still converged if the residual is this small
    bool accelerate = true;          ///< momentum with restart on objective increase
    int power_iters = 50;
    double step_shrink = 0.95;
    double template_weight = 1.0;    ///< weight on the a_{1,1} block
    double admm_rho = 1.0;           ///< initial ADMM penalty
    bool admm_adaptive = true;       ///< residual balancing of the penalty
    double admm_alpha = 1.6;         ///< over-relaxation in (0, 2)
};

struct SolveReport {
    int iterations = 0;
    double residual = 0.0;  ///< |b - A(X)| / |b| (unweighted)
    double rank1_gap = 0.0;
    double step = 0.0;  ///< gradient step, or final ADMM penalty
    bool converged = false;

    friend bool operator==(const SolveReport&, const SolveReport&) = default;
};

struct SolveResult {
    LiftedMatrix X;
    SolveReport report;
    /// Unweighted residual after each accepted iterate; filled only when requested.
    std::vector<double> residual_history;
};

/// Largest eigenvalue of the (weighted) normal operator A^* A on Hermitian
/// matrices, by power iteration.
double normal_operator_norm(BlockShape shape, int iterations, double template_weight = 1.0);

/// argmin_{X >= 0} |b - A(X)|_2^2 by projected gradient.
SolveResult solve_psd_least_squares(const MeasurementVector& b, const SolverOptions& opts = {},
                                    bool record_history = false);

struct Rank1 {
    ComplexSequence x;
    double gap;  ///< lambda_2 / lambda_1
};

/// sqrt(lambda_1) u_1 from the leading eigenpair. Throws NumericalFailure if
/// lambda_1 <= 0.
Rank1 extract_rank1(const LiftedMatrix& X);

struct PhaseFixed {
    ComplexSequence x_hat;
    ComplexSequence h_hat;
};

/// Rotates x# so its first entry is real positive, then splits it into the
/// codeword (first len1 entries) and the channel conj_reverse(last len2 entries).
/// Throws NumericalFailure when |x#[0]| < 1e-12.
PhaseFixed fix_global_phase(const ComplexSequence& stacked, std::size_t L, std::size_t K);

}  // namespace huffcomm
