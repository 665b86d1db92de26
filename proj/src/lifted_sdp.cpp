#include "huffcomm/lifted_sdp.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "huffcomm/errors.hpp"

namespace huffcomm {

namespace {

using Index = Eigen::Index;

struct BlockGeometry {
    std::size_t row_offset;
    std::size_t row_len;
    std::size_t col_offset;
    std::size_t col_len;
};

BlockGeometry geometry(const BlockShape& s, Block b) {
    switch (b) {
        case Block::auto11: return {0, s.len1, 0, s.len1};
        case Block::auto22: return {s.len1, s.len2, s.len1, s.len2};
        case Block::cross12: return {0, s.len1, s.len1, s.len2};
        case Block::cross21: return {s.len1, s.len2, 0, s.len1};
    }
    return {};
}

constexpr std::array<Block, 4> kBlocks{Block::auto11, Block::auto22, Block::cross12, Block::cross21};

void check_shape(const BlockShape& s) {
    if (s.len1 == 0 || s.len2 == 0) throw DimensionError("BlockShape: both parts must be nonempty");
}

// Measurements of a general (not necessarily Hermitian) matrix into `out`,
// which must already be sized for the shape.
void forward(const Eigen::MatrixXcd& X, MeasurementVector& out) {
    const BlockShape& s = out.shape();
    for (Block b : kBlocks) {
        const BlockGeometry g = geometry(s, b);
        auto a = out.block(b);
        std::fill(a.begin(), a.end(), cplx{});
        for (std::size_t m = 0; m < g.col_len; ++m) {
            const Index col = static_cast<Index>(g.col_offset + m);
            for (std::size_t l = 0; l < g.row_len; ++l) {
                a[l + g.col_len - 1 - m] += X(static_cast<Index>(g.row_offset + l), col);
            }
        }
    }
}

// Exact complex adjoint: every entry of X belongs to exactly one block
// diagonal, so the adjoint copies the measurement onto it.
void spread(const MeasurementVector& v, Eigen::MatrixXcd& Y) {
    const BlockShape& s = v.shape();
    for (Block b : kBlocks) {
        const BlockGeometry g = geometry(s, b);
        const auto a = v.block(b);
        for (std::size_t m = 0; m < g.col_len; ++m) {
            const Index col = static_cast<Index>(g.col_offset + m);
            for (std::size_t l = 0; l < g.row_len; ++l) {
                Y(static_cast<Index>(g.row_offset + l), col) = a[l + g.col_len - 1 - m];
            }
        }
    }
}

void hermitianize(Eigen::MatrixXcd& Y) {
    Eigen::MatrixXcd h = (Y + Y.adjoint()) * 0.5;
    Y = std::move(h);
}

void weight_template_block(MeasurementVector& v, double w) {
    if (w == 1.0) return;
    for (auto& c : v.block(Block::auto11)) c *= w;
}

// Reuses the eigensolver workspace across iterations.
class PsdProjector {
public:
    explicit PsdProjector(Index n) : solver_(n) {}

    // Projects H in place; returns the largest eigenvalue of the result.
    double project(Eigen::MatrixXcd& H) {
        solver_.compute(H, Eigen::ComputeEigenvectors);
        if (solver_.info() != Eigen::Success || !solver_.eigenvalues().allFinite())
            throw NumericalFailure("psd_project: eigensolver did not converge");
        const Eigen::VectorXd& lambda = solver_.eigenvalues();
        const Index n = lambda.size();
        Index first = n;
        while (first > 0 && lambda(first - 1) > 0.0) --first;
        const Index count = n - first;
        if (count == 0) {
            H.setZero();
            return 0.0;
        }
        const auto Vp = solver_.eigenvectors().rightCols(count);
        H.noalias() = Vp * lambda.tail(count).asDiagonal() * Vp.adjoint();
        return lambda(n - 1);
    }

private:
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver_;
};

}  // namespace

MeasurementVector::MeasurementVector(BlockShape shape)
    : shape_(shape), data_(shape.measurement_count(), cplx{}) {
    check_shape(shape_);
}

MeasurementVector::MeasurementVector(BlockShape shape, std::vector<cplx> data)
    : shape_(shape), data_(std::move(data)) {
    check_shape(shape_);
    if (data_.size() != shape_.measurement_count())
        throw DimensionError("MeasurementVector: expected " + std::to_string(shape_.measurement_count()) +
                             " entries, got " + std::to_string(data_.size()));
}

MeasurementVector MeasurementVector::from_blocks(BlockShape shape, std::span<const cplx> a11,
                                                 std::span<const cplx> a22, std::span<const cplx> a12,
                                                 std::span<const cplx> a21) {
    MeasurementVector v(shape);
    const std::array<std::span<const cplx>, 4> parts{a11, a22, a12, a21};
    for (std::size_t i = 0; i < 4; ++i) {
        auto dst = v.block(kBlocks[i]);
        if (parts[i].size() != dst.size())
            throw DimensionError("MeasurementVector::from_blocks: block " + std::to_string(i) + " has length " +
                                 std::to_string(parts[i].size()) + ", expected " + std::to_string(dst.size()));
        std::copy(parts[i].begin(), parts[i].end(), dst.begin());
    }
    return v;
}

std::size_t MeasurementVector::block_length(Block b) const noexcept {
    switch (b) {
        case Block::auto11: return 2 * shape_.len1 - 1;
        case Block::auto22: return 2 * shape_.len2 - 1;
        case Block::cross12:
        case Block::cross21: return shape_.n() - 1;
    }
    return 0;
}

std::size_t MeasurementVector::block_offset(Block b) const noexcept {
    std::size_t off = 0;
    for (Block x : kBlocks) {
        if (x == b) break;
        off += block_length(x);
    }
    return off;
}

std::span<const cplx> MeasurementVector::block(Block b) const {
    return std::span<const cplx>(data_).subspan(block_offset(b), block_length(b));
}

std::span<cplx> MeasurementVector::block(Block b) {
    return std::span<cplx>(data_).subspan(block_offset(b), block_length(b));
}

double MeasurementVector::norm() const noexcept {
    double s = 0.0;
    for (const auto& c : data_) s += std::norm(c);
    return std::sqrt(s);
}

cplx inner(const MeasurementVector& a, const MeasurementVector& b) {
    if (a.shape() != b.shape()) throw DimensionError("inner: measurement shapes differ");
    cplx s{};
    for (std::size_t k = 0; k < a.size(); ++k) s += a.data()[k] * std::conj(b.data()[k]);
    return s;
}

LiftedMatrix LiftedMatrix::outer(const ComplexSequence& x, BlockShape shape) {
    check_shape(shape);
    if (x.size() != shape.n()) throw DimensionError("LiftedMatrix::outer: vector length does not match shape");
    const Eigen::Map<const Eigen::VectorXcd> v(x.vector().data(), static_cast<Index>(x.size()));
    return LiftedMatrix{shape, v * v.adjoint()};
}

bool LiftedMatrix::is_hermitian(double tol) const {
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

cplx inner(const LiftedMatrix& a, const LiftedMatrix& b) {
    if (a.shape != b.shape) throw DimensionError("inner: matrix shapes differ");
    return (a.entries.array() * b.entries.array().conjugate()).sum();
}

MeasurementVector apply_operator(const LiftedMatrix& X) {
    check_shape(X.shape);
    const auto n = static_cast<Index>(X.shape.n());
    if (X.entries.rows() != n || X.entries.cols() != n)
        throw DimensionError("apply_operator: matrix size does not match block shape");
    MeasurementVector out(X.shape);
    forward(X.entries, out);
    return out;
}

LiftedMatrix apply_adjoint(const MeasurementVector& v) {
    const auto n = static_cast<Index>(v.shape().n());
    LiftedMatrix Y{v.shape(), Eigen::MatrixXcd::Zero(n, n)};
    spread(v, Y.entries);
    hermitianize(Y.entries);
    return Y;
}

LiftedMatrix psd_project(const LiftedMatrix& H) {
    const auto n = static_cast<Index>(H.shape.n());
    if (H.entries.rows() != n || H.entries.cols() != n)
        throw DimensionError("psd_project: matrix size does not match block shape");
    LiftedMatrix P = H;
    PsdProjector(n).project(P.entries);
    return P;
}

double normal_operator_norm(BlockShape shape, int iterations, double template_weight) {
    check_shape(shape);
    const auto n = static_cast<Index>(shape.n());
    // Deterministic, generic Hermitian start.
    Eigen::MatrixXcd H(n, n);
    for (Index p = 0; p < n; ++p) {
        for (Index q = 0; q < n; ++q) H(p, q) = cplx{1.0 + 0.1 * std::sin(1.0 + p * 7 + q), 0.05 * std::cos(3.0 * p - q)};
    }
    hermitianize(H);
    H /= H.norm();

    MeasurementVector m(shape);
    const double w2 = template_weight * template_weight;
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        forward(H, m);
        weight_template_block(m, w2);
        spread(m, H);
        hermitianize(H);
        lambda = H.norm();
        if (lambda == 0.0) break;
        H /= lambda;
    }
    return lambda;
}

namespace {

// Shared state of both solver methods: data, weights and helpers over the
// weighted objective 1/2 |W (A(X) - b)|^2, W = template weight on a_{1,1}.
class LeastSquaresProblem {
public:
    LeastSquaresProblem(const MeasurementVector& b, double template_weight)
        : b_(b), wb_(b), scratch_(b.shape()), w_(template_weight), n_(static_cast<Index>(b.shape().n())) {
        weight_template_block(wb_, w_);
        bnorm_ = b_.norm();
    }

    Index n() const { return n_; }
    const BlockShape& shape() const { return b_.shape(); }
    double bnorm() const { return bnorm_; }
    double weighted_bnorm() const { return wb_.norm(); }
    double weight() const { return w_; }
    const MeasurementVector& weighted_data() const { return wb_; }

    // Weighted residual into scratch(); returns half its squared norm.
    double residual(const Eigen::MatrixXcd& X) {
        forward(X, scratch_);
        weight_template_block(scratch_, w_);
        double f = 0.0;
        for (std::size_t k = 0; k < scratch_.size(); ++k) {
            scratch_.data()[k] -= wb_.data()[k];
            f += std::norm(scratch_.data()[k]);
        }
        return 0.5 * f;
    }

    // Gradient of the weighted objective at the X last passed to residual().
    void gradient_from_scratch(Eigen::MatrixXcd& G) {
        weight_template_block(scratch_, w_);
        spread(scratch_, G);
        hermitianize(G);
    }

    double relative_residual(const Eigen::MatrixXcd& X) const {
        MeasurementVector ax(shape());
        forward(X, ax);
        double s = 0.0;
        for (std::size_t k = 0; k < ax.size(); ++k) s += std::norm(ax.data()[k] - b_.data()[k]);
        return bnorm_ > 0.0 ? std::sqrt(s) / bnorm_ : std::sqrt(s);
    }

    // Spectral start: PSD part of A^*(b), rescaled to the best multiple.
    Eigen::MatrixXcd initial_point(PsdProjector& projector) const {
        Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(n_, n_);
        spread(b_, X);
        hermitianize(X);
        projector.project(X);
        MeasurementVector ax(shape());
        forward(X, ax);
        weight_template_block(ax, w_);
        const double denom = ax.norm() * ax.norm();
        if (denom > 0.0) X *= std::max(0.0, inner(wb_, ax).real() / denom);
        return X;
    }

private:
    const MeasurementVector& b_;
    MeasurementVector wb_;
    MeasurementVector scratch_;
    double w_;
    Index n_;
    double bnorm_ = 0.0;
};

struct Iterate {
    Eigen::MatrixXcd X;
    int iterations = 0;
    bool converged = false;
    double step = 0.0;
};

Iterate solve_projected_gradient(LeastSquaresProblem& prob, const SolverOptions& opts, PsdProjector& projector,
                                 std::vector<double>* history) {
    const Index n = prob.n();
    const double step = opts.step_shrink / normal_operator_norm(prob.shape(), opts.power_iters, prob.weight());

    Eigen::MatrixXcd X = prob.initial_point(projector);
    double f = prob.residual(X);
    Eigen::MatrixXcd Y = X;
    Eigen::MatrixXcd G(n, n);
    Eigen::MatrixXcd Xn(n, n);
    double t = 1.0;
    bool converged = prob.bnorm() == 0.0;
    int iters = 0;
    std::vector<double> objective;  // accepted iterates only
    if (history) history->push_back(prob.relative_residual(X));

    for (; iters < opts.max_iters && !converged; ++iters) {
        prob.residual(Y);
        prob.gradient_from_scratch(G);
        Xn = Y - step * G;
        projector.project(Xn);
        const double fn = prob.residual(Xn);

        if (opts.accelerate && fn > f && t > 1.0) {
            // Momentum overshot; restart from the last accepted iterate.
            Y = X;
            t = 1.0;
            continue;
        }

        const double change = (Xn - X).norm();
        const double scale = Xn.norm();
        if (opts.accelerate) {
            const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            Y = Xn + ((t - 1.0) / tn) * (Xn - X);
            t = tn;
        } else {
            Y = Xn;
        }
        X.swap(Xn);
        f = fn;
        if (history) history->push_back(prob.relative_residual(X));

        // A small step alone is not enough: on ill-conditioned noiseless
        // problems the iterates crawl while the objective still falls steadily.
        objective.push_back(f);
        const auto window = static_cast<std::size_t>(std::max(0, opts.plateau_window));
        const bool flat = window == 0 ||
                          (objective.size() > window && objective[objective.size() - 1 - window] - f <= opts.plateau_tol * f);
        if (change <= opts.rel_tol * scale && flat) converged = true;
        if (std::sqrt(2.0 * f) <= opts.residual_tol * prob.weighted_bnorm()) converged = true;
    }
    return Iterate{std::move(X), iters, converged, step};
}

// ADMM on X = Z with Z >= 0. The normal operator A^*W^2A replaces each entry by
// w^2 times its diagonal sum, so (A^*W^2A + rho I)^{-1} is explicit: entries
// keep 1/rho, and the diagonal-mean component gets 1/(w^2 d + rho).
Iterate solve_admm(LeastSquaresProblem& prob, const SolverOptions& opts, PsdProjector& projector,
                   std::vector<double>* history) {
    const Index n = prob.n();
    const BlockShape& shape = prob.shape();

    MeasurementVector diag_len(shape);
    forward(Eigen::MatrixXcd::Ones(n, n), diag_len);
    MeasurementVector weight_sq(shape);
    for (auto& c : weight_sq.data()) c = 1.0;
    weight_template_block(weight_sq, prob.weight() * prob.weight());

    Eigen::MatrixXcd Atb = Eigen::MatrixXcd::Zero(n, n);
    {
        MeasurementVector wwb = prob.weighted_data();
        weight_template_block(wwb, prob.weight());
        spread(wwb, Atb);
        hermitianize(Atb);
    }
    const double atb_norm = std::max(Atb.norm(), std::numeric_limits<double>::min());

    MeasurementVector m(shape);
    Eigen::MatrixXcd T(n, n);
    auto solve_linear = [&](const Eigen::MatrixXcd& rhs, double rho, Eigen::MatrixXcd& out) {
        forward(rhs, m);
        for (std::size_t k = 0; k < m.size(); ++k) {
            const double d = diag_len.data()[k].real();
            const double wd = weight_sq.data()[k].real() * d;
            m.data()[k] *= (1.0 / (wd + rho) - 1.0 / rho) / d;
        }
        spread(m, T);
        out = rhs / rho + T;
        hermitianize(out);
    };

    Eigen::MatrixXcd Z = prob.initial_point(projector);
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd X(n, n);
    Eigen::MatrixXcd Zold(n, n);
    double rho = opts.admm_rho;
    bool converged = prob.bnorm() == 0.0;
    int iters = 0;
    if (history) history->push_back(prob.relative_residual(Z));

    for (; iters < opts.max_iters && !converged; ++iters) {
        solve_linear(Atb + rho * (Z - U), rho, X);
        Zold = Z;
        const Eigen::MatrixXcd Xr = opts.admm_alpha * X + (1.0 - opts.admm_alpha) * Zold;
        Z = Xr + U;
        projector.project(Z);
        U += Xr - Z;

        const double primal = (X - Z).norm();
        const double dual = rho * (Z - Zold).norm();
        const double scale = std::max(X.norm(), Z.norm());
        if (history) history->push_back(prob.relative_residual(Z));

        if (primal <= opts.rel_tol * scale && dual <= opts.rel_tol * atb_norm) converged = true;
        if (std::sqrt(2.0 * prob.residual(Z)) <= opts.residual_tol * prob.weighted_bnorm()) converged = true;

        // Residual balancing; the linear step is explicit, so rho is free to change.
        if (!converged && opts.admm_adaptive && iters % 10 == 9) {
            if (primal > 10.0 * dual) {
                rho *= 2.0;
                U /= 2.0;
            } else if (dual > 10.0 * primal) {
                rho /= 2.0;
                U *= 2.0;
            }
        }
    }
    return Iterate{std::move(Z), iters, converged, rho};
}

}  // namespace

SolveResult solve_psd_least_squares(const MeasurementVector& b, const SolverOptions& opts, bool record_history) {
    const BlockShape shape = b.shape();
    const auto n = static_cast<Index>(shape.n());
    if (opts.max_iters < 1) throw DomainError("solve_psd_least_squares: max_iters must be positive");
    if (!(opts.template_weight > 0.0)) throw DomainError("solve_psd_least_squares: template weight must be positive");
    if (opts.plateau_window < 0) throw DomainError("solve_psd_least_squares: plateau_window must be non-negative");
    if (!(opts.admm_rho > 0.0)) throw DomainError("solve_psd_least_squares: admm_rho must be positive");

    LeastSquaresProblem prob(b, opts.template_weight);
    PsdProjector projector(n);
    SolveResult result{LiftedMatrix{shape, Eigen::MatrixXcd::Zero(n, n)}, {}, {}};
    std::vector<double>* history = record_history ? &result.residual_history : nullptr;

    Iterate it = opts.method == SolverMethod::admm ? solve_admm(prob, opts, projector, history)
                                                   : solve_projected_gradient(prob, opts, projector, history);

    result.X.entries = std::move(it.X);
    result.report.iterations = it.iterations;
    result.report.residual = prob.relative_residual(result.X.entries);
    result.report.step = it.step;
    result.report.converged = it.converged || result.report.residual <= opts.accept_residual;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(result.X.entries, Eigen::EigenvaluesOnly);
    if (es.info() == Eigen::Success && n >= 2) {
        const auto& ev = es.eigenvalues();
        const double l1 = ev(n - 1);
        result.report.rank1_gap = l1 > 0.0 ? std::max(0.0, ev(n - 2)) / l1 : 1.0;
    }
    return result;
}

Rank1 extract_rank1(const LiftedMatrix& X) {
    const auto n = static_cast<Index>(X.shape.n());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(X.entries, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw NumericalFailure("extract_rank1: eigensolver did not converge");
    const auto& ev = es.eigenvalues();
    const double l1 = ev(n - 1);
    if (!(l1 > 0.0)) throw NumericalFailure("extract_rank1: leading eigenvalue is not positive");
    const double l2 = n >= 2 ? std::max(0.0, ev(n - 2)) : 0.0;

    const Eigen::VectorXcd u = es.eigenvectors().col(n - 1) * std::sqrt(l1);
    return Rank1{ComplexSequence(std::vector<cplx>(u.data(), u.data() + u.size())), l2 / l1};
}

PhaseFixed fix_global_phase(const ComplexSequence& stacked, std::size_t L, std::size_t K) {
    if (stacked.size() != L + K) throw DimensionError("fix_global_phase: stacked length must be L + K");
    if (std::abs(stacked[0]) < 1e-12) throw NumericalFailure("fix_global_phase: first coefficient vanishes");
    std::vector<cplx> rotated = stacked.scaled(std::polar(1.0, -std::arg(stacked[0]))).vector();
    rotated[0] = std::abs(stacked[0]);
    const ComplexSequence all(std::move(rotated));
    return PhaseFixed{all.slice(0, L), conj_reverse(all.slice(L, K))};
}

}  // namespace huffcomm
