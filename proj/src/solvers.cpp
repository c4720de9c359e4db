#include "sketchls/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "sketchls/error.hpp"

namespace sketchls {

std::string_view to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Completed: return "completed";
        case SolveStatus::Converged: return "converged";
        case SolveStatus::Diverged: return "diverged";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

void require_problem(const Matrix& X, std::span<const double> y) {
    if (y.size() != X.rows())
        throw Error(ErrorKind::DimensionMismatch,
                    "y length " + std::to_string(y.size()) + " != rows " + std::to_string(X.rows()));
}

Vector residual(const Matrix& X, std::span<const double> y, std::span<const double> beta) {
    Vector r = matvec(X, beta);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = y[i] - r[i];
    return r;
}

Vector initial_beta(const Matrix& X, const SolveOptions& opts) {
    if (!opts.beta0) return Vector(X.cols(), 0.0);
    if (opts.beta0->size() != X.cols()) throw Error(ErrorKind::DimensionMismatch, "beta0 length != cols");
    return *opts.beta0;
}

CholeskyFactor factor_at(const Matrix& M, std::size_t t) {
    try {
        return cholesky(M);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotPositiveDefinite) throw;
        throw Error(ErrorKind::NotPositiveDefinite,
                    "sketched Gram at iteration " + std::to_string(t) + " is not positive definite");
    }
}

/// Appends iterates to a trace and decides whether to stop.
class Recorder {
public:
    Recorder(SolveTrace& trace, const SolveOptions& opts, Clock::time_point start)
        : trace_(trace), opts_(opts), start_(start) {
        if (opts_.beta_ls && opts_.beta_ls->empty()) throw Error(ErrorKind::EmptyInput, "empty beta_ls");
    }

    /// Returns true when the solve should stop after this entry.
    bool record(const Vector& beta, std::span<const double> r) {
        const double half_rss = 0.5 * dot(r, r);
        trace_.betas.push_back(beta);
        trace_.objective.push_back(half_rss);
        bool stop = false;
        if (opts_.beta_ls) {
            const double dist = norm2(subtract(beta, *opts_.beta_ls));
            trace_.dist_to_ls.push_back(dist);
            if (opts_.target_dist > 0.0 && dist <= opts_.target_dist) stop = true;
        }
        if (opts_.step_tol > 0.0 && trace_.betas.size() >= 2) {
            const auto& prev = trace_.betas[trace_.betas.size() - 2];
            if (norm2(subtract(beta, prev)) <= opts_.step_tol) stop = true;
        }
        trace_.elapsed.push_back(std::chrono::duration<double>(Clock::now() - start_).count());
        if (stop) trace_.status = SolveStatus::Converged;
        return stop;
    }

private:
    SolveTrace& trace_;
    const SolveOptions& opts_;
    Clock::time_point start_;
};

/// Flags unit-step recursions whose gradient norm runs away. Growth below a
/// millionth of the starting gradient is rounding noise and is ignored.
class DivergenceMonitor {
public:
    bool diverged(std::span<const double> gradient) {
        const double g = norm2(gradient);
        if (!std::isfinite(g)) return true;
        if (first_) {
            first_ = false;
            g0_ = g;
            min_ = g;
            return false;
        }
        min_ = std::min(min_, g);
        return g > 10.0 * min_ && g > 1e-6 * g0_;
    }

private:
    bool first_ = true;
    double g0_ = 0.0;
    double min_ = 0.0;
};

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

/// Shared body of ihs_solve and pw_gradient_solve.
SolveTrace unit_step_ihs(const Matrix& X, std::span<const double> y, std::size_t m, std::size_t iters,
                         SketchKind kind, Rng& rng, const SolveOptions& opts, bool fresh) {
    require_problem(X, y);
    const auto start = Clock::now();
    SolveTrace trace;
    Recorder rec(trace, opts, start);
    DivergenceMonitor monitor;

    Vector beta = initial_beta(X, opts);
    Vector r = residual(X, y, beta);
    if (rec.record(beta, r)) return trace;

    std::optional<Matrix> frozen;
    std::optional<CholeskyFactor> frozen_fac;
    if (!fresh && iters > 0) {
        frozen = make_sketch(kind, X, {}, m, rng).sx;
        frozen_fac = factor_at(gram(*frozen), 1);
    }

    for (std::size_t t = 1; t <= iters; ++t) {
        std::optional<Matrix> sx;
        std::optional<CholeskyFactor> fac;
        if (fresh) {
            sx = make_sketch(kind, X, {}, m, rng).sx;
            fac = factor_at(gram(*sx), t);
        }
        const Matrix& sketch = fresh ? *sx : *frozen;
        const CholeskyFactor& F = fresh ? *fac : *frozen_fac;
        const Vector v = matvec_t(X, r);
        if (monitor.diverged(v)) {
            trace.status = SolveStatus::Diverged;
            return trace;
        }
        const Vector step = solve_spd(F, v);
        axpy(1.0, step, beta);
        if (!all_finite(beta)) {
            trace.status = SolveStatus::Diverged;
            return trace;
        }
        if (opts.record_sketches) trace.sketches.push_back(sketch);
        r = residual(X, y, beta);
        if (rec.record(beta, r)) return trace;
    }
    return trace;
}

SolveTrace descent_impl(const Matrix& X, std::span<const double> y, const Preconditioner& M,
                        std::size_t iters, Vector beta, const SolveOptions& opts, Clock::time_point start) {
    require_problem(X, y);
    if (M.dim() != X.cols()) throw Error(ErrorKind::DimensionMismatch, "preconditioner dim != cols");
    if (beta.size() != X.cols()) throw Error(ErrorKind::DimensionMismatch, "beta0 length != cols");
    SolveTrace trace;
    Recorder rec(trace, opts, start);

    Vector r = residual(X, y, beta);
    if (rec.record(beta, r)) return trace;

    for (std::size_t t = 1; t <= iters; ++t) {
        const Vector v = matvec_t(X, r);
        const Vector u = M.apply_inverse(v);
        const Vector p = matvec(X, u);
        double alpha = 0.0;
        try {
            alpha = exact_alpha(v, u, p);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ZeroDirection) throw;
            trace.status = SolveStatus::Converged;
            return trace;
        }
        trace.alphas.push_back(alpha);
        axpy(alpha, u, beta);
        r = residual(X, y, beta);
        if (rec.record(beta, r)) return trace;
    }
    return trace;
}

}  // namespace

// --- closed forms ----------------------------------------------------------------

Vector full_ls(const Matrix& X, std::span<const double> y) {
    require_problem(X, y);
    return solve_spd(cholesky(gram(X)), matvec_t(X, y));
}

Vector cs_estimate(const Matrix& sx, std::span<const double> sy) {
    require_problem(sx, sy);
    return solve_spd(cholesky(gram(sx)), matvec_t(sx, sy));
}

Vector hs_estimate(const Matrix& sx, std::span<const double> xty) {
    if (xty.size() != sx.cols()) throw Error(ErrorKind::DimensionMismatch, "Xᵀy length != cols");
    return solve_spd(cholesky(gram(sx)), xty);
}

AoptEstimate aopt_cs_estimate(const Matrix& X, std::span<const double> y, std::size_t m) {
    require_problem(X, y);
    SubsampleMask mask = aopt_select(X, m);
    const SketchedData sub = mask_rows(X, y, mask);
    return {cs_estimate(sub.sx, sub.sy), std::move(mask)};
}

// --- iterative ----------------------------------------------------------------------

SolveTrace ihs_solve(const Matrix& X, std::span<const double> y, std::size_t m, std::size_t iters,
                     SketchKind kind, Rng& rng, const SolveOptions& opts) {
    return unit_step_ihs(X, y, m, iters, kind, rng, opts, true);
}

SolveTrace pw_gradient_solve(const Matrix& X, std::span<const double> y, std::size_t m, std::size_t iters,
                             SketchKind kind, Rng& rng, const SolveOptions& opts) {
    return unit_step_ihs(X, y, m, iters, kind, rng, opts, false);
}

SolveTrace acc_ihs_solve(const Matrix& X, std::span<const double> y, std::size_t m, std::size_t iters,
                         SketchKind kind, Rng& rng, const SolveOptions& opts) {
    require_problem(X, y);
    const auto start = Clock::now();
    SolveTrace trace;
    Recorder rec(trace, opts, start);

    Vector beta = initial_beta(X, opts);
    Vector r = residual(X, y, beta);
    if (rec.record(beta, r) || iters == 0) return trace;

    const Matrix sx = make_sketch(kind, X, {}, m, rng).sx;
    const CholeskyFactor F = factor_at(gram(sx), 1);

    Vector g = matvec_t(X, r);  // −∇f
    Vector z = solve_spd(F, g);
    Vector dir = z;
    double gz = dot(g, z);

    for (std::size_t t = 1; t <= iters; ++t) {
        const Vector xd = matvec(X, dir);
        const double curvature = dot(xd, xd);
        if (!(std::sqrt(curvature) > 1e-300) || gz == 0.0) {
            trace.status = SolveStatus::Converged;
            return trace;
        }
        const double alpha = gz / curvature;
        trace.alphas.push_back(alpha);
        axpy(alpha, dir, beta);
        axpy(-alpha, xd, r);
        if (!all_finite(beta)) {
            trace.status = SolveStatus::Diverged;
            return trace;
        }
        if (opts.record_sketches) trace.sketches.push_back(sx);
        if (rec.record(beta, r)) return trace;

        const Vector g_new = matvec_t(X, r);
        const Vector z_new = solve_spd(F, g_new);
        const double gz_new = dot(g_new, z_new);
        // Polak–Ribière: gₖ₊₁ᵀ(zₖ₊₁ − zₖ) / gₖᵀzₖ, clipped at zero.
        const double pr = std::max(0.0, (gz_new - dot(g_new, z)) / gz);
        for (std::size_t j = 0; j < dir.size(); ++j) dir[j] = z_new[j] + pr * dir[j];
        g = g_new;
        z = z_new;
        gz = gz_new;
    }
    return trace;
}

SolveTrace preconditioned_descent(const Matrix& X, std::span<const double> y, const Preconditioner& M,
                                  std::size_t iters, const SolveOptions& opts) {
    return descent_impl(X, y, M, iters, initial_beta(X, opts), opts, Clock::now());
}

SolveTrace aopt_ihs_solve(const Matrix& X, std::span<const double> y, std::size_t m, std::size_t iters,
                          double lambda, const SolveOptions& opts) {
    const auto start = Clock::now();
    AoptEstimate init = aopt_cs_estimate(X, y, m);
    const Preconditioner M = build_m(X, init.mask, lambda);
    return descent_impl(X, y, M, iters, std::move(init.beta), opts, start);
}

bool objective_non_increasing(const SolveTrace& trace) {
    for (std::size_t t = 1; t < trace.objective.size(); ++t)
        if (trace.objective[t] > trace.objective[t - 1] * (1.0 + kObjectiveSlack)) return false;
    return true;
}

double exact_alpha(std::span<const double> v, std::span<const double> u, std::span<const double> p) {
    if (!(norm2(p) > 1e-300)) throw Error(ErrorKind::ZeroDirection, "search direction is numerically zero");
    return dot(v, u) / dot(p, p);
}

// --- theory ---------------------------------------------------------------------------

Vector lemma1_trajectory(const Matrix& X, std::span<const double> y, std::span<const double> beta0,
                         std::span<const Matrix> sketches) {
    require_problem(X, y);
    const std::size_t d = X.cols();
    if (beta0.size() != d) throw Error(ErrorKind::DimensionMismatch, "beta0 length != cols");
    const Matrix Q = gram(X);
    const Vector beta_ls = full_ls(X, y);

    Matrix P = Matrix::identity(d);
    Vector col(d);
    for (const Matrix& sx : sketches) {
        const CholeskyFactor F = cholesky(gram(sx));
        // I − A_i with A_i = M_i⁻¹Q, built column by column.
        Matrix step = Matrix::identity(d);
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t i = 0; i < d; ++i) col[i] = Q(i, j);
            const Vector a = solve_spd(F, col);
            for (std::size_t i = 0; i < d; ++i) step(i, j) -= a[i];
        }
        P = matmul(step, P);
    }
    const Vector p_beta0 = matvec(P, beta0);
    const Vector p_ls = matvec(P, beta_ls);
    Vector out(d);
    for (std::size_t i = 0; i < d; ++i) out[i] = p_beta0[i] + (beta_ls[i] - p_ls[i]);
    return out;
}

IsometryReport isometry_eps(const Matrix& X, const Matrix& sx) {
    if (sx.cols() != X.cols()) throw Error(ErrorKind::DimensionMismatch, "sketch cols != cols");
    CholeskyFactor L = [&] {
        try {
            return cholesky(gram(X));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotPositiveDefinite) throw;
            throw Error(ErrorKind::RankDeficient, "X does not have full column rank");
        }
    }();
    const Vector eig = pencil_eigvals(gram(sx), L);
    IsometryReport rep;
    rep.eps1 = std::max(0.0, 1.0 - eig.front());
    rep.eps2 = std::max(0.0, eig.back() - 1.0);
    rep.eps = std::max(std::abs(1.0 - eig.front()), std::abs(eig.back() - 1.0));
    rep.satisfies = rep.eps1 < 0.5 && rep.eps2 < 1.0 - rep.eps1;
    return rep;
}

double theorem1_bound(double eps1, double eps2, std::size_t t, double init_err) {
    if (!(eps1 >= 0.0 && eps1 < 0.5))
        throw Error(ErrorKind::HypothesisViolated, "eps1 = " + std::to_string(eps1) + " not in [0, 1/2)");
    if (!(eps2 >= 0.0 && eps2 < 1.0 - eps1))
        throw Error(ErrorKind::HypothesisViolated, "eps2 = " + std::to_string(eps2) + " not in [0, 1 - eps1)");
    const double rate = std::max(eps1, eps2) / (1.0 - eps1);
    return std::pow(rate, static_cast<double>(t)) * init_err;
}

}  // namespace sketchls
