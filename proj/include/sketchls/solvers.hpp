#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "sketchls/linalg.hpp"
#include "sketchls/precond.hpp"
#include "sketchls/rng.hpp"
#include "sketchls/sketch.hpp"

namespace sketchls {

enum class SolveStatus {
    /// Ran the requested number of iterations.
    Completed,
    /// Stopped early: step below tolerance, target precision reached, or a
    /// numerically zero search direction.
    Converged,
    /// Gradient norm grew 10× past its running minimum; iterations stopped.
    Diverged,
};

std::string_view to_string(SolveStatus status);

/// Relative slack allowed when checking that an exact-line-search objective is
/// non-increasing: f_t ≤ f_{t−1}·(1 + kObjectiveSlack). Covers rounding in the
/// residual sum once the iterates have converged.
inline constexpr double kObjectiveSlack = 1e-12;


// =============================================================================
/// Per-iteration record of an iterative solve. Index 0 is the initializer.
///
struct SolveTrace {
    std::vector<Vector> betas;
    /// Step lengths α₁…α_N; empty for unit-step methods.
    std::vector<double> alphas;
    /// f(β̂_t) = ½‖Xβ̂_t − y‖².
    std::vector<double> objective;
    /// ‖β̂_t − β̂^LS‖₂ when the least-squares solution was supplied.
    std::vector<double> dist_to_ls;
    /// Wall-clock seconds since the solve started, recorded after each entry.
    std::vector<double> elapsed;
    /// Sketched matrices S_tX, kept only when SolveOptions::record_sketches.
    std::vector<Matrix> sketches;
    SolveStatus status = SolveStatus::Completed;

    std::size_t iterations() const noexcept { return betas.empty() ? 0 : betas.size() - 1; }
    const Vector& final_beta() const { return betas.back(); }
};

/// True when trace.objective never rises by more than kObjectiveSlack.
bool objective_non_increasing(const SolveTrace& trace);

struct SolveOptions {
    /// Starting point; zero when absent.
    std::optional<Vector> beta0;
    /// Enables SolveTrace::dist_to_ls and the `target_dist` stop.
    std::optional<Vector> beta_ls;
    /// Stop once ‖β̂_t − β̂_{t−1}‖₂ ≤ step_tol (0 disables).
    double step_tol = 0.0;
    /// Stop once ‖β̂_t − β̂^LS‖₂ ≤ target_dist (0 disables; needs beta_ls).
    double target_dist = 0.0;
    bool record_sketches = false;
};

// --- closed-form estimators ----------------------------------------------------

Vector full_ls(const Matrix& X, std::span<const double> y);
/// (SXᵀSX)⁻¹SXᵀSy
Vector cs_estimate(const Matrix& sx, std::span<const double> sy);
/// (SXᵀSX)⁻¹Xᵀy with Xᵀy supplied.
Vector hs_estimate(const Matrix& sx, std::span<const double> xty);

struct AoptEstimate {
    Vector beta;
    SubsampleMask mask;
};

/// Least squares on the m rows of largest norm; the mask is returned for reuse
/// by the preconditioner.
AoptEstimate aopt_cs_estimate(const Matrix& X, std::span<const double> y, std::size_t m);

// --- iterative schemes ---------------------------------------------------------

/// Iterative Hessian sketch: fresh sketch each iteration, unit step,
/// β̂_t = β̂_{t−1} + (XᵀS_tᵀS_tX)⁻¹Xᵀ(y − Xβ̂_{t−1}).
SolveTrace ihs_solve(const Matrix& X, std::span<const double> y, std::size_t m, std::size_t iters,
                     SketchKind kind, Rng& rng, const SolveOptions& opts = {});

/// Same recursion with one sketch S₁ frozen for every iteration.
SolveTrace pw_gradient_solve(const Matrix& X, std::span<const double> y, std::size_t m,
                             std::size_t iters, SketchKind kind, Rng& rng,
                             const SolveOptions& opts = {});

/// Preconditioned conjugate gradient on XᵀXβ = Xᵀy with M = (SX)ᵀ(SX) from a
/// single sketch (Polak–Ribière update). Reconstructed baseline.
SolveTrace acc_ihs_solve(const Matrix& X, std::span<const double> y, std::size_t m,
                         std::size_t iters, SketchKind kind, Rng& rng,
                         const SolveOptions& opts = {});

/// Fixed-preconditioner steepest descent with exact line search:
///   v = Xᵀ(y − Xβ), u = M⁻¹v, p = Xu, α = vᵀu/pᵀp, β += αu.
/// A numerically zero direction ends the solve with status Converged.
SolveTrace preconditioned_descent(const Matrix& X, std::span<const double> y,
                                  const Preconditioner& M, std::size_t iters,
                                  const SolveOptions& opts = {});

/// A-optimal IHS: initialize by aopt_cs_estimate, build M(δ, λ) from the same
/// mask, then run preconditioned_descent. opts.beta0 is ignored.
SolveTrace aopt_ihs_solve(const Matrix& X, std::span<const double> y, std::size_t m,
                          std::size_t iters, double lambda, const SolveOptions& opts = {});

/// α = vᵀu / pᵀp. Throws ZeroDirection when ‖p‖ ≤ 1e-300.
double exact_alpha(std::span<const double> v, std::span<const double> u, std::span<const double> p);

// --- convergence theory ----------------------------------------------------------

/// Closed-form IHS iterate after the given sketches:
///   β̂_t = Π(I − A_i)β̂₀ + [I − Π(I − A_i)]β̂^LS,  A_i = (S_iX)ᵀ(S_iX))⁻¹XᵀX.
/// Test oracle; evaluates explicit d×d products.
Vector lemma1_trajectory(const Matrix& X, std::span<const double> y, std::span<const double> beta0,
                         std::span<const Matrix> sketches);

struct IsometryReport {
    double eps = 0.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
    bool satisfies = false;
};

/// Spectrum of G = UᵀSᵀSU with U the orthonormal basis of col(X), evaluated as
/// L⁻¹(SX)ᵀ(SX)L⁻ᵀ for XᵀX = LLᵀ. satisfies ⇔ ε₁ < ½ and ε₂ < 1 − ε₁.
IsometryReport isometry_eps(const Matrix& X, const Matrix& sx);

/// (max{ε₁, ε₂}/(1 − ε₁))^t · init_err. Requires ε₁ ∈ [0, ½), ε₂ ∈ [0, 1 − ε₁).
double theorem1_bound(double eps1, double eps2, std::size_t t, double init_err);

}  // namespace sketchls
