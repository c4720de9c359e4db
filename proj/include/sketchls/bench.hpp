#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sketchls/datagen.hpp"
#include "sketchls/precond.hpp"
#include "sketchls/sketch.hpp"

namespace sketchls {

enum class Method { IHS, AccIHS, PwGradient, AoptIHS };
std::string_view to_string(Method method);
Method parse_method(std::string_view name);

enum class InitPolicy { Standard, AoptForAll };
std::string_view to_string(InitPolicy policy);
InitPolicy parse_init_policy(std::string_view name);

struct ExperimentConfig {
    DataSpec data;
    std::size_t m = 1000;
    std::size_t n_iter = 20;
    std::size_t reps = 100;
    /// Absent → per-distribution default.
    std::optional<LambdaRule> lambda_rule;
    std::vector<Method> methods = {Method::IHS, Method::AccIHS, Method::PwGradient, Method::AoptIHS};
    double trim = 0.025;
    double tol = 1e-10;
    std::size_t max_iter = 500;
    InitPolicy init_policy = InitPolicy::Standard;
    /// Sketch used by the randomized baselines.
    SketchKind baseline_sketch = SketchKind::SRHT;

    LambdaRule resolved_lambda_rule() const {
        return lambda_rule ? *lambda_rule : default_lambda_rule(data.dist);
    }
    /// Throws InvalidArgument when an invariant is broken.
    void validate() const;
};

/// Mean after dropping ⌊frac·len⌋ values from each tail of the sorted input.
double trimmed_mean(std::span<const double> values, double frac);

struct CurveResult {
    std::string method;
    std::size_t iteration = 0;
    double mse1 = 0.0;
    double mse2 = 0.0;
    std::size_t failures = 0;
};

struct ConvergenceReport {
    std::vector<CurveResult> curves;
    /// Runs whose objective increased between iterations, per method, for
    /// methods using exact line search. Expected to be zero.
    std::vector<std::pair<std::string, std::size_t>> descent_violations;
};

/// MSE₁/MSE₂ per iteration for each method (trimmed means over replications).
ConvergenceReport run_convergence(const ExperimentConfig& cfg);

enum class Initializer { Full, SrhtCs, LevCs, AoptCs };
std::string_view to_string(Initializer init);

struct InitRow {
    std::size_t n = 0;
    Initializer initializer = Initializer::Full;
    double mse1 = 0.0;
    std::size_t failures = 0;
};

/// Classical-sketch initializers with total budget M = N·m rows, per n.
std::vector<InitRow> run_init_comparison(const ExperimentConfig& cfg,
                                         std::span<const std::size_t> n_grid);

enum class DeltaVariant {
    /// M(δ, 0)
    Zero,
    /// M(δ, λ̃)
    RuleLambda,
    /// (SX)ᵀ(SX) from one SRHT draw
    SRHT,
    /// λ̃·I control; Δ is exactly zero in exact arithmetic.
    RidgeOnly,
};
std::string_view to_string(DeltaVariant v);
DeltaVariant parse_delta_variant(std::string_view name);

struct DeltaRow {
    Distribution dist = Distribution::Normal;
    std::size_t d = 0;
    DeltaVariant variant = DeltaVariant::Zero;
    double delta_mean = 0.0;
    /// Largest |Δ| seen (used for the RidgeOnly control).
    double delta_max_abs = 0.0;
    std::size_t failures = 0;
};

std::vector<DeltaRow> run_delta_table(const ExperimentConfig& cfg,
                                      std::span<const DeltaVariant> variants);

enum class TimeStatus { Ok, Diverge, Cap };
std::string_view to_string(TimeStatus s);

struct TimeRow {
    std::string method;
    Distribution dist = Distribution::Normal;
    std::size_t d = 0;
    /// Means over replications that reached the tolerance; NaN when none did.
    double mean_seconds = 0.0;
    double mean_iters = 0.0;
    TimeStatus status = TimeStatus::Ok;
    std::size_t reached = 0;
    std::size_t diverged = 0;
    std::size_t capped = 0;
};

/// Time and iterations until ‖β̂_t − β̂^LS‖₂ ≤ cfg.tol, capped at cfg.max_iter.
/// Timing covers sketching, preconditioner construction and the iterations;
/// data generation and β̂^LS are excluded.
std::vector<TimeRow> run_time_to_precision(const ExperimentConfig& cfg);

enum class RidgeVariant { Ridged, NonRidged, Identity };
std::string_view to_string(RidgeVariant v);

/// A-optimal IHS loop with M ∈ {M(δ, λ̃), M(δ, 0), I}; curves use the
/// CurveResult layout with the variant in `method`.
ConvergenceReport run_ridge_ablation(const ExperimentConfig& cfg);

struct SweepRow {
    Distribution dist = Distribution::Normal;
    std::size_t d = 0;
    double proportion = 0.0;
    double delta_mean = 0.0;
    std::size_t failures = 0;
};

/// Δ(M(δ, p·Σ‖xᵢ‖²)) averaged over replications, one row per proportion.
std::vector<SweepRow> lambda_sweep(const ExperimentConfig& cfg, std::span<const double> proportions);

}  // namespace sketchls
