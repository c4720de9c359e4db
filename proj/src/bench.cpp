#include "sketchls/bench.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <string>

#include "sketchls/error.hpp"
#include "sketchls/solvers.hpp"

namespace sketchls {

std::string_view to_string(Method method) {
    switch (method) {
        case Method::IHS: return "ihs";
        case Method::AccIHS: return "acc-ihs";
        case Method::PwGradient: return "pw-gradient";
        case Method::AoptIHS: return "aopt-ihs";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    for (auto m : {Method::IHS, Method::AccIHS, Method::PwGradient, Method::AoptIHS})
        if (to_string(m) == name) return m;
    throw Error(ErrorKind::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

std::string_view to_string(InitPolicy policy) {
    return policy == InitPolicy::Standard ? "standard" : "aopt-for-all";
}

InitPolicy parse_init_policy(std::string_view name) {
    if (name == "standard") return InitPolicy::Standard;
    if (name == "aopt-for-all") return InitPolicy::AoptForAll;
    throw Error(ErrorKind::InvalidArgument, "unknown init policy '" + std::string(name) + "'");
}

std::string_view to_string(Initializer init) {
    switch (init) {
        case Initializer::Full: return "FULL";
        case Initializer::SrhtCs: return "SRHT-CS";
        case Initializer::LevCs: return "LEV-CS";
        case Initializer::AoptCs: return "AOPT-CS";
    }
    return "?";
}

std::string_view to_string(DeltaVariant v) {
    switch (v) {
        case DeltaVariant::Zero: return "lambda0";
        case DeltaVariant::RuleLambda: return "lambda_rule";
        case DeltaVariant::SRHT: return "srht";
        case DeltaVariant::RidgeOnly: return "ridge_only";
    }
    return "?";
}

DeltaVariant parse_delta_variant(std::string_view name) {
    for (auto v : {DeltaVariant::Zero, DeltaVariant::RuleLambda, DeltaVariant::SRHT, DeltaVariant::RidgeOnly})
        if (to_string(v) == name) return v;
    throw Error(ErrorKind::InvalidArgument, "unknown delta variant '" + std::string(name) + "'");
}

std::string_view to_string(TimeStatus s) {
    switch (s) {
        case TimeStatus::Ok: return "ok";
        case TimeStatus::Diverge: return "diverge";
        case TimeStatus::Cap: return "cap";
    }
    return "?";
}

std::string_view to_string(RidgeVariant v) {
    switch (v) {
        case RidgeVariant::Ridged: return "ridged";
        case RidgeVariant::NonRidged: return "non-ridged";
        case RidgeVariant::Identity: return "identity";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    if (!(trim >= 0.0 && trim < 0.5)) throw Error(ErrorKind::InvalidArgument, "trim must be in [0, 0.5)");
    if (reps < 1) throw Error(ErrorKind::InvalidArgument, "reps must be >= 1");
    if (m < 1) throw Error(ErrorKind::InvalidArgument, "m must be >= 1");
    if (data.d < 1 || data.n < data.d) throw Error(ErrorKind::InvalidArgument, "need n >= d >= 1");
    if (methods.empty()) throw Error(ErrorKind::InvalidArgument, "methods must be non-empty");
    if (!(tol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be >= 0");
}

double trimmed_mean(std::span<const double> values, double frac) {
    if (values.empty()) throw Error(ErrorKind::EmptyInput, "trimmed mean of no values");
    if (!(frac >= 0.0 && frac < 0.5)) throw Error(ErrorKind::InvalidArgument, "trim fraction outside [0, 0.5)");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const auto cut = static_cast<std::size_t>(std::floor(frac * static_cast<double>(v.size())));
    const std::size_t lo = std::min(cut, (v.size() - 1) / 2);
    const std::size_t hi = v.size() - lo;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s / static_cast<double>(hi - lo);
}

namespace {

/// Runs fn(r) for r in [0, reps) on the OpenMP pool. Each replication owns its
/// data and streams; results land in index order. The first exception (by
/// index) is rethrown after the loop.
template <typename Result, typename Fn>
std::vector<Result> for_each_rep(std::size_t reps, Fn&& fn) {
    std::vector<Result> out(reps);
    std::vector<std::exception_ptr> errors(reps);
    const auto count = static_cast<std::ptrdiff_t>(reps);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t r = 0; r < count; ++r) {
        const auto ur = static_cast<std::size_t>(r);
        try {
            out[ur] = fn(ur);
        } catch (...) {
            errors[ur] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

DataSpec replication_spec(const DataSpec& base, std::size_t r) {
    DataSpec s = base;
    s.seed = base.seed ^ static_cast<std::uint64_t>(r);
    return s;
}

/// Stream for a method within a replication; independent of which other
/// methods run.
Rng method_rng(const ExperimentConfig& cfg, std::size_t r, std::uint64_t tag) {
    return Rng::for_replication(cfg.data.seed, r).fork(tag);
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

bool uses_line_search(Method m) { return m == Method::AoptIHS; }

SolveTrace run_method(Method method, const ExperimentConfig& cfg, const Dataset& ds, std::size_t iters,
                      Rng& rng, SolveOptions opts) {
    const std::size_t m = cfg.m;
    if (method == Method::AoptIHS) {
        const double lambda = lambda_rule(ds.x, cfg.resolved_lambda_rule());
        return aopt_ihs_solve(ds.x, ds.y, m, iters, lambda, opts);
    }
    if (cfg.init_policy == InitPolicy::AoptForAll) opts.beta0 = aopt_cs_estimate(ds.x, ds.y, m).beta;
    switch (method) {
        case Method::IHS: return ihs_solve(ds.x, ds.y, m, iters, cfg.baseline_sketch, rng, opts);
        case Method::AccIHS: return acc_ihs_solve(ds.x, ds.y, m, iters, cfg.baseline_sketch, rng, opts);
        case Method::PwGradient: return pw_gradient_solve(ds.x, ds.y, m, iters, cfg.baseline_sketch, rng, opts);
        case Method::AoptIHS: break;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown method");
}

/// Per-run squared errors for iterations 0..N; empty when the run failed.
struct RunCurve {
    bool ok = false;
    bool descent_ok = true;
    std::vector<double> e1;
    std::vector<double> e2;
};

RunCurve curve_of(const SolveTrace& trace, const Dataset& ds, std::size_t iters, bool check_descent) {
    RunCurve c;
    if (trace.status == SolveStatus::Diverged || trace.betas.empty()) return c;
    c.ok = true;
    c.descent_ok = !check_descent || objective_non_increasing(trace);
    c.e1.resize(iters + 1);
    c.e2.resize(iters + 1);
    for (std::size_t t = 0; t <= iters; ++t) {
        // A run that stopped early on a zero direction stays at its last iterate.
        const Vector& b = trace.betas[std::min(t, trace.betas.size() - 1)];
        c.e1[t] = sq_dist(b, ds.beta_star);
        c.e2[t] = sq_dist(b, ds.beta_ls);
    }
    return c;
}

void aggregate_curves(const std::string& name, std::size_t iters, double trim,
                      const std::vector<std::vector<RunCurve>>& per_rep, std::size_t slot,
                      ConvergenceReport& report) {
    std::size_t failures = 0;
    std::size_t violations = 0;
    std::vector<const RunCurve*> good;
    for (const auto& rep : per_rep) {
        const RunCurve& c = rep[slot];
        if (!c.ok) {
            ++failures;
            continue;
        }
        if (!c.descent_ok) ++violations;
        good.push_back(&c);
    }
    std::vector<double> col;
    for (std::size_t t = 0; t <= iters; ++t) {
        CurveResult row{name, t, std::numeric_limits<double>::quiet_NaN(),
                        std::numeric_limits<double>::quiet_NaN(), failures};
        if (!good.empty()) {
            col.clear();
            for (const RunCurve* c : good) col.push_back(c->e1[t]);
            row.mse1 = trimmed_mean(col, trim);
            col.clear();
            for (const RunCurve* c : good) col.push_back(c->e2[t]);
            row.mse2 = trimmed_mean(col, trim);
        }
        report.curves.push_back(std::move(row));
    }
    report.descent_violations.emplace_back(name, violations);
}

}  // namespace

// --- convergence curves -----------------------------------------------------------

ConvergenceReport run_convergence(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::size_t iters = cfg.n_iter;
    const auto per_rep = for_each_rep<std::vector<RunCurve>>(cfg.reps, [&](std::size_t r) {
        const Dataset ds = make_dataset(replication_spec(cfg.data, r));
        std::vector<RunCurve> curves;
        for (Method method : cfg.methods) {
            Rng rng = method_rng(cfg, r, static_cast<std::uint64_t>(method) + 1);
            try {
                const SolveTrace trace = run_method(method, cfg, ds, iters, rng, {});
                curves.push_back(curve_of(trace, ds, iters, uses_line_search(method)));
            } catch (const Error&) {
                curves.emplace_back();
            }
        }
        return curves;
    });

    ConvergenceReport report;
    for (std::size_t k = 0; k < cfg.methods.size(); ++k)
        aggregate_curves(std::string(to_string(cfg.methods[k])), iters, cfg.trim, per_rep, k, report);
    return report;
}

// --- initializer comparison ---------------------------------------------------------

std::vector<InitRow> run_init_comparison(const ExperimentConfig& cfg, std::span<const std::size_t> n_grid) {
    cfg.validate();
    const std::size_t budget = cfg.n_iter * cfg.m;
    constexpr Initializer kInits[] = {Initializer::Full, Initializer::SrhtCs, Initializer::LevCs,
                                      Initializer::AoptCs};
    std::vector<InitRow> rows;
    for (std::size_t n : n_grid) {
        if (n < budget)
            throw Error(ErrorKind::InvalidArgument,
                        "n = " + std::to_string(n) + " below the sketch budget " + std::to_string(budget));
        ExperimentConfig c = cfg;
        c.data.n = n;
        using Errors = std::array<double, 4>;
        const auto per_rep = for_each_rep<Errors>(cfg.reps, [&](std::size_t r) {
            const Dataset ds = make_dataset(replication_spec(c.data, r));
            Errors e;
            e.fill(std::numeric_limits<double>::quiet_NaN());
            auto attempt = [&](std::size_t k, auto&& estimate) {
                try {
                    e[k] = sq_dist(estimate(), ds.beta_star);
                } catch (const Error&) {
                }
            };
            attempt(0, [&] { return ds.beta_ls; });
            attempt(1, [&] {
                Rng rng = method_rng(c, r, 101);
                const SketchedData s = srht_apply(ds.x, ds.y, budget, rng);
                return cs_estimate(s.sx, s.sy);
            });
            attempt(2, [&] {
                Rng rng = method_rng(c, r, 102);
                const SketchedData s = leverage_sample(ds.x, ds.y, budget, rng);
                return cs_estimate(s.sx, s.sy);
            });
            attempt(3, [&] { return aopt_cs_estimate(ds.x, ds.y, budget).beta; });
            return e;
        });
        for (std::size_t k = 0; k < 4; ++k) {
            std::vector<double> vals;
            for (const auto& e : per_rep)
                if (std::isfinite(e[k])) vals.push_back(e[k]);
            InitRow row{n, kInits[k], std::numeric_limits<double>::quiet_NaN(), per_rep.size() - vals.size()};
            if (!vals.empty()) row.mse1 = trimmed_mean(vals, cfg.trim);
            rows.push_back(row);
        }
    }
    return rows;
}

// --- Δ table --------------------------------------------------------------------------

std::vector<DeltaRow> run_delta_table(const ExperimentConfig& cfg, std::span<const DeltaVariant> variants) {
    cfg.validate();
    const std::size_t nv = variants.size();
    const auto per_rep = for_each_rep<std::vector<double>>(cfg.reps, [&](std::size_t r) {
        const Dataset ds = make_dataset(replication_spec(cfg.data, r));
        const Matrix Q = gram(ds.x);
        const SubsampleMask mask = aopt_select(ds.x, cfg.m);
        const double lambda = lambda_rule(ds.x, cfg.resolved_lambda_rule());
        std::vector<double> out(nv, std::numeric_limits<double>::quiet_NaN());
        for (std::size_t k = 0; k < nv; ++k) {
            try {
                switch (variants[k]) {
                    case DeltaVariant::Zero: out[k] = delta_measure(build_m(ds.x, mask, 0.0), Q); break;
                    case DeltaVariant::RuleLambda: out[k] = delta_measure(build_m(ds.x, mask, lambda), Q); break;
                    case DeltaVariant::SRHT: {
                        Rng rng = method_rng(cfg, r, 201);
                        const SketchedData s = srht_apply(ds.x, {}, cfg.m, rng);
                        out[k] = delta_measure(gram(s.sx), Q);
                        break;
                    }
                    case DeltaVariant::RidgeOnly: {
                        Matrix M = Matrix::identity(ds.x.cols());
                        for (std::size_t j = 0; j < M.rows(); ++j) M(j, j) = lambda;
                        out[k] = delta_measure(M, Q);
                        break;
                    }
                }
            } catch (const Error&) {
            }
        }
        return out;
    });

    std::vector<DeltaRow> rows;
    for (std::size_t k = 0; k < nv; ++k) {
        DeltaRow row{cfg.data.dist, cfg.data.d, variants[k], std::numeric_limits<double>::quiet_NaN(), 0.0, 0};
        double sum = 0.0;
        std::size_t ok = 0;
        for (const auto& v : per_rep) {
            if (!std::isfinite(v[k])) {
                ++row.failures;
                continue;
            }
            sum += v[k];
            row.delta_max_abs = std::max(row.delta_max_abs, std::abs(v[k]));
            ++ok;
        }
        if (ok) row.delta_mean = sum / static_cast<double>(ok);
        rows.push_back(row);
    }
    return rows;
}

// --- time to precision ------------------------------------------------------------------

std::vector<TimeRow> run_time_to_precision(const ExperimentConfig& cfg) {
    cfg.validate();
    using Clock = std::chrono::steady_clock;
    struct Outcome {
        TimeStatus status = TimeStatus::Cap;
        double seconds = 0.0;
        double iters = 0.0;
    };
    const std::size_t nm = cfg.methods.size();
    const auto per_rep = for_each_rep<std::vector<Outcome>>(cfg.reps, [&](std::size_t r) {
        const Dataset ds = make_dataset(replication_spec(cfg.data, r));
        std::vector<Outcome> out(nm);
        for (std::size_t k = 0; k < nm; ++k) {
            Rng rng = method_rng(cfg, r, static_cast<std::uint64_t>(cfg.methods[k]) + 1);
            SolveOptions opts;
            opts.beta_ls = ds.beta_ls;
            opts.target_dist = cfg.tol;
            try {
                const auto t0 = Clock::now();
                const SolveTrace trace = run_method(cfg.methods[k], cfg, ds, cfg.max_iter, rng, opts);
                const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
                if (trace.status == SolveStatus::Diverged) {
                    out[k].status = TimeStatus::Diverge;
                } else if (!trace.dist_to_ls.empty() && trace.dist_to_ls.back() <= cfg.tol) {
                    out[k] = {TimeStatus::Ok, secs, static_cast<double>(trace.iterations())};
                }
            } catch (const Error&) {
                out[k].status = TimeStatus::Diverge;
            }
        }
        return out;
    });

    std::vector<TimeRow> rows;
    for (std::size_t k = 0; k < nm; ++k) {
        TimeRow row;
        row.method = std::string(to_string(cfg.methods[k]));
        row.dist = cfg.data.dist;
        row.d = cfg.data.d;
        double secs = 0.0;
        double iters = 0.0;
        for (const auto& o : per_rep) {
            switch (o[k].status) {
                case TimeStatus::Ok:
                    ++row.reached;
                    secs += o[k].seconds;
                    iters += o[k].iters;
                    break;
                case TimeStatus::Diverge: ++row.diverged; break;
                case TimeStatus::Cap: ++row.capped; break;
            }
        }
        if (row.reached) {
            row.mean_seconds = secs / static_cast<double>(row.reached);
            row.mean_iters = iters / static_cast<double>(row.reached);
        } else {
            row.mean_seconds = row.mean_iters = std::numeric_limits<double>::quiet_NaN();
        }
        row.status = row.diverged ? TimeStatus::Diverge : row.capped ? TimeStatus::Cap : TimeStatus::Ok;
        rows.push_back(row);
    }
    return rows;
}

// --- ridge ablation --------------------------------------------------------------------

ConvergenceReport run_ridge_ablation(const ExperimentConfig& cfg) {
    cfg.validate();
    constexpr RidgeVariant kVariants[] = {RidgeVariant::Ridged, RidgeVariant::NonRidged, RidgeVariant::Identity};
    const std::size_t iters = cfg.n_iter;
    const auto per_rep = for_each_rep<std::vector<RunCurve>>(cfg.reps, [&](std::size_t r) {
        const Dataset ds = make_dataset(replication_spec(cfg.data, r));
        const AoptEstimate init = aopt_cs_estimate(ds.x, ds.y, cfg.m);
        const double lambda = lambda_rule(ds.x, cfg.resolved_lambda_rule());
        std::vector<RunCurve> curves;
        for (RidgeVariant v : kVariants) {
            try {
                const Preconditioner M = v == RidgeVariant::Ridged      ? build_m(ds.x, init.mask, lambda)
                                         : v == RidgeVariant::NonRidged ? build_m(ds.x, init.mask, 0.0)
                                                                        : Preconditioner::identity(ds.x.cols());
                SolveOptions opts;
                opts.beta0 = init.beta;
                curves.push_back(curve_of(preconditioned_descent(ds.x, ds.y, M, iters, opts), ds, iters, true));
            } catch (const Error&) {
                curves.emplace_back();
            }
        }
        return curves;
    });
    ConvergenceReport report;
    for (std::size_t k = 0; k < std::size(kVariants); ++k)
        aggregate_curves(std::string(to_string(kVariants[k])), iters, cfg.trim, per_rep, k, report);
    return report;
}

// --- λ sweep ---------------------------------------------------------------------------

std::vector<SweepRow> lambda_sweep(const ExperimentConfig& cfg, std::span<const double> proportions) {
    cfg.validate();
    for (double p : proportions)
        if (!(p > 0.0) || !std::isfinite(p)) throw Error(ErrorKind::InvalidArgument, "proportions must be > 0");
    const std::size_t np = proportions.size();
    const auto per_rep = for_each_rep<std::vector<double>>(cfg.reps, [&](std::size_t r) {
        const Dataset ds = make_dataset(replication_spec(cfg.data, r));
        const Matrix Q = gram(ds.x);
        const SubsampleMask mask = aopt_select(ds.x, cfg.m);
        const double mass = lambda_rule(ds.x, LambdaRule::proportion(1.0));
        std::vector<double> out(np, std::numeric_limits<double>::quiet_NaN());
        for (std::size_t k = 0; k < np; ++k) {
            try {
                out[k] = delta_measure(build_m(ds.x, mask, proportions[k] * mass), Q);
            } catch (const Error&) {
            }
        }
        return out;
    });
    std::vector<SweepRow> rows;
    for (std::size_t k = 0; k < np; ++k) {
        SweepRow row{cfg.data.dist, cfg.data.d, proportions[k], std::numeric_limits<double>::quiet_NaN(), 0};
        double sum = 0.0;
        std::size_t ok = 0;
        for (const auto& v : per_rep) {
            if (std::isfinite(v[k])) {
                sum += v[k];
                ++ok;
            } else {
                ++row.failures;
            }
        }
        if (ok) row.delta_mean = sum / static_cast<double>(ok);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace sketchls
