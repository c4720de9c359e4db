// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "../test_util.hpp"
#include "sketchls/bench.hpp"
#include "sketchls/datagen.hpp"
#include "sketchls/error.hpp"
#include "sketchls/precond.hpp"
#include "sketchls/sketch.hpp"
#include "sketchls/solvers.hpp"

namespace fs = std::filesystem;
using namespace sketchls;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    const char* id;
    const char* title;
    double budget_seconds;
    std::function<Verdict()> check;
};

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

Dataset dataset(std::size_t n, std::size_t d, std::uint64_t seed) {
    DataSpec s;
    s.n = n;
    s.d = d;
    s.seed = seed;
    return make_dataset(s);
}

Verdict closed_form_trajectory() {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Dataset ds = dataset(256, 5, 1000 + seed);
        SolveOptions opts;
        opts.record_sketches = true;
        opts.beta0 = testing::random_vector(5, seed);
        Rng rng(seed);
        const SolveTrace t = ihs_solve(ds.x, ds.y, 64, 5, SketchKind::SRHT, rng, opts);
        if (t.sketches.size() != 5) return {false, fmt("seed %llu recorded %zu sketches", (unsigned long long)seed, t.sketches.size())};
        for (std::size_t k = 0; k <= 5; ++k) {
            const Vector ref = lemma1_trajectory(ds.x, ds.y, *opts.beta0, std::span(t.sketches).first(k));
            worst = std::max(worst, testing::rel_diff(t.betas[k], ref));
        }
    }
    return {worst <= 1e-8, fmt("max relative gap %.3g over 50 runs x 6 iterates", worst)};
}

Verdict geometric_bound() {
    std::size_t pairs = 0;
    std::size_t violations = 0;
    std::size_t energy_violations = 0;
    double tightest = 0.0;
    for (std::uint64_t seed = 0; pairs < 200 && seed < 500; ++seed) {
        const Dataset ds = dataset(1024, 5, 2000 + seed);
        SolveOptions opts;
        opts.record_sketches = true;
        Rng rng(seed);
        const SolveTrace t = ihs_solve(ds.x, ds.y, 256, 5, SketchKind::SRHT, rng, opts);
        const double init = norm2(subtract(t.betas[0], ds.beta_ls));
        const double init_energy = norm2(matvec(ds.x, subtract(t.betas[0], ds.beta_ls)));
        double e1 = 0.0, e2 = 0.0;
        for (std::size_t k = 1; k <= t.sketches.size() && pairs < 200; ++k) {
            const IsometryReport r = isometry_eps(ds.x, t.sketches[k - 1]);
            if (!r.satisfies) break;
            e1 = std::max(e1, r.eps1);
            e2 = std::max(e2, r.eps2);
            if (!(e2 < 1 - e1)) break;
            const double bound = theorem1_bound(e1, e2, k, init);
            const double err = norm2(subtract(t.betas[k], ds.beta_ls));
            if (err > bound * (1 + 1e-9) + 1e-12) ++violations;
            tightest = std::max(tightest, err / bound);
            const double energy = norm2(matvec(ds.x, subtract(t.betas[k], ds.beta_ls)));
            if (energy > theorem1_bound(e1, e2, k, init_energy) * (1 + 1e-9) + 1e-12) ++energy_violations;
            ++pairs;
        }
    }
    return {pairs == 200 && violations == 0,
            fmt("%zu pairs checked, %zu violations, max error/bound %.3g; same bound in the X-weighted norm: %zu "
                "violations",
                pairs, violations, tightest, energy_violations)};
}

long double residual_slope(const Matrix& X, std::span<const double> y, const Vector& at, const Vector& dir) {
    long double s = 0;
    for (std::size_t i = 0; i < X.rows(); ++i) {
        long double xp = 0, xb = 0;
        for (std::size_t j = 0; j < X.cols(); ++j) {
            xp += static_cast<long double>(X(i, j)) * dir[j];
            xb += static_cast<long double>(X(i, j)) * at[j];
        }
        s += xp * (xb - y[i]);
    }
    return s;
}

Verdict line_search() {
    double worst_stationarity = 0.0;
    std::size_t steps = 0;
    std::size_t monotone_failures = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Dataset ds = dataset(4096, 20, 3000 + seed);
        const double lambda = lambda_rule(ds.x, LambdaRule::concentrated());
        const SolveTrace t = aopt_ihs_solve(ds.x, ds.y, 200, 5, lambda);
        if (!objective_non_increasing(t)) ++monotone_failures;
        for (std::size_t k = 0; k + 1 < t.betas.size(); ++k) {
            const Vector dir = subtract(t.betas[k + 1], t.betas[k]);
            const long double at_start = residual_slope(ds.x, ds.y, t.betas[k], dir);
            const long double at_step = residual_slope(ds.x, ds.y, t.betas[k + 1], dir);
            worst_stationarity = std::max(worst_stationarity, static_cast<double>(std::fabs(at_step / at_start)));
            ++steps;
        }
    }
    double worst_unit = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Dataset ds = dataset(512, 6, 4000 + seed);
        const SolveTrace t = preconditioned_descent(ds.x, ds.y, Preconditioner::from_matrix(gram(ds.x)), 1);
        worst_unit = std::max(worst_unit, std::abs(t.alphas.at(0) - 1.0));
    }
    return {steps == 100 && worst_stationarity <= 1e-8 && worst_unit <= 1e-10 && monotone_failures == 0,
            fmt("%zu steps, max |psi'|/|psi'(0)| %.3g, max |alpha-1| with exact M %.3g, %zu non-monotone runs", steps,
                worst_stationarity, worst_unit, monotone_failures)};
}

Verdict trace_bounds() {
    std::size_t instances = 0;
    std::size_t checks = 0;
    std::size_t violations = 0;
    for (std::uint64_t seed = 0; instances < 200; ++seed) {
        Rng rng(seed);
        const std::size_t n = 8 + rng.below(57);
        const std::size_t d = 1 + rng.below(5);
        const Matrix X = testing::random_matrix(n, d, 7919 * seed + 3);
        const Matrix Q = gram(X);
        ++instances;
        for (std::size_t m = d; m <= n; ++m) {
            const SubsampleMask mask = aopt_select(X, m);
            Matrix unscaled(d, d);
            for (std::size_t i : mask.selected())
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t b = 0; b < d; ++b) unscaled(a, b) += X(i, a) * X(i, b);
            const double c = sym_eigvals(unscaled).front();
            if (!(c > 1e-12)) continue;
            const Matrix inv = testing::naive_inverse(unscaled);
            if (inv.trace() > aopt_trace_bound(X, mask, c) * (1 + 1e-10)) ++violations;
            Matrix scaled = unscaled;
            for (double& v : scaled.data()) v *= static_cast<double>(n) / static_cast<double>(m);
            const Matrix sinv = testing::naive_inverse(scaled);
            const double cov = testing::naive_matmul(testing::naive_matmul(sinv, Q), sinv).trace();
            if (cov > hs_cov_trace_bound(X, mask, c) * (1 + 1e-10)) ++violations;
            ++checks;
        }
    }
    return {violations == 0 && checks > 0,
            fmt("%zu instances, %zu feasible masks, %zu violations", instances, checks, violations)};
}

ExperimentConfig desk_config(std::size_t n, std::size_t d, std::size_t m, std::size_t reps) {
    ExperimentConfig cfg;
    cfg.data.n = n;
    cfg.data.d = d;
    cfg.data.seed = 20240501;
    cfg.m = m;
    cfg.reps = reps;
    return cfg;
}

Verdict delta_table() {
    const ExperimentConfig cfg = desk_config(1 << 14, 50, 1000, 100);
    const std::vector<DeltaVariant> variants = {DeltaVariant::Zero, DeltaVariant::RuleLambda, DeltaVariant::SRHT,
                                                DeltaVariant::RidgeOnly};
    const auto rows = run_delta_table(cfg, variants);
    const double zero = rows[0].delta_mean, rule = rows[1].delta_mean, srht = rows[2].delta_mean;
    const double control = rows[3].delta_max_abs;
    std::size_t failures = 0;
    for (const auto& r : rows) failures += r.failures;
    const bool sign = zero < 0 && rule > 0.5 && rule > srht && srht > zero;
    return {sign && control <= 1e-9 && failures == 0,
            fmt("lambda0 %.4g, lambda_rule %.4g, srht %.4g, max|control| %.3g, failures %zu", zero, rule, srht,
                control, failures)};
}

Verdict initializers() {
    ExperimentConfig cfg = desk_config(1 << 11, 10, 100, 100);
    cfg.n_iter = 10;
    const std::vector<std::size_t> grid = {1 << 11, 1 << 13, 1 << 14};
    const auto rows = run_init_comparison(cfg, grid);
    bool ok = rows.size() == 12;
    std::string detail;
    double prev = INFINITY;
    for (std::size_t k = 0; rows.size() == 12 && k < grid.size(); ++k) {
        const double srht = rows[4 * k + 1].mse1, lev = rows[4 * k + 2].mse1, aopt = rows[4 * k + 3].mse1;
        ok = ok && aopt <= std::min(srht, lev) && aopt <= prev;
        prev = aopt;
        detail += fmt("%sn=%zu aopt %.3g srht %.3g lev %.3g", k ? "; " : "", grid[k], aopt, srht, lev);
    }
    return {ok, detail};
}

Verdict time_to_precision() {
    ExperimentConfig cfg = desk_config(1 << 14, 50, 1000, 50);
    cfg.tol = 1e-10;
    cfg.methods = {Method::IHS, Method::AoptIHS};
    const auto rows = run_time_to_precision(cfg);
    const TimeRow& ihs = rows[0];
    const TimeRow& aopt = rows[1];
    const bool ok = aopt.mean_iters < ihs.mean_iters && aopt.mean_iters >= 5 && aopt.mean_iters <= 30;
    return {ok, fmt("mean iterations aopt-ihs %.4g (%s), ihs %.4g (%s); mean seconds %.3g vs %.3g", aopt.mean_iters,
                    std::string(to_string(aopt.status)).c_str(), ihs.mean_iters,
                    std::string(to_string(ihs.status)).c_str(), aopt.mean_seconds, ihs.mean_seconds)};
}

Verdict full_sketch_isometry() {
    double worst_eps = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const std::size_t n = 100 + rng.below(900);
        const std::size_t d = 1 + rng.below(12);
        const Matrix X = testing::random_matrix(n, d, 5000 + seed);
        const SketchedData s = srht_apply(X, {}, next_pow2(n), rng);
        const IsometryReport r = isometry_eps(X, s.sx);
        worst_eps = std::max({worst_eps, r.eps1, r.eps2});
    }
    double worst_fwht = 0.0;
    for (std::size_t len = 1; len <= (1u << 12); len *= 2) {
        const Vector v = testing::random_vector(len, len);
        const Vector hv = fwht(v);
        const Vector back = fwht(hv);
        worst_fwht = std::max(worst_fwht, testing::max_abs_diff(back, v) / (1 + norm2(v)));
        worst_fwht = std::max(worst_fwht, std::abs(norm2(hv) - norm2(v)) / (1 + norm2(v)));
    }
    return {worst_eps <= 1e-9 && worst_fwht <= 1e-12,
            fmt("max eps over 20 instances %.3g, max fwht involution/isometry gap %.3g", worst_eps, worst_fwht)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Drops the wall-clock column so only deterministic fields are compared.
std::string without_column(const std::string& text, std::size_t col) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (col < cells.size()) cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(col));
        for (std::size_t j = 0; j < cells.size(); ++j) out += (j ? "," : "") + cells[j];
        out += '\n';
    }
    return out;
}

Verdict thread_determinism() {
    const fs::path root = fs::temp_directory_path() / "sketchls_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    {
        std::ofstream cfg(root / "config.json");
        cfg << R"({"dist": ["normal", "t2"], "d": 10, "n": 4096, "m": 100, "n_iter": 5, "reps": 12, "seed": 77,
                   "n_grid": [2048, 4096], "proportions": [0.05, 0.5], "tol": 1e-8, "max_iter": 300})";
    }
    struct Job {
        std::string sub, stem;
        bool single;
    };
    const std::vector<Job> jobs = {{"converge", "converge_mse", true}, {"ridge", "ridge_mse", true},
                                   {"init", "init_mse", true},         {"delta", "delta", false},
                                   {"time", "time", false},            {"lambda-sweep", "lambda_sweep", false}};
    std::size_t identical = 0;
    std::string mismatched;
    for (const Job& job : jobs) {
        const fs::path first = root / (job.sub + "_t1");
        const fs::path second = root / (job.sub + "_t8");
        fs::path cfg = root / "config.json";
        if (job.single) {
            std::ofstream(root / "single.json")
                << R"({"dist": "normal", "d": 10, "n": 4096, "m": 100, "n_iter": 5, "reps": 12, "seed": 77,
                       "n_grid": [2048, 4096]})";
            cfg = root / "single.json";
        }
        const std::string base = std::string("\"") + SKETCHLS_CLI_PATH + "\" ";
        const std::string a = base + "--threads 1 --out-dir \"" + first.string() + "\" bench --config \"" +
                              cfg.string() + "\" " + job.sub + " > /dev/null";
        const std::string b = base + "--threads 8 --out-dir \"" + second.string() + "\" bench --config \"" +
                              (first / (job.stem + ".manifest.json")).string() + "\" " + job.sub + " > /dev/null";
        if (std::system(a.c_str()) != 0 || std::system(b.c_str()) != 0) {
            mismatched += " " + job.sub + "(exit)";
            continue;
        }
        std::string x = slurp(first / (job.stem + ".csv"));
        std::string y = slurp(second / (job.stem + ".csv"));
        if (job.sub == "time") {
            x = without_column(x, 3);
            y = without_column(y, 3);
        }
        if (!x.empty() && x == y)
            ++identical;
        else
            mismatched += " " + job.sub;
    }
    fs::remove_all(root);
    return {identical == jobs.size(),
            fmt("%zu/%zu bench outputs byte-identical at 1 and 8 threads%s%s", identical, jobs.size(),
                mismatched.empty() ? "" : "; differing:", mismatched.c_str())};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"AC1", "IHS matches closed-form trajectory", 10, closed_form_trajectory},
        {"AC2", "geometric error bound holds", 30, geometric_bound},
        {"AC3", "exact line search", 60, line_search},
        {"AC4", "trace bounds hold", 20, trace_bounds},
        {"AC5", "delta sign pattern", 300, delta_table},
        {"AC6", "A-optimal initializer beats random sketches", 300, initializers},
        {"AC7", "iterations to 1e-10", 600, time_to_precision},
        {"AC8", "full SRHT is an isometry", 60, full_sketch_isometry},
        {"AC9", "outputs independent of thread count", 600, thread_determinism},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v = {false, std::string("threw ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_seconds) {
            v.pass = false;
            v.detail += fmt("; over the %.0f s budget", c.budget_seconds);
        }
        failed += !v.pass;
        std::cout << c.id << " " << (v.pass ? "PASS" : "FAIL") << "  " << c.title << ": " << v.detail
                  << fmt(" [%.1f s]", secs) << std::endl;
    }
    std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed" : std::string("acceptance: all criteria passed"))
              << std::endl;
    return failed ? 1 : 0;
}
