#include "sketchls/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "sketchls/csv.hpp"
#include "sketchls/datagen.hpp"
#include "sketchls/error.hpp"
#include "sketchls/kernels.hpp"
#include "sketchls/rng.hpp"
#include "sketchls/solvers.hpp"

namespace sketchls::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& msg) {
    throw Error(ErrorKind::ConfigError, "\"" + key + "\": " + msg);
}

template <typename T>
T get_as(const json& j, const std::string& key) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        config_error(key, "wrong type");
    }
}

std::size_t get_count(const json& j, const std::string& key) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<long long>() < 0))
        config_error(key, "expected a non-negative integer");
    return j.get<std::size_t>();
}

double get_real(const json& j, const std::string& key) {
    if (!j.is_number()) config_error(key, "expected a number");
    return j.get<double>();
}

/// Scalars are accepted where a list is expected.
template <typename T, typename Fn>
std::vector<T> get_list(const json& j, const std::string& key, Fn&& one) {
    std::vector<T> out;
    if (j.is_array()) {
        if (j.empty()) config_error(key, "empty list");
        for (const auto& e : j) out.push_back(one(e));
    } else {
        out.push_back(one(j));
    }
    return out;
}

template <typename T, typename Parse>
T parse_named(const json& j, const std::string& key, Parse&& parse) {
    const auto name = get_as<std::string>(j, key);
    try {
        return parse(name);
    } catch (const Error& e) {
        config_error(key, "unknown value '" + name + "'");
    }
}

LambdaRule parse_lambda_rule(const json& j) {
    const std::string key = "lambda_rule";
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "concentrated") return LambdaRule::concentrated();
        if (s == "heavy-tailed") return LambdaRule::heavy_tailed();
        config_error(key, "unknown value '" + s + "'");
    }
    if (j.is_object() && j.size() == 1) {
        if (j.contains("proportion")) return LambdaRule::proportion(get_real(j["proportion"], key));
        if (j.contains("value")) return LambdaRule::explicit_value(get_real(j["value"], key));
    }
    config_error(key, "expected \"concentrated\", \"heavy-tailed\", {\"proportion\": p} or {\"value\": v}");
}

json lambda_rule_json(const LambdaRule& r) {
    switch (r.profile) {
        case LambdaRule::Profile::Explicit: return {{"value", r.coefficient}};
        case LambdaRule::Profile::Concentrated:
            if (r.coefficient == 0.1) return "concentrated";
            break;
        case LambdaRule::Profile::HeavyTailed:
            if (r.coefficient == 0.4) return "heavy-tailed";
            break;
    }
    return {{"proportion", r.coefficient}};
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Shared state of one invocation.
struct Globals {
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    std::optional<int> threads;
};

int resolve_threads(const Globals& g) {
    if (g.threads) {
        if (*g.threads < 1) throw Error(ErrorKind::InvalidFlag, "--threads must be >= 1");
        return *g.threads;
    }
    if (const char* env = std::getenv("SKETCHLS_THREADS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1) throw Error(ErrorKind::InvalidFlag, "SKETCHLS_THREADS must be a positive integer");
        return static_cast<int>(v);
    }
    return kernels::max_threads();
}

fs::path prepare_out_dir(const Globals& g) {
    const fs::path dir(g.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error(ErrorKind::IoError, "cannot create '" + dir.string() + "'");
    return dir;
}

json manifest(const std::string& command, json config, const std::string& started, int threads) {
    return {{"command", command},
            {"config", std::move(config)},
            {"library_version", kVersion},
            {"prng_algorithm", std::string(kPrngAlgorithm)},
            {"threads", threads},
            {"started", started},
            {"finished", timestamp()}};
}

void write_json(const fs::path& path, const json& j) { csv::write_atomic(path, j.dump(2) + "\n"); }

Matrix column(std::span<const double> v) { return Matrix(v.size(), 1, Vector(v.begin(), v.end())); }

/// CSV with mixed text and numeric cells.
class TextTable {
public:
    explicit TextTable(std::vector<std::string> header) : header_(std::move(header)) {}

    TextTable& row() {
        rows_.emplace_back();
        return *this;
    }
    TextTable& cell(std::string_view s) {
        rows_.back().push_back(csv::escape(std::string(s)));
        return *this;
    }
    TextTable& cell(double v) { return cell(csv::format_double(v)); }
    TextTable& cell(std::size_t v) { return cell(std::to_string(v)); }

    std::string render() const {
        std::string out;
        auto line = [&out](const std::vector<std::string>& cells) {
            for (std::size_t j = 0; j < cells.size(); ++j) {
                if (j) out.push_back(',');
                out += cells[j];
            }
            out.push_back('\n');
        };
        std::vector<std::string> hdr;
        for (const auto& h : header_) hdr.push_back(csv::escape(h));
        line(hdr);
        for (const auto& r : rows_) line(r);
        return out;
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string curves_csv(const ConvergenceReport& report) {
    TextTable t({"method", "iter", "mse1", "mse2", "failures"});
    for (const auto& c : report.curves) t.row().cell(c.method).cell(c.iteration).cell(c.mse1).cell(c.mse2).cell(c.failures);
    return t.render();
}

json violations_json(const ConvergenceReport& report) {
    json j = json::object();
    for (const auto& [name, count] : report.descent_violations) j[name] = count;
    return j;
}

// --- gen -------------------------------------------------------------------------

struct GenArgs {
    std::string dist = "normal";
    std::size_t n = 1 << 14;
    std::size_t d = 50;
    double sigma = 3.0;
    bool scale = false;
};

void cmd_gen(const GenArgs& a, const Globals& g, std::ostream& out) {
    const std::string started = timestamp();
    const int threads = resolve_threads(g);
    kernels::set_threads(threads);
    DataSpec spec;
    spec.dist = parse_distribution(a.dist);
    spec.n = a.n;
    spec.d = a.d;
    spec.seed = g.seed.value_or(1);
    spec.sigma_noise = a.sigma;
    spec.scale = a.scale;
    if (spec.d < 1 || spec.n < 2) throw Error(ErrorKind::InvalidFlag, "need --n >= 2 and --d >= 1");
    const Dataset ds = make_dataset(spec);

    const fs::path dir = prepare_out_dir(g);
    std::vector<std::string> names;
    for (std::size_t j = 0; j < spec.d; ++j) names.push_back("x" + std::to_string(j + 1));
    csv::write_atomic(dir / "X.csv", csv::render(names, ds.x));
    csv::write_atomic(dir / "y.csv", csv::render({"y"}, column(ds.y)));
    csv::write_atomic(dir / "beta_star.csv", csv::render({"beta_star"}, column(ds.beta_star)));
    const json config = {{"dist", std::string(to_string(spec.dist))}, {"n", spec.n},         {"d", spec.d},
                         {"seed", spec.seed},                         {"sigma", spec.sigma_noise}, {"scale", spec.scale}};
    write_json(dir / "manifest.json", manifest("gen", config, started, threads));
    out << "wrote " << (dir / "X.csv").string() << " (" << spec.n << "x" << spec.d << ")\n";
}

// --- solve -----------------------------------------------------------------------

struct SolveArgs {
    std::string x_path;
    std::string y_path;
    std::string method = "aopt-ihs";
    std::size_t m = 500;
    std::size_t iters = 20;
    std::optional<double> lambda;
    std::string lambda_rule = "concentrated";
    bool no_center = false;
    std::string sketch = "srht";
    bool scale = false;
};

LambdaRule solve_lambda_rule(const SolveArgs& a) {
    if (a.lambda) return LambdaRule::explicit_value(*a.lambda);
    if (a.lambda_rule == "concentrated") return LambdaRule::concentrated();
    if (a.lambda_rule == "heavy-tailed") return LambdaRule::heavy_tailed();
    char* end = nullptr;
    const double p = std::strtod(a.lambda_rule.c_str(), &end);
    if (end == a.lambda_rule.c_str() || *end != '\0' || !(p >= 0.0))
        throw Error(ErrorKind::InvalidFlag, "--lambda-rule must be concentrated, heavy-tailed or a proportion");
    return LambdaRule::proportion(p);
}

void cmd_solve(const SolveArgs& a, const Globals& g, std::ostream& out) {
    const std::string started = timestamp();
    const int threads = resolve_threads(g);
    kernels::set_threads(threads);
    const LambdaRule rule = solve_lambda_rule(a);

    const csv::Table xt = csv::read(a.x_path);
    const csv::Table yt = csv::read(a.y_path);
    if (yt.values.cols() != 1)
        throw Error(ErrorKind::ParseError, a.y_path + ": expected one column, found " + std::to_string(yt.values.cols()));
    if (yt.values.rows() != xt.values.rows())
        throw Error(ErrorKind::ParseError, a.y_path + ":" + std::to_string(std::min(xt.values.rows(), yt.values.rows()) + 2) +
                                               ":1: y has " + std::to_string(yt.values.rows()) + " rows, X has " +
                                               std::to_string(xt.values.rows()));
    Matrix X = xt.values;
    Vector y(yt.values.data().begin(), yt.values.data().end());
    if (!a.no_center) {
        Centered c = center(X, y);
        X = std::move(c.x);
        y = std::move(c.y);
    }
    if (a.scale) scale_columns(X);

    const Vector beta_ls = full_ls(X, y);
    SolveOptions opts;
    opts.beta_ls = beta_ls;
    Rng rng(g.seed.value_or(1));
    const SketchKind kind = parse_sketch_kind(a.sketch);

    SolveTrace trace;
    if (a.method == "full") {
        trace.betas.push_back(beta_ls);
        const Vector r = subtract(matvec(X, beta_ls), y);
        trace.objective.push_back(0.5 * dot(r, r));
        trace.dist_to_ls.push_back(0.0);
    } else if (a.method == "aopt-ihs") {
        trace = aopt_ihs_solve(X, y, a.m, a.iters, lambda_rule(X, rule), opts);
    } else if (a.method == "ihs") {
        trace = ihs_solve(X, y, a.m, a.iters, kind, rng, opts);
    } else if (a.method == "acc-ihs") {
        trace = acc_ihs_solve(X, y, a.m, a.iters, kind, rng, opts);
    } else {
        trace = pw_gradient_solve(X, y, a.m, a.iters, kind, rng, opts);
    }

    TextTable t({"iter", "alpha", "objective", "dist_to_ls"});
    for (std::size_t i = 0; i < trace.betas.size(); ++i) {
        double alpha = 0.0;
        if (i > 0) alpha = trace.alphas.empty() ? 1.0 : trace.alphas[i - 1];
        t.row().cell(i).cell(alpha).cell(trace.objective[i]).cell(trace.dist_to_ls[i]);
    }
    const fs::path dir = prepare_out_dir(g);
    csv::write_atomic(dir / "trace.csv", t.render());
    csv::write_atomic(dir / "beta.csv", csv::render({"beta"}, column(trace.final_beta())));
    json config = {{"x", a.x_path},       {"y", a.y_path},         {"method", a.method},
                   {"m", a.m},            {"iters", a.iters},      {"lambda_rule", lambda_rule_json(rule)},
                   {"center", !a.no_center}, {"scale", a.scale},   {"sketch", a.sketch},
                   {"seed", g.seed.value_or(1)}};
    json man = manifest("solve", config, started, threads);
    man["status"] = std::string(to_string(trace.status));
    write_json(dir / "manifest.json", man);
    out << a.method << ": " << trace.iterations() << " iterations, status " << to_string(trace.status)
        << ", final dist_to_ls " << csv::format_double(trace.dist_to_ls.back()) << "\n";
}

// --- bench -----------------------------------------------------------------------

ExperimentConfig with_data(const BenchConfig& c, Distribution dist, std::size_t d) {
    ExperimentConfig e = c.experiment;
    e.data.dist = dist;
    e.data.d = d;
    return e;
}

void require_single(const BenchConfig& c) {
    if (c.dists.size() != 1) config_error("dist", "this command takes a single distribution");
    if (c.dims.size() != 1) config_error("d", "this command takes a single dimension");
}

struct BenchArgs {
    std::string config_path;
    std::string init;
};

void cmd_bench(const std::string& sub, const BenchArgs& a, const Globals& g, std::ostream& out) {
    const std::string started = timestamp();
    const int threads = resolve_threads(g);
    kernels::set_threads(threads);

    std::ifstream in(a.config_path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open '" + a.config_path + "'");
    json raw;
    try {
        raw = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, a.config_path + ": " + e.what());
    }
    BenchConfig cfg = parse_config(raw);
    if (g.seed) cfg.experiment.data.seed = *g.seed;
    if (!a.init.empty()) cfg.experiment.init_policy = parse_init_policy(a.init);

    const fs::path dir = prepare_out_dir(g);
    std::string stem;
    std::string body;
    json extra = json::object();

    if (sub == "converge" || sub == "ridge") {
        require_single(cfg);
        const ExperimentConfig e = with_data(cfg, cfg.dists[0], cfg.dims[0]);
        const ConvergenceReport report = sub == "converge" ? run_convergence(e) : run_ridge_ablation(e);
        stem = sub == "converge" ? "converge_mse" : "ridge_mse";
        body = curves_csv(report);
        extra["descent_violations"] = violations_json(report);
    } else if (sub == "init") {
        require_single(cfg);
        const auto rows = run_init_comparison(with_data(cfg, cfg.dists[0], cfg.dims[0]), cfg.n_grid);
        TextTable t({"n", "initializer", "mse1", "failures"});
        for (const auto& r : rows) t.row().cell(r.n).cell(to_string(r.initializer)).cell(r.mse1).cell(r.failures);
        stem = "init_mse";
        body = t.render();
    } else if (sub == "delta") {
        TextTable t({"dist", "d", "variant", "delta_mean", "failures"});
        for (Distribution dist : cfg.dists)
            for (std::size_t d : cfg.dims)
                for (const auto& r : run_delta_table(with_data(cfg, dist, d), cfg.variants))
                    t.row().cell(to_string(r.dist)).cell(r.d).cell(to_string(r.variant)).cell(r.delta_mean).cell(r.failures);
        stem = "delta";
        body = t.render();
    } else if (sub == "time") {
        TextTable t({"method", "dist", "d", "mean_seconds", "mean_iters", "status"});
        for (Distribution dist : cfg.dists)
            for (std::size_t d : cfg.dims)
                for (const auto& r : run_time_to_precision(with_data(cfg, dist, d)))
                    t.row().cell(r.method).cell(to_string(r.dist)).cell(r.d).cell(r.mean_seconds).cell(r.mean_iters).cell(
                        to_string(r.status));
        stem = "time";
        body = t.render();
        extra["timing"] = "sketching, preconditioner construction and iterations; excludes data generation and "
                          "the least-squares reference";
    } else {
        TextTable t({"dist", "d", "proportion", "delta_mean", "failures"});
        for (Distribution dist : cfg.dists)
            for (std::size_t d : cfg.dims)
                for (const auto& r : lambda_sweep(with_data(cfg, dist, d), cfg.proportions))
                    t.row().cell(to_string(r.dist)).cell(r.d).cell(r.proportion).cell(r.delta_mean).cell(r.failures);
        stem = "lambda_sweep";
        body = t.render();
    }

    csv::write_atomic(dir / (stem + ".csv"), body);
    json man = manifest("bench " + sub, config_to_json(cfg), started, threads);
    man["outputs"] = {stem + ".csv"};
    for (auto& [k, v] : extra.items()) man[k] = v;
    write_json(dir / (stem + ".manifest.json"), man);
    out << "wrote " << (dir / (stem + ".csv")).string() << "\n";
}

}  // namespace

// --- config ----------------------------------------------------------------------

BenchConfig parse_config(const json& j0) {
    if (!j0.is_object()) throw Error(ErrorKind::ConfigError, "top level must be an object");
    const json& j = j0.contains("config") && j0.contains("command") ? j0["config"] : j0;
    if (!j.is_object()) config_error("config", "must be an object");

    static const std::set<std::string> kKeys = {
        "dist",   "n",           "d",      "seed",         "sigma_noise",     "scale",  "m",
        "n_iter", "reps",        "trim",   "tol",          "max_iter",        "lambda_rule",
        "methods", "init_policy", "baseline_sketch", "n_grid", "proportions", "variants"};
    for (const auto& [key, _] : j.items())
        if (!kKeys.contains(key)) config_error(key, "unknown key");
    if (!j.contains("m")) config_error("m", "missing required key");

    BenchConfig c;
    ExperimentConfig& e = c.experiment;
    e.m = get_count(j["m"], "m");
    if (j.contains("dist"))
        c.dists = get_list<Distribution>(j["dist"], "dist",
                                         [](const json& v) { return parse_named<Distribution>(v, "dist", parse_distribution); });
    if (j.contains("d")) c.dims = get_list<std::size_t>(j["d"], "d", [](const json& v) { return get_count(v, "d"); });
    if (j.contains("n")) e.data.n = get_count(j["n"], "n");
    if (j.contains("seed")) e.data.seed = get_count(j["seed"], "seed");
    if (j.contains("sigma_noise")) e.data.sigma_noise = get_real(j["sigma_noise"], "sigma_noise");
    if (j.contains("scale")) e.data.scale = get_as<bool>(j["scale"], "scale");
    if (j.contains("n_iter")) e.n_iter = get_count(j["n_iter"], "n_iter");
    if (j.contains("reps")) e.reps = get_count(j["reps"], "reps");
    if (j.contains("trim")) e.trim = get_real(j["trim"], "trim");
    if (j.contains("tol")) e.tol = get_real(j["tol"], "tol");
    if (j.contains("max_iter")) e.max_iter = get_count(j["max_iter"], "max_iter");
    if (j.contains("lambda_rule") && !j["lambda_rule"].is_null()) e.lambda_rule = parse_lambda_rule(j["lambda_rule"]);
    if (j.contains("methods"))
        e.methods = get_list<Method>(j["methods"], "methods",
                                     [](const json& v) { return parse_named<Method>(v, "methods", parse_method); });
    if (j.contains("init_policy"))
        e.init_policy = parse_named<InitPolicy>(j["init_policy"], "init_policy", parse_init_policy);
    if (j.contains("baseline_sketch"))
        e.baseline_sketch = parse_named<SketchKind>(j["baseline_sketch"], "baseline_sketch", parse_sketch_kind);
    if (j.contains("n_grid"))
        c.n_grid = get_list<std::size_t>(j["n_grid"], "n_grid", [](const json& v) { return get_count(v, "n_grid"); });
    if (j.contains("proportions"))
        c.proportions =
            get_list<double>(j["proportions"], "proportions", [](const json& v) { return get_real(v, "proportions"); });
    if (j.contains("variants"))
        c.variants = get_list<DeltaVariant>(
            j["variants"], "variants", [](const json& v) { return parse_named<DeltaVariant>(v, "variants", parse_delta_variant); });

    e.data.dist = c.dists[0];
    e.data.d = c.dims[0];
    try {
        for (Distribution dist : c.dists)
            for (std::size_t d : c.dims) with_data(c, dist, d).validate();
    } catch (const Error& err) {
        throw Error(ErrorKind::ConfigError, err.what());
    }
    return c;
}

json config_to_json(const BenchConfig& c) {
    const ExperimentConfig& e = c.experiment;
    json dists = json::array();
    for (Distribution d : c.dists) dists.push_back(std::string(to_string(d)));
    json methods = json::array();
    for (Method m : e.methods) methods.push_back(std::string(to_string(m)));
    json variants = json::array();
    for (DeltaVariant v : c.variants) variants.push_back(std::string(to_string(v)));
    return {{"dist", dists},
            {"d", c.dims},
            {"n", e.data.n},
            {"seed", e.data.seed},
            {"sigma_noise", e.data.sigma_noise},
            {"scale", e.data.scale},
            {"m", e.m},
            {"n_iter", e.n_iter},
            {"reps", e.reps},
            {"trim", e.trim},
            {"tol", e.tol},
            {"max_iter", e.max_iter},
            {"lambda_rule", e.lambda_rule ? lambda_rule_json(*e.lambda_rule) : json(nullptr)},
            {"methods", methods},
            {"init_policy", std::string(to_string(e.init_policy))},
            {"baseline_sketch", std::string(to_string(e.baseline_sketch))},
            {"n_grid", c.n_grid},
            {"proportions", c.proportions},
            {"variants", variants}};
}

// --- entry point -------------------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sketched least-squares solvers and benchmarks", "sketchls"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Master seed");
    app.add_option("--out-dir", g.out_dir, "Directory for output files")->capture_default_str();
    app.add_option("--threads", g.threads, "OpenMP threads (default: $SKETCHLS_THREADS or all cores)");

    const std::vector<std::string> dists = {"normal", "lognormal", "t2", "mixture"};

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset");
    gen_cmd->add_option("--dist", gen.dist, "Covariate distribution")->check(CLI::IsMember(dists))->capture_default_str();
    gen_cmd->add_option("--n", gen.n, "Rows")->capture_default_str();
    gen_cmd->add_option("--d", gen.d, "Columns")->capture_default_str();
    gen_cmd->add_option("--sigma", gen.sigma, "Noise standard deviation")->capture_default_str();
    gen_cmd->add_flag("--scale", gen.scale, "Standardize columns after centering");

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "Solve a least-squares problem stored as CSV");
    solve_cmd->add_option("--x", solve.x_path, "Design matrix CSV")->required();
    solve_cmd->add_option("--y", solve.y_path, "Response CSV (one column)")->required();
    solve_cmd->add_option("--method", solve.method, "Solver")
        ->check(CLI::IsMember({"full", "aopt-ihs", "ihs", "acc-ihs", "pw-gradient"}))
        ->capture_default_str();
    solve_cmd->add_option("--m", solve.m, "Sketch size")->capture_default_str();
    solve_cmd->add_option("-N,--iters", solve.iters, "Iterations")->capture_default_str();
    auto* lambda_opt = solve_cmd->add_option("--lambda", solve.lambda, "Explicit ridge parameter");
    solve_cmd->add_option("--lambda-rule", solve.lambda_rule,
                          "concentrated (0.1), heavy-tailed (0.4) or a proportion of the squared row norms")
        ->excludes(lambda_opt)
        ->capture_default_str();
    solve_cmd->add_flag("--no-center", solve.no_center, "Use the data as given");
    solve_cmd->add_option("--sketch", solve.sketch, "Sketch for the randomized solvers")
        ->check(CLI::IsMember({"srht", "leverage", "uniform", "identity"}))
        ->capture_default_str();
    solve_cmd->add_flag("--scale", solve.scale, "Standardize columns");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark experiment");
    bench_cmd->require_subcommand(1);
    bench_cmd->fallthrough();
    bench_cmd->add_option("--config", bench.config_path, "JSON config or run manifest");
    bench_cmd->add_option("--init", bench.init, "Initialization policy")
        ->check(CLI::IsMember({"standard", "aopt-for-all"}));
    std::vector<CLI::App*> bench_subs;
    for (const char* name : {"init", "converge", "delta", "time", "ridge", "lambda-sweep"}) {
        auto* sub = bench_cmd->add_subcommand(name);
        sub->fallthrough();
        bench_subs.push_back(sub);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: InvalidFlag: " << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (*gen_cmd) {
            cmd_gen(gen, g, out);
        } else if (*solve_cmd) {
            cmd_solve(solve, g, out);
        } else {
            if (bench.config_path.empty()) throw Error(ErrorKind::InvalidFlag, "bench requires --config");
            for (auto* sub : bench_subs)
                if (*sub) cmd_bench(sub->get_name(), bench, g, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::InvalidFlag ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace sketchls::cli
