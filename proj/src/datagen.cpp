#include "sketchls/datagen.hpp"

#include <cmath>
#include <string>

#include "sketchls/error.hpp"
#include "sketchls/solvers.hpp"

namespace sketchls {

std::string_view to_string(Distribution dist) {
    switch (dist) {
        case Distribution::Normal: return "normal";
        case Distribution::LogNormal: return "lognormal";
        case Distribution::T2: return "t2";
        case Distribution::Mixture: return "mixture";
    }
    return "?";
}

Distribution parse_distribution(std::string_view name) {
    for (auto d : {Distribution::Normal, Distribution::LogNormal, Distribution::T2, Distribution::Mixture})
        if (to_string(d) == name) return d;
    throw Error(ErrorKind::InvalidArgument, "unknown distribution '" + std::string(name) + "'");
}

LambdaRule default_lambda_rule(Distribution dist) {
    return dist == Distribution::Normal ? LambdaRule::concentrated() : LambdaRule::heavy_tailed();
}

Matrix make_sigma(std::size_t d) {
    if (d == 0) throw Error(ErrorKind::InvalidArgument, "d must be >= 1");
    Matrix S(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) S(i, j) = i == j ? 1.0 : 0.5;
    return S;
}

namespace {

/// One N(0, Σ) row: x = L·z.
void correlated_normal(const Matrix& L, Rng& rng, std::span<double> z, std::span<double> out) {
    for (double& v : z) v = rng.normal();
    for (std::size_t j = 0; j < out.size(); ++j) {
        auto lj = L.row(j);
        double s = 0.0;
        for (std::size_t k = 0; k <= j; ++k) s += lj[k] * z[k];
        out[j] = s;
    }
}

/// Multivariate t_ν: N(0, Σ) divided by √(χ²_ν/ν), one χ² per row.
void multivariate_t(const Matrix& L, int dof, Rng& rng, std::span<double> z, std::span<double> out) {
    correlated_normal(L, rng, z, out);
    const double w = std::sqrt(rng.chi_squared(dof) / dof);
    for (double& v : out) v /= w;
}

}  // namespace

Matrix gen_covariates(const DataSpec& spec, Rng& rng) {
    if (spec.d == 0 || spec.n < spec.d) throw Error(ErrorKind::InvalidArgument, "need n >= d >= 1");
    const Matrix L = cholesky(make_sigma(spec.d)).lower();
    Matrix X(spec.n, spec.d);
    Vector z(spec.d);

    for (std::size_t i = 0; i < spec.n; ++i) {
        auto row = X.row(i);
        switch (spec.dist) {
            case Distribution::Normal: correlated_normal(L, rng, z, row); break;
            case Distribution::LogNormal:
                correlated_normal(L, rng, z, row);
                for (double& v : row) v = std::exp(v);
                break;
            case Distribution::T2: multivariate_t(L, 2, rng, z, row); break;
            case Distribution::Mixture:
                switch (rng.below(5)) {
                    case 0:
                        correlated_normal(L, rng, z, row);
                        for (double& v : row) v += 1.0;
                        break;
                    case 1: multivariate_t(L, 2, rng, z, row); break;
                    case 2: multivariate_t(L, 3, rng, z, row); break;
                    case 3:
                        for (double& v : row) v = rng.uniform(0.0, 2.0);
                        break;
                    default:
                        correlated_normal(L, rng, z, row);
                        for (double& v : row) v = std::exp(v);
                        break;
                }
                break;
        }
    }
    return X;
}

Vector gen_response(const Matrix& X, std::span<const double> beta_star, double sigma, Rng& rng) {
    if (beta_star.size() != X.cols()) throw Error(ErrorKind::DimensionMismatch, "beta_star length != cols");
    Vector y = matvec(X, beta_star);
    for (double& v : y) v += sigma * rng.normal();
    return y;
}

Centered center(const Matrix& X, std::span<const double> y) {
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "centering needs at least two rows");
    if (y.size() != n) throw Error(ErrorKind::DimensionMismatch, "y length != rows");
    Vector mean(d, 0.0);
    double ymean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        axpy(1.0, X.row(i), mean);
        ymean += y[i];
    }
    for (double& v : mean) v /= static_cast<double>(n);
    ymean /= static_cast<double>(n);

    Centered out{X, Vector(y.begin(), y.end())};
    for (std::size_t i = 0; i < n; ++i) {
        axpy(-1.0, mean, out.x.row(i));
        out.y[i] -= ymean;
    }
    return out;
}

Vector scale_columns(Matrix& X) {
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    Vector mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) axpy(1.0, X.row(i), mean);
    for (double& v : mean) v /= static_cast<double>(n);
    Vector sd(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) sd[j] += (X(i, j) - mean[j]) * (X(i, j) - mean[j]);
    for (double& v : sd) {
        v = n > 1 ? std::sqrt(v / static_cast<double>(n - 1)) : 0.0;
        if (!(v > 0.0)) v = 1.0;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) X(i, j) /= sd[j];
    return sd;
}

Dataset make_dataset(const DataSpec& spec) {
    Rng rng(spec.seed);
    const Matrix raw = gen_covariates(spec, rng);
    Vector beta_star(spec.d);
    for (double& b : beta_star) b = rng.normal();
    const Vector y = gen_response(raw, beta_star, spec.sigma_noise, rng);

    Centered c = center(raw, y);
    if (spec.scale) {
        const Vector sd = scale_columns(c.x);
        for (std::size_t j = 0; j < spec.d; ++j) beta_star[j] *= sd[j];
    }
    Dataset ds{std::move(c.x), std::move(c.y), std::move(beta_star), {}};
    ds.beta_ls = full_ls(ds.x, ds.y);
    return ds;
}

}  // namespace sketchls
