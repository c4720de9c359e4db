#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "sketchls/linalg.hpp"
#include "sketchls/precond.hpp"
#include "sketchls/rng.hpp"

namespace sketchls {

enum class Distribution { Normal, LogNormal, T2, Mixture };

std::string_view to_string(Distribution dist);
/// Accepts normal, lognormal, t2, mixture. Throws InvalidArgument otherwise.
Distribution parse_distribution(std::string_view name);

/// Ridge rule used with each distribution: Normal → 0.1, the rest → 0.4.
LambdaRule default_lambda_rule(Distribution dist);

struct DataSpec {
    Distribution dist = Distribution::Normal;
    std::size_t n = 1 << 14;
    std::size_t d = 50;
    std::uint64_t seed = 1;
    double sigma_noise = 3.0;
    /// Scale centered columns to unit sample variance.
    bool scale = false;
};

struct Dataset {
    Matrix x;
    Vector y;
    Vector beta_star;
    Vector beta_ls;
};

/// Σᵢⱼ = 0.5 off the diagonal, 1 on it.
Matrix make_sigma(std::size_t d);

Matrix gen_covariates(const DataSpec& spec, Rng& rng);
Vector gen_response(const Matrix& X, std::span<const double> beta_star, double sigma, Rng& rng);

struct Centered {
    Matrix x;
    Vector y;
};

/// Subtracts column means from X and the mean from y.
Centered center(const Matrix& X, std::span<const double> y);

/// Divides each column by its sample standard deviation and returns the
/// divisors (columns with zero spread are left alone, divisor 1).
Vector scale_columns(Matrix& X);

/// Full pipeline from one stream seeded with spec.seed, in draw order
/// covariates, β*, noise. y is generated from raw covariates, then both are
/// centered; β̂^LS is solved on the centered data. With spec.scale the columns
/// are also standardized and β* is rescaled to stay the true coefficient.
Dataset make_dataset(const DataSpec& spec);

}  // namespace sketchls
