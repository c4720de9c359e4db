#include "sketchls/precond.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sketchls/error.hpp"

namespace sketchls {

std::string_view to_string(LambdaRule::Profile profile) {
    switch (profile) {
        case LambdaRule::Profile::Concentrated: return "concentrated";
        case LambdaRule::Profile::HeavyTailed: return "heavy-tailed";
        case LambdaRule::Profile::Explicit: return "explicit";
    }
    return "?";
}

double lambda_rule(const Matrix& X, const LambdaRule& rule) {
    if (rule.profile == LambdaRule::Profile::Explicit) return rule.coefficient;
    const Vector norms = row_sq_norms(X);
    return rule.coefficient * std::accumulate(norms.begin(), norms.end(), 0.0);
}

Preconditioner Preconditioner::from_matrix(Matrix m, double lambda) {
    CholeskyFactor f = cholesky(m);
    return Preconditioner(std::move(m), std::move(f), lambda, std::nullopt);
}

Preconditioner Preconditioner::identity(std::size_t d) { return from_matrix(Matrix::identity(d), 0.0); }

Preconditioner build_m(const Matrix& X, const SubsampleMask& mask, double lambda) {
    if (mask.n() != X.rows()) throw Error(ErrorKind::DimensionMismatch, "mask length != rows");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw Error(ErrorKind::InvalidArgument, "lambda must be finite and >= 0");
    if (mask.m() == 0) throw Error(ErrorKind::BadSubsampleSize, "empty mask");
    const std::size_t d = X.cols();
    const double scale = static_cast<double>(X.rows()) / static_cast<double>(mask.m());

    Matrix M(d, d);
    for (std::size_t i : mask.selected()) {
        auto r = X.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double xj = r[j];
            for (std::size_t k = j; k < d; ++k) M(j, k) += xj * r[k];
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = j; k < d; ++k) M(j, k) *= scale;
        M(j, j) += lambda;
        for (std::size_t k = 0; k < j; ++k) M(j, k) = M(k, j);
    }
    CholeskyFactor f = cholesky(M);
    return Preconditioner(std::move(M), std::move(f), lambda, mask);
}

double delta_measure(const Matrix& M, const Matrix& Q) {
    return delta_measure(Preconditioner::from_matrix(M), Q);
}

double delta_measure(const Preconditioner& M, const Matrix& Q) {
    const double kq = cond_spd(Q);
    const Vector eig = pencil_eigvals(Q, M.factor());
    if (!(eig.front() > 1e-14 * eig.back()))
        throw Error(ErrorKind::SingularMatrix, "preconditioned Gram is singular");
    return 1.0 - (eig.back() / eig.front()) / kq;
}

double excluded_mass(const Matrix& X, const SubsampleMask& mask) {
    if (mask.n() != X.rows()) throw Error(ErrorKind::DimensionMismatch, "mask length != rows");
    const Vector norms = row_sq_norms(X);
    double s = 0.0;
    for (std::size_t i = 0; i < norms.size(); ++i)
        if (!mask[i]) s += norms[i];
    return s;
}

namespace {

struct Spectrum {
    double lo;
    double hi;
};

Spectrum gram_spectrum(const Matrix& X) {
    const Vector eig = sym_eigvals(gram(X));
    if (!(eig.front() > 1e-14 * eig.back())) throw Error(ErrorKind::SingularMatrix, "XᵀX is singular");
    return {eig.front(), eig.back()};
}

double bracket(const Matrix& X, const SubsampleMask& mask, double c_lower, const Spectrum& q) {
    if (!(c_lower > 0.0)) throw Error(ErrorKind::InvalidArgument, "C must be positive");
    const double kappa = q.hi / q.lo;
    return static_cast<double>(X.cols()) + kappa / c_lower * excluded_mass(X, mask);
}

}  // namespace

double aopt_trace_bound(const Matrix& X, const SubsampleMask& mask, double c_lower) {
    const Spectrum q = gram_spectrum(X);
    return bracket(X, mask, c_lower, q) / q.lo;
}

double hs_cov_trace_bound(const Matrix& X, const SubsampleMask& mask, double c_lower) {
    const Spectrum q = gram_spectrum(X);
    const double b = bracket(X, mask, c_lower, q);
    return (q.hi / q.lo) / q.lo * b * b;
}

}  // namespace sketchls
