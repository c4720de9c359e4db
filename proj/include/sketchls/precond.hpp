#pragma once

#include <optional>
#include <string_view>

#include "sketchls/linalg.hpp"
#include "sketchls/sketch.hpp"

namespace sketchls {

// =============================================================================
/// Ridge parameter rule: λ = coefficient·Σ‖xᵢ‖², or an explicit value.
///
struct LambdaRule {
    enum class Profile { Concentrated, HeavyTailed, Explicit };

    Profile profile = Profile::Concentrated;
    double coefficient = 0.1;

    static LambdaRule concentrated() { return {Profile::Concentrated, 0.1}; }
    static LambdaRule heavy_tailed() { return {Profile::HeavyTailed, 0.4}; }
    static LambdaRule explicit_value(double lambda) { return {Profile::Explicit, lambda}; }
    /// coefficient·Σ‖xᵢ‖² with an arbitrary proportion (λ sweeps).
    static LambdaRule proportion(double p) { return {Profile::Concentrated, p}; }
};

std::string_view to_string(LambdaRule::Profile profile);

double lambda_rule(const Matrix& X, const LambdaRule& rule);

// =============================================================================
/// Fixed SPD preconditioner M stored with its Cholesky factor. When built from a
/// mask, M = (n/m)·Σ δᵢxᵢxᵢᵀ + λI.
///
class Preconditioner {
public:
    /// General SPD matrix (SRHT Gram, identity, ...). Throws NotPositiveDefinite.
    static Preconditioner from_matrix(Matrix m, double lambda = 0.0);
    static Preconditioner identity(std::size_t d);

    const Matrix& matrix() const noexcept { return m_; }
    const CholeskyFactor& factor() const noexcept { return factor_; }
    double lambda() const noexcept { return lambda_; }
    const std::optional<SubsampleMask>& mask() const noexcept { return mask_; }
    std::size_t dim() const noexcept { return m_.rows(); }

    /// M⁻¹v
    Vector apply_inverse(std::span<const double> v) const { return solve_spd(factor_, v); }

private:
    friend Preconditioner build_m(const Matrix& X, const SubsampleMask& mask, double lambda);

    Preconditioner(Matrix m, CholeskyFactor f, double lambda, std::optional<SubsampleMask> mask)
        : m_(std::move(m)), factor_(std::move(f)), lambda_(lambda), mask_(std::move(mask)) {}

    Matrix m_;
    CholeskyFactor factor_;
    double lambda_ = 0.0;
    std::optional<SubsampleMask> mask_;
};

/// Ridged A-optimal preconditioner; touches only the m selected rows.
Preconditioner build_m(const Matrix& X, const SubsampleMask& mask, double lambda);

/// Δ(M) = 1 − κ(M^{-1/2} Q M^{-1/2}) / κ(Q). κ of the pencil is taken from the
/// eigenvalues of L⁻¹QL⁻ᵀ with M = LLᵀ.
double delta_measure(const Preconditioner& M, const Matrix& Q);
double delta_measure(const Matrix& M, const Matrix& Q);

/// Σ(1−δᵢ)‖xᵢ‖² over the rows left out by the mask.
double excluded_mass(const Matrix& X, const SubsampleMask& mask);

/// Upper bound on Tr[(Σδᵢxᵢxᵢᵀ)⁻¹]:
///   (1/λ_min(Q))·[d + κ(Q)/C · Σ(1−δᵢ)‖xᵢ‖²],
/// with C supplied by the caller. λ_min of this mask's unscaled Gram is the
/// largest admissible value; any infimum over masks lies below it.
double aopt_trace_bound(const Matrix& X, const SubsampleMask& mask, double c_lower);

/// Upper bound on Tr[M⁻¹QM⁻¹] for the n/m-scaled masked Gram M:
///   κ(Q)/λ_min(Q) · [d + κ(Q)/C · Σ(1−δᵢ)‖xᵢ‖²]².
/// The right-hand side does not involve the n/m factor; it bounds the scaled
/// quantity because Tr[M⁻¹] only shrinks under the scaling when m ≤ n.
double hs_cov_trace_bound(const Matrix& X, const SubsampleMask& mask, double c_lower);

}  // namespace sketchls
