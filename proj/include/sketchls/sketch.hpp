#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sketchls/linalg.hpp"
#include "sketchls/rng.hpp"

namespace sketchls {

enum class SketchKind {
    SRHT,
    Leverage,
    Uniform,
    AOptimal,
    /// S = I_n. Control case for tests and calibration runs.
    Identity,
};

std::string_view to_string(SketchKind kind);
SketchKind parse_sketch_kind(std::string_view name);

/// Sketched data pair (SX, Sy). `sy` is empty when no response was sketched.
struct SketchedData {
    Matrix sx;
    Vector sy;
};

// --- Walsh–Hadamard ----------------------------------------------------------

std::size_t next_pow2(std::size_t n);
bool is_pow2(std::size_t n);

/// In-place orthonormal Walsh–Hadamard transform (H/√n, symmetric involution).
void fwht_inplace(std::span<double> v);
Vector fwht(Vector v);

// --- SRHT --------------------------------------------------------------------

/// One draw of S = √(n_pad/m)·R·H·D acting on the zero-padded row space.
struct SrhtOperator {
    std::size_t n = 0;
    std::size_t n_pad = 0;
    /// Rademacher diagonal D, length n_pad.
    std::vector<double> signs;
    /// Selected rows of H·D, distinct, in draw order; length m.
    std::vector<std::size_t> rows;

    std::size_t m() const noexcept { return rows.size(); }
};

SrhtOperator draw_srht(std::size_t n, std::size_t m, Rng& rng);

/// Applies op to X (and y when non-empty).
SketchedData apply_srht(const SrhtOperator& op, const Matrix& X, std::span<const double> y = {});

/// Draws a fresh operator and applies it.
SketchedData srht_apply(const Matrix& X, std::span<const double> y, std::size_t m, Rng& rng);

// --- leverage and uniform sampling -------------------------------------------

Vector leverage_scores(const Matrix& X);

/// m rows drawn i.i.d. with probability h_i/d, each scaled by 1/√(m·p_i).
SketchedData leverage_sample(const Matrix& X, std::span<const double> y, std::size_t m, Rng& rng);

/// m distinct rows drawn uniformly, scaled by √(n/m).
SketchedData uniform_sample(const Matrix& X, std::span<const double> y, std::size_t m, Rng& rng);

// --- deterministic A-optimal subsample -----------------------------------------

class SubsampleMask {
public:
    SubsampleMask() = default;
    /// From a 0/1 indicator; throws InvalidArgument on other values.
    explicit SubsampleMask(std::vector<std::uint8_t> delta);

    std::size_t n() const noexcept { return delta_.size(); }
    std::size_t m() const noexcept { return selected_.size(); }
    bool operator[](std::size_t i) const { return delta_[i] != 0; }
    std::span<const std::uint8_t> delta() const noexcept { return delta_; }
    /// Selected row indices in increasing order.
    std::span<const std::size_t> selected() const noexcept { return selected_; }

    friend bool operator==(const SubsampleMask&, const SubsampleMask&) = default;

private:
    std::vector<std::uint8_t> delta_;
    std::vector<std::size_t> selected_;
};

/// Marks the m rows of largest squared ℓ₂ norm. Ties go to the smaller index.
/// Selection is by nth_element, expected O(n).
SubsampleMask aopt_select(const Matrix& X, std::size_t m);

/// The m×d matrix of selected rows scaled by 1/√m, i.e. SᵀS = diag(δ)/m.
Matrix mask_to_sketch(const Matrix& X, const SubsampleMask& mask);

/// Selected rows and responses without rescaling.
SketchedData mask_rows(const Matrix& X, std::span<const double> y, const SubsampleMask& mask);

/// Generic sketch used by the iterative solvers. The A-optimal kind scales the
/// selected rows by √(n/m) so its Gram matrix is (n/m)·Σδᵢxᵢxᵢᵀ; the identity
/// kind returns (X, y) unchanged.
SketchedData make_sketch(SketchKind kind, const Matrix& X, std::span<const double> y, std::size_t m,
                         Rng& rng);

}  // namespace sketchls
