#include "sketchls/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "sketchls/error.hpp"
#include "sketchls/kernels.hpp"

namespace sketchls {

std::string_view to_string(SketchKind kind) {
    switch (kind) {
        case SketchKind::SRHT: return "srht";
        case SketchKind::Leverage: return "leverage";
        case SketchKind::Uniform: return "uniform";
        case SketchKind::AOptimal: return "aopt";
        case SketchKind::Identity: return "identity";
    }
    return "?";
}

SketchKind parse_sketch_kind(std::string_view name) {
    for (auto k : {SketchKind::SRHT, SketchKind::Leverage, SketchKind::Uniform, SketchKind::AOptimal,
                   SketchKind::Identity})
        if (to_string(k) == name) return k;
    throw Error(ErrorKind::InvalidArgument, "unknown sketch kind '" + std::string(name) + "'");
}

namespace {

/// m distinct draws from [0, n) by a partial Fisher–Yates shuffle over a
/// virtual identity array; O(m) time and memory.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t m, Rng& rng) {
    std::unordered_map<std::size_t, std::size_t> swapped;
    auto at = [&](std::size_t i) {
        auto it = swapped.find(i);
        return it == swapped.end() ? i : it->second;
    };
    std::vector<std::size_t> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        const std::size_t vi = at(i);
        const std::size_t vj = at(j);
        out[i] = vj;
        swapped[j] = vi;
    }
    return out;
}

void require_y(const Matrix& X, std::span<const double> y) {
    if (!y.empty() && y.size() != X.rows())
        throw Error(ErrorKind::DimensionMismatch, "y length " + std::to_string(y.size()) + " != rows " +
                                                      std::to_string(X.rows()));
}

SketchedData gather_rows(const Matrix& X, std::span<const double> y, std::span<const std::size_t> rows,
                         std::span<const double> scales) {
    const std::size_t d = X.cols();
    SketchedData out{Matrix(rows.size(), d), y.empty() ? Vector{} : Vector(rows.size())};
    for (std::size_t k = 0; k < rows.size(); ++k) {
        auto src = X.row(rows[k]);
        auto dst = out.sx.row(k);
        for (std::size_t j = 0; j < d; ++j) dst[j] = scales[k] * src[j];
        if (!y.empty()) out.sy[k] = scales[k] * y[rows[k]];
    }
    return out;
}

}  // namespace

// --- Walsh–Hadamard ----------------------------------------------------------------

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fwht_inplace(std::span<double> v) {
    if (!is_pow2(v.size()))
        throw Error(ErrorKind::NotPowerOfTwo, "length " + std::to_string(v.size()));
    kernels::serial::fwht_rows(v, v.size(), 1);
    const double s = 1.0 / std::sqrt(static_cast<double>(v.size()));
    for (double& x : v) x *= s;
}

Vector fwht(Vector v) {
    fwht_inplace(v);
    return v;
}

// --- SRHT ----------------------------------------------------------------------------

SrhtOperator draw_srht(std::size_t n, std::size_t m, Rng& rng) {
    SrhtOperator op;
    op.n = n;
    op.n_pad = next_pow2(n);
    if (m == 0 || m > op.n_pad)
        throw Error(ErrorKind::NotEnoughRows,
                    "sketch size " + std::to_string(m) + " outside [1, " + std::to_string(op.n_pad) + "]");
    op.signs.resize(op.n_pad);
    for (double& s : op.signs) s = rng.rademacher();
    op.rows = sample_without_replacement(op.n_pad, m, rng);
    return op;
}

SketchedData apply_srht(const SrhtOperator& op, const Matrix& X, std::span<const double> y) {
    if (X.rows() != op.n) throw Error(ErrorKind::DimensionMismatch, "operator built for a different n");
    require_y(X, y);
    const std::size_t d = X.cols();
    const std::size_t w = d + (y.empty() ? 0 : 1);

    // Rows of [DX | Dy], zero padded to n_pad.
    std::vector<double> block(op.n_pad * w, 0.0);
    for (std::size_t i = 0; i < op.n; ++i) {
        const double s = op.signs[i];
        auto xi = X.row(i);
        double* dst = block.data() + i * w;
        for (std::size_t j = 0; j < d; ++j) dst[j] = s * xi[j];
        if (!y.empty()) dst[d] = s * y[i];
    }
    kernels::omp::fwht_rows(block, op.n_pad, w);

    // (1/√n_pad from H)·√(n_pad/m) = 1/√m.
    const double scale = 1.0 / std::sqrt(static_cast<double>(op.m()));
    SketchedData out{Matrix(op.m(), d), y.empty() ? Vector{} : Vector(op.m())};
    for (std::size_t k = 0; k < op.m(); ++k) {
        const double* src = block.data() + op.rows[k] * w;
        auto dst = out.sx.row(k);
        for (std::size_t j = 0; j < d; ++j) dst[j] = scale * src[j];
        if (!y.empty()) out.sy[k] = scale * src[d];
    }
    return out;
}

SketchedData srht_apply(const Matrix& X, std::span<const double> y, std::size_t m, Rng& rng) {
    require_y(X, y);
    return apply_srht(draw_srht(X.rows(), m, rng), X, y);
}

// --- leverage / uniform ----------------------------------------------------------------

Vector leverage_scores(const Matrix& X) { return row_sq_norms(orthonormal_colbasis(X)); }

SketchedData leverage_sample(const Matrix& X, std::span<const double> y, std::size_t m, Rng& rng) {
    require_y(X, y);
    if (m == 0) throw Error(ErrorKind::BadSubsampleSize, "leverage sample of size 0");
    const Vector h = leverage_scores(X);
    const double total = std::accumulate(h.begin(), h.end(), 0.0);
    Vector cdf(h.size());
    std::partial_sum(h.begin(), h.end(), cdf.begin());

    std::vector<std::size_t> rows(m);
    Vector scales(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double u = rng.uniform() * cdf.back();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t i = static_cast<std::size_t>(it - cdf.begin());
        if (i >= h.size()) i = h.size() - 1;
        // upper_bound never lands on a zero-probability row unless u hits the
        // last boundary; walk back to the nearest row with mass.
        while (h[i] <= 0.0 && i > 0) --i;
        const double p = h[i] / total;
        rows[k] = i;
        scales[k] = 1.0 / std::sqrt(static_cast<double>(m) * p);
    }
    return gather_rows(X, y, rows, scales);
}

SketchedData uniform_sample(const Matrix& X, std::span<const double> y, std::size_t m, Rng& rng) {
    require_y(X, y);
    if (m == 0 || m > X.rows())
        throw Error(ErrorKind::NotEnoughRows, "uniform sample size " + std::to_string(m));
    const auto rows = sample_without_replacement(X.rows(), m, rng);
    const Vector scales(m, std::sqrt(static_cast<double>(X.rows()) / static_cast<double>(m)));
    return gather_rows(X, y, rows, scales);
}

// --- A-optimal mask ------------------------------------------------------------------

SubsampleMask::SubsampleMask(std::vector<std::uint8_t> delta) : delta_(std::move(delta)) {
    for (std::size_t i = 0; i < delta_.size(); ++i) {
        if (delta_[i] > 1) throw Error(ErrorKind::InvalidArgument, "mask entries must be 0 or 1");
        if (delta_[i]) selected_.push_back(i);
    }
}

SubsampleMask aopt_select(const Matrix& X, std::size_t m) {
    const std::size_t n = X.rows();
    if (m < 1 || m > n)
        throw Error(ErrorKind::BadSubsampleSize,
                    "m = " + std::to_string(m) + " outside [1, " + std::to_string(n) + "]");
    const Vector norms = row_sq_norms(X);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto before = [&](std::size_t a, std::size_t b) {
        return norms[a] > norms[b] || (norms[a] == norms[b] && a < b);
    };
    if (m < n)
        std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(m), idx.end(), before);
    std::vector<std::uint8_t> delta(n, 0);
    for (std::size_t k = 0; k < m; ++k) delta[idx[k]] = 1;
    return SubsampleMask(std::move(delta));
}

Matrix mask_to_sketch(const Matrix& X, const SubsampleMask& mask) {
    if (mask.n() != X.rows()) throw Error(ErrorKind::DimensionMismatch, "mask length != rows");
    const Vector scales(mask.m(), 1.0 / std::sqrt(static_cast<double>(mask.m())));
    return gather_rows(X, {}, mask.selected(), scales).sx;
}

SketchedData mask_rows(const Matrix& X, std::span<const double> y, const SubsampleMask& mask) {
    if (mask.n() != X.rows()) throw Error(ErrorKind::DimensionMismatch, "mask length != rows");
    require_y(X, y);
    const Vector scales(mask.m(), 1.0);
    return gather_rows(X, y, mask.selected(), scales);
}

SketchedData make_sketch(SketchKind kind, const Matrix& X, std::span<const double> y, std::size_t m,
                         Rng& rng) {
    switch (kind) {
        case SketchKind::SRHT: return srht_apply(X, y, m, rng);
        case SketchKind::Leverage: return leverage_sample(X, y, m, rng);
        case SketchKind::Uniform: return uniform_sample(X, y, m, rng);
        case SketchKind::AOptimal: {
            const SubsampleMask mask = aopt_select(X, m);
            const Vector scales(m, std::sqrt(static_cast<double>(X.rows()) / static_cast<double>(m)));
            require_y(X, y);
            return gather_rows(X, y, mask.selected(), scales);
        }
        case SketchKind::Identity: return {X, Vector(y.begin(), y.end())};
    }
    throw Error(ErrorKind::InvalidArgument, "unknown sketch kind");
}

}  // namespace sketchls
