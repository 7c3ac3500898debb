#pragma once

// Network models and their directed Laplacians.
//
// Every model here is a regular directed network whose links carry weight
// (1-a)/2 in the forward direction (node i -> i+1) and (1+a)/2 backwards
// (node i -> i-1). The Laplacian row for node i therefore holds
// (-1+a)/2 at offset +1 and (-1-a)/2 at offset -1, with the node degree
// weight on the diagonal. a = 0 gives the ordinary undirected network.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace consensus {

inline constexpr std::size_t kDefaultDenseCap = 10'000;

enum class Kind { Ring, RNearestRing, Torus };

[[nodiscard]] inline const char* to_string(Kind kind) noexcept {
    switch (kind) {
        case Kind::Ring: return "ring";
        case Kind::RNearestRing: return "rnearest";
        case Kind::Torus: return "torus";
    }
    return "unknown";
}

struct NetworkModel {
    Kind kind = Kind::Ring;
    std::size_t n = 0;               // node count, 1-D families
    std::size_t r = 1;               // neighbor radius; 1 for a plain ring
    std::vector<std::size_t> dims;   // k_1..k_m, Torus only
    double a = 0.0;                  // asymmetric link factor

    [[nodiscard]] static NetworkModel ring(std::size_t n, double a) {
        return {Kind::Ring, n, 1, {}, a};
    }
    [[nodiscard]] static NetworkModel rnearest(std::size_t n, std::size_t r, double a) {
        return {Kind::RNearestRing, n, r, {}, a};
    }
    [[nodiscard]] static NetworkModel torus(std::vector<std::size_t> dims, double a) {
        return {Kind::Torus, 0, 1, std::move(dims), a};
    }

    [[nodiscard]] bool is_torus() const noexcept { return kind == Kind::Torus; }

    /// Number of ring factors: 1 for the 1-D families, m for a torus.
    [[nodiscard]] std::size_t dimension() const noexcept { return is_torus() ? dims.size() : 1; }

    /// Extent of each index component of the spectrum.
    [[nodiscard]] std::vector<std::size_t> shape() const {
        return is_torus() ? dims : std::vector<std::size_t>{n};
    }

    [[nodiscard]] std::size_t order() const noexcept {
        if (!is_torus()) return n;
        std::size_t total = 1;
        for (std::size_t k : dims) total *= k;
        return total;
    }

    /// Diagonal Laplacian entry: 1 (ring), r (r-nearest), m (torus).
    [[nodiscard]] double degree() const noexcept {
        switch (kind) {
            case Kind::Ring: return 1.0;
            case Kind::RNearestRing: return static_cast<double>(r);
            case Kind::Torus: return static_cast<double>(dims.size());
        }
        return 0.0;
    }

    /// Same topology with a = 0.
    [[nodiscard]] NetworkModel symmetric() const {
        NetworkModel copy = *this;
        copy.a = 0.0;
        return copy;
    }

    bool operator==(const NetworkModel&) const = default;
};

/// Throws ParameterError naming the first violated constraint; returns the model otherwise.
inline const NetworkModel& validate(const NetworkModel& model) {
    if (!(model.a >= 0.0 && model.a <= 1.0)) {
        throw ParameterError("asymmetric link factor a must lie in [0, 1], got " + std::to_string(model.a));
    }
    switch (model.kind) {
        case Kind::Ring:
            if (model.n < 3) throw ParameterError("ring requires n >= 3, got n = " + std::to_string(model.n));
            if (model.r != 1) throw ParameterError("ring has radius 1; use rnearest for r > 1");
            if (!model.dims.empty()) throw ParameterError("ring takes no torus dims");
            break;
        case Kind::RNearestRing:
            if (model.r < 1) throw ParameterError("rnearest requires r >= 1");
            if (model.r > (std::numeric_limits<std::size_t>::max() - 2) / 2 || model.n < 2 * model.r + 2) {
                throw ParameterError("rnearest requires n >= 2r + 2 (n = " + std::to_string(model.n) +
                                     ", r = " + std::to_string(model.r) +
                                     "); n = 2r + 1 is the complete graph");
            }
            if (!model.dims.empty()) throw ParameterError("rnearest takes no torus dims");
            break;
        case Kind::Torus: {
            if (model.dims.size() < 2) {
                throw ParameterError("torus requires m >= 2 dimensions; use ring for m = 1");
            }
            std::size_t total = 1;
            for (std::size_t k : model.dims) {
                if (k < 3) throw ParameterError("torus requires every k_i >= 3, got " + std::to_string(k));
                if (total > std::numeric_limits<std::size_t>::max() / k) {
                    throw ParameterError("torus node count overflows");
                }
                total *= k;
            }
            break;
        }
    }
    return model;
}

/// First row (a_1 .. a_n) of a circulant matrix circ{a_1, ..., a_n}.
struct CirculantRow {
    std::vector<double> entries;

    [[nodiscard]] std::size_t size() const noexcept { return entries.size(); }
    bool operator==(const CirculantRow&) const = default;
};

/// Ring:       [1, (-1+a)/2, 0, ..., 0, (-1-a)/2]
/// r-nearest:  [r, (-1+a)/2 x r, 0 ..., (-1-a)/2 x r]
inline CirculantRow circulant_row(const NetworkModel& model) {
    validate(model);
    if (model.is_torus()) {
        throw TopologyError("torus Laplacians are Kronecker sums, not single circulants; use dense_laplacian");
    }
    const std::size_t n = model.n;
    const std::size_t r = model.r;
    CirculantRow row{std::vector<double>(n, 0.0)};
    row.entries[0] = static_cast<double>(r);
    const double forward = (-1.0 + model.a) / 2.0;
    const double backward = (-1.0 - model.a) / 2.0;
    for (std::size_t k = 1; k <= r; ++k) {
        row.entries[k] = forward;
        row.entries[n - k] = backward;
    }
    return row;
}

/// Dense row-major square matrix; row i is node i.
class DenseLaplacian {
public:
    DenseLaplacian() = default;
    explicit DenseLaplacian(std::size_t order) : order_(order), values_(order * order, 0.0) {}

    [[nodiscard]] std::size_t order() const noexcept { return order_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * order_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * order_ + j]; }

    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * order_, order_};
    }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

    bool operator==(const DenseLaplacian&) const = default;

private:
    std::size_t order_ = 0;
    std::vector<double> values_;
};

/// Cyclic expansion: entry (i, j) = row[(j - i) mod n].
inline DenseLaplacian expand_circulant(const CirculantRow& row) {
    const std::size_t n = row.size();
    DenseLaplacian out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < n; ++d) out(i, (i + d) % n) = row.entries[d];
    }
    return out;
}

/// A (+) B = A (x) I_b + I_a (x) B. The left operand's index varies slowest.
inline DenseLaplacian kronecker_sum(const DenseLaplacian& lhs, const DenseLaplacian& rhs) {
    const std::size_t na = lhs.order();
    const std::size_t nb = rhs.order();
    DenseLaplacian out(na * nb);
    for (std::size_t ia = 0; ia < na; ++ia) {
        for (std::size_t ja = 0; ja < na; ++ja) {
            const double v = lhs(ia, ja);
            if (v == 0.0) continue;
            for (std::size_t ib = 0; ib < nb; ++ib) out(ia * nb + ib, ja * nb + ib) += v;
        }
    }
    for (std::size_t ia = 0; ia < na; ++ia) {
        for (std::size_t ib = 0; ib < nb; ++ib) {
            for (std::size_t jb = 0; jb < nb; ++jb) out(ia * nb + ib, ia * nb + jb) += rhs(ib, jb);
        }
    }
    return out;
}

inline void check_dense_cap(const NetworkModel& model, std::size_t dense_cap) {
    if (model.order() > dense_cap) {
        throw SizeError("model has " + std::to_string(model.order()) + " nodes, above the dense cap of " +
                        std::to_string(dense_cap));
    }
}

/// Materializes L. Tori are assembled as L_1 (+) L_2 (+) ... (+) L_m of ring
/// Laplacians sharing the same `a`.
inline DenseLaplacian dense_laplacian(const NetworkModel& model, std::size_t dense_cap = kDefaultDenseCap) {
    validate(model);
    check_dense_cap(model, dense_cap);
    if (!model.is_torus()) return expand_circulant(circulant_row(model));

    DenseLaplacian acc = expand_circulant(circulant_row(NetworkModel::ring(model.dims.front(), model.a)));
    for (std::size_t l = 1; l < model.dims.size(); ++l) {
        acc = kronecker_sum(acc, expand_circulant(circulant_row(NetworkModel::ring(model.dims[l], model.a))));
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Structure-exploiting access (no dense matrix).

/// Mixed-radix strides; dimension 1 varies slowest.
inline std::vector<std::size_t> torus_strides(std::span<const std::size_t> dims) {
    std::vector<std::size_t> strides(dims.size(), 1);
    for (std::size_t l = dims.size(); l-- > 1;) strides[l - 1] = strides[l] * dims[l];
    return strides;
}

/// Sparse row i of L as (column, value) pairs, built by neighbor arithmetic.
inline std::vector<std::pair<std::size_t, double>> laplacian_row_entries(const NetworkModel& model, std::size_t i) {
    validate(model);
    if (i >= model.order()) throw IndexError("row index out of range");
    const double forward = (-1.0 + model.a) / 2.0;
    const double backward = (-1.0 - model.a) / 2.0;
    std::vector<std::pair<std::size_t, double>> out;
    out.emplace_back(i, model.degree());
    if (!model.is_torus()) {
        const std::size_t n = model.n;
        for (std::size_t k = 1; k <= model.r; ++k) {
            out.emplace_back((i + k) % n, forward);
            out.emplace_back((i + n - k) % n, backward);
        }
        return out;
    }
    const auto strides = torus_strides(model.dims);
    for (std::size_t l = 0; l < model.dims.size(); ++l) {
        const std::size_t k = model.dims[l];
        const std::size_t digit = (i / strides[l]) % k;
        const std::size_t base = i - digit * strides[l];
        out.emplace_back(base + ((digit + 1) % k) * strides[l], forward);
        out.emplace_back(base + ((digit + k - 1) % k) * strides[l], backward);
    }
    return out;
}

/// y = L x using circulant offsets (1-D) or per-dimension neighbor arithmetic (torus).
inline void apply_laplacian(const NetworkModel& model, std::span<const double> x, std::span<double> y) {
    const std::size_t order = model.order();
    const double forward = (-1.0 + model.a) / 2.0;
    const double backward = (-1.0 - model.a) / 2.0;
    const double deg = model.degree();
    if (!model.is_torus()) {
        const std::size_t n = model.n;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = deg * x[i];
            for (std::size_t k = 1; k <= model.r; ++k) {
                acc += forward * x[(i + k) % n];
                acc += backward * x[(i + n - k) % n];
            }
            y[i] = acc;
        }
        return;
    }
    const auto strides = torus_strides(model.dims);
    for (std::size_t i = 0; i < order; ++i) {
        double acc = deg * x[i];
        for (std::size_t l = 0; l < model.dims.size(); ++l) {
            const std::size_t k = model.dims[l];
            const std::size_t digit = (i / strides[l]) % k;
            const std::size_t base = i - digit * strides[l];
            acc += forward * x[base + ((digit + 1) % k) * strides[l]];
            acc += backward * x[base + ((digit + k - 1) % k) * strides[l]];
        }
        y[i] = acc;
    }
}

/// y = L x with a materialized matrix.
inline void apply_dense(const DenseLaplacian& lap, std::span<const double> x, std::span<double> y) {
    const std::size_t n = lap.order();
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = lap.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

}  // namespace consensus
