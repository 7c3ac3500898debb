#pragma once

// Laplacian spectra of the circulant / Kronecker-sum network families.
//
// Three independent routes produce the same eigenvalue set:
//   ClosedForm    trigonometric formula per index
//   DftOracle     direct DFT summation over the Laplacian's first row
//                 (1-D: the circulant row; torus: the m-dimensional row
//                 obtained by neighbor arithmetic)
//   CartesianSum  per-ring DFT spectra added over the Cartesian product
//
// Eigenvalues are stored in index order (dimension 1 slowest), which is
// also lexicographic order of the multi-index. Index 0 is the consensus
// mode.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "topology.hpp"

namespace consensus {

using Complex = std::complex<double>;
using MultiIndex = std::vector<std::size_t>;

struct ComplexEigenvalue {
    double re = 0.0;
    double im = 0.0;
    MultiIndex index;

    [[nodiscard]] Complex value() const noexcept { return {re, im}; }
    [[nodiscard]] double norm_sq() const noexcept { return re * re + im * im; }
    [[nodiscard]] double modulus() const noexcept { return std::hypot(re, im); }
};

enum class SpectrumSource { ClosedForm, DftOracle, CartesianSum };

[[nodiscard]] inline const char* to_string(SpectrumSource source) noexcept {
    switch (source) {
        case SpectrumSource::ClosedForm: return "closed";
        case SpectrumSource::DftOracle: return "dft";
        case SpectrumSource::CartesianSum: return "cartesian";
    }
    return "unknown";
}

class Spectrum {
public:
    Spectrum(std::optional<NetworkModel> model, std::vector<std::size_t> shape, std::vector<Complex> values,
             SpectrumSource source)
        : model_(std::move(model)), shape_(std::move(shape)), values_(std::move(values)), source_(source) {}

    [[nodiscard]] const std::optional<NetworkModel>& model() const noexcept { return model_; }
    [[nodiscard]] const std::vector<std::size_t>& shape() const noexcept { return shape_; }
    [[nodiscard]] std::span<const Complex> values() const noexcept { return values_; }
    [[nodiscard]] SpectrumSource source() const noexcept { return source_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

    [[nodiscard]] MultiIndex index_of(std::size_t linear) const {
        MultiIndex index(shape_.size());
        for (std::size_t l = shape_.size(); l-- > 0;) {
            index[l] = linear % shape_[l];
            linear /= shape_[l];
        }
        return index;
    }

    [[nodiscard]] std::size_t linear_of(std::span<const std::size_t> index) const {
        if (index.size() != shape_.size()) throw IndexError("index arity does not match the spectrum");
        std::size_t linear = 0;
        for (std::size_t l = 0; l < shape_.size(); ++l) {
            if (index[l] >= shape_[l]) throw IndexError("index component out of range");
            linear = linear * shape_[l] + index[l];
        }
        return linear;
    }

    [[nodiscard]] ComplexEigenvalue at(std::size_t linear) const {
        const Complex v = values_.at(linear);
        return {v.real(), v.imag(), index_of(linear)};
    }

private:
    std::optional<NetworkModel> model_;
    std::vector<std::size_t> shape_;
    std::vector<Complex> values_;
    SpectrumSource source_;
};

namespace detail {

/// (cos, sin) of 2*pi*p/n for p in [0, n).
inline std::vector<Complex> twiddles(std::size_t n) {
    std::vector<Complex> table(n);
    for (std::size_t p = 0; p < n; ++p) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(n);
        table[p] = {std::cos(angle), std::sin(angle)};
    }
    return table;
}

/// Outer sum over the Cartesian product; the left factor varies slowest.
inline std::vector<Complex> cartesian_sum(const std::vector<Complex>& lhs, const std::vector<Complex>& rhs) {
    std::vector<Complex> out;
    out.reserve(lhs.size() * rhs.size());
    for (const Complex& x : lhs) {
        for (const Complex& y : rhs) out.push_back(x + y);
    }
    return out;
}

}  // namespace detail

/// lambda_j = sum_l a_l w^{(l-1) j}, w = exp(2 pi i / n), by direct summation.
inline Spectrum circulant_spectrum(const CirculantRow& row) {
    const std::size_t n = row.size();
    if (n == 0) throw ParameterError("empty circulant row");
    double sum = 0.0;
    double scale = 0.0;
    for (double v : row.entries) {
        sum += v;
        scale += std::abs(v);
    }
    if (std::abs(sum) > 1e-12 * std::max(1.0, scale)) {
        throw ParameterError("circulant row must sum to 0 (Laplacian row)");
    }
    const auto w = detail::twiddles(n);
    std::vector<Complex> values(n);
    for (std::size_t j = 0; j < n; ++j) {
        Complex acc{0.0, 0.0};
        for (std::size_t l = 0; l < n; ++l) {
            if (row.entries[l] == 0.0) continue;
            acc += row.entries[l] * w[(l * j) % n];
        }
        values[j] = acc;
    }
    return Spectrum(std::nullopt, {n}, std::move(values), SpectrumSource::DftOracle);
}

/// Trigonometric closed form:
///   ring       1 - cos(2 pi j/n) + i a sin(2 pi j/n)
///   r-nearest  r - sum_k cos(2 pi j k/n) + i a sum_k sin(2 pi j k/n)
///   torus      m - sum_l cos(2 pi j_l/k_l) + i a sum_l sin(2 pi j_l/k_l)
inline ComplexEigenvalue closed_eigenvalue(const NetworkModel& model, std::span<const std::size_t> index) {
    validate(model);
    const auto shape = model.shape();
    if (index.size() != shape.size()) {
        throw IndexError("expected a " + std::to_string(shape.size()) + "-component index, got " +
                         std::to_string(index.size()));
    }
    for (std::size_t l = 0; l < shape.size(); ++l) {
        if (index[l] >= shape[l]) {
            throw IndexError("index component " + std::to_string(index[l]) + " outside [0, " +
                             std::to_string(shape[l]) + ")");
        }
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double cos_sum = 0.0;
    double sin_sum = 0.0;
    if (model.is_torus()) {
        for (std::size_t l = 0; l < shape.size(); ++l) {
            const double angle = two_pi * static_cast<double>(index[l]) / static_cast<double>(shape[l]);
            cos_sum += std::cos(angle);
            sin_sum += std::sin(angle);
        }
    } else {
        const std::size_t n = model.n;
        for (std::size_t k = 1; k <= model.r; ++k) {
            const double angle = two_pi * static_cast<double>((index[0] * k) % n) / static_cast<double>(n);
            cos_sum += std::cos(angle);
            sin_sum += std::sin(angle);
        }
    }
    return {model.degree() - cos_sum, model.a * sin_sum, MultiIndex(index.begin(), index.end())};
}

inline ComplexEigenvalue closed_eigenvalue(const NetworkModel& model, std::initializer_list<std::size_t> index) {
    const MultiIndex copy(index);
    return closed_eigenvalue(model, std::span<const std::size_t>(copy));
}

namespace detail {

inline std::vector<Complex> closed_form_values(const NetworkModel& model) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (!model.is_torus()) {
        const std::size_t n = model.n;
        const auto w = twiddles(n);
        std::vector<Complex> values(n);
        for (std::size_t j = 0; j < n; ++j) {
            double cos_sum = 0.0;
            double sin_sum = 0.0;
            for (std::size_t k = 1; k <= model.r; ++k) {
                const Complex t = w[(j * k) % n];
                cos_sum += t.real();
                sin_sum += t.imag();
            }
            values[j] = {model.degree() - cos_sum, model.a * sin_sum};
        }
        return values;
    }
    const std::size_t m = model.dims.size();
    std::vector<std::vector<double>> cosines(m);
    std::vector<std::vector<double>> sines(m);
    for (std::size_t l = 0; l < m; ++l) {
        const std::size_t k = model.dims[l];
        cosines[l].resize(k);
        sines[l].resize(k);
        for (std::size_t j = 0; j < k; ++j) {
            const double angle = two_pi * static_cast<double>(j) / static_cast<double>(k);
            cosines[l][j] = std::cos(angle);
            sines[l][j] = std::sin(angle);
        }
    }
    const std::size_t total = model.order();
    std::vector<Complex> values(total);
    std::vector<std::size_t> digits(m, 0);
    for (std::size_t linear = 0; linear < total; ++linear) {
        double cos_sum = 0.0;
        double sin_sum = 0.0;
        for (std::size_t l = 0; l < m; ++l) {
            cos_sum += cosines[l][digits[l]];
            sin_sum += sines[l][digits[l]];
        }
        values[linear] = {model.degree() - cos_sum, model.a * sin_sum};
        for (std::size_t l = m; l-- > 0;) {
            if (++digits[l] < model.dims[l]) break;
            digits[l] = 0;
        }
    }
    return values;
}

/// Direct m-dimensional DFT of the first Laplacian row.
inline std::vector<Complex> torus_dft_values(const NetworkModel& model) {
    const std::size_t m = model.dims.size();
    const auto strides = torus_strides(model.dims);
    const auto entries = laplacian_row_entries(model, 0);
    std::vector<std::vector<std::size_t>> entry_digits;
    for (const auto& [col, value] : entries) {
        std::vector<std::size_t> d(m);
        for (std::size_t l = 0; l < m; ++l) d[l] = (col / strides[l]) % model.dims[l];
        entry_digits.push_back(std::move(d));
    }
    std::vector<std::vector<Complex>> w(m);
    for (std::size_t l = 0; l < m; ++l) w[l] = twiddles(model.dims[l]);

    const std::size_t total = model.order();
    std::vector<Complex> values(total);
    std::vector<std::size_t> j(m, 0);
    for (std::size_t linear = 0; linear < total; ++linear) {
        Complex acc{0.0, 0.0};
        for (std::size_t e = 0; e < entries.size(); ++e) {
            Complex phase{1.0, 0.0};
            for (std::size_t l = 0; l < m; ++l) phase *= w[l][(entry_digits[e][l] * j[l]) % model.dims[l]];
            acc += entries[e].second * phase;
        }
        values[linear] = acc;
        for (std::size_t l = m; l-- > 0;) {
            if (++j[l] < model.dims[l]) break;
            j[l] = 0;
        }
    }
    return values;
}

inline std::vector<Complex> ring_dft_values(std::size_t k, double a) {
    const Spectrum s = circulant_spectrum(circulant_row(NetworkModel::ring(k, a)));
    return {s.values().begin(), s.values().end()};
}

}  // namespace detail

/// Every eigenvalue, each index exactly once, in index order.
/// The DFT oracle respects `dense_cap` (it is O(order * nnz) and meant for checking).
inline Spectrum full_spectrum(const NetworkModel& model, SpectrumSource source = SpectrumSource::ClosedForm,
                              std::size_t dense_cap = kDefaultDenseCap) {
    validate(model);
    std::vector<Complex> values;
    switch (source) {
        case SpectrumSource::ClosedForm:
            values = detail::closed_form_values(model);
            break;
        case SpectrumSource::DftOracle:
            check_dense_cap(model, dense_cap);
            if (model.is_torus()) {
                values = detail::torus_dft_values(model);
            } else {
                const Spectrum s = circulant_spectrum(circulant_row(model));
                values.assign(s.values().begin(), s.values().end());
            }
            break;
        case SpectrumSource::CartesianSum:
            check_dense_cap(model, dense_cap);
            if (model.is_torus()) {
                values = detail::ring_dft_values(model.dims.front(), model.a);
                for (std::size_t l = 1; l < model.dims.size(); ++l) {
                    values = detail::cartesian_sum(values, detail::ring_dft_values(model.dims[l], model.a));
                }
            } else {
                const Spectrum s = circulant_spectrum(circulant_row(model));
                values.assign(s.values().begin(), s.values().end());
            }
            break;
    }
    return Spectrum(model, model.shape(), std::move(values), source);
}

// ---------------------------------------------------------------------------

struct ExtremalPair {
    ComplexEigenvalue lambda_s;  // minimum real part among nonzero eigenvalues
    ComplexEigenvalue lambda_l;  // maximum real part
};

inline constexpr double kTieTolerance = 1e-12;

namespace detail {

/// Among eigenvalues whose real part is within tolerance of `target`, the one
/// with the largest |im| (equal real part + larger modulus dominates
/// |1 - h lambda| for every h > 0); ties go to the smallest index.
inline std::size_t pick_at_real_part(std::span<const Complex> values, double target) {
    const double tol = kTieTolerance * std::max(1.0, std::abs(target));
    std::size_t best = values.size();
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (std::abs(values[i].real() - target) > tol) continue;
        if (best == values.size()) {
            best = i;
            continue;
        }
        const double im = std::abs(values[i].imag());
        const double best_im = std::abs(values[best].imag());
        if (im > best_im + kTieTolerance * std::max(1.0, best_im)) best = i;
    }
    return best;
}

}  // namespace detail

/// Throws DegenerateError when |lambda_s| == |lambda_l| (e.g. the 3-node ring).
inline ExtremalPair extremal_pair(const Spectrum& spectrum) {
    const auto values = spectrum.values();
    if (values.size() < 2) throw DegenerateError("spectrum has no nonzero eigenvalue");
    double min_re = std::numeric_limits<double>::infinity();
    double max_re = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < values.size(); ++i) {
        min_re = std::min(min_re, values[i].real());
        max_re = std::max(max_re, values[i].real());
    }
    ExtremalPair pair{spectrum.at(detail::pick_at_real_part(values, min_re)),
                      spectrum.at(detail::pick_at_real_part(values, max_re))};
    const double ls = pair.lambda_s.norm_sq();
    const double ll = pair.lambda_l.norm_sq();
    if (std::abs(ll - ls) <= kTieTolerance * std::max(1.0, ll)) {
        throw DegenerateError("extremal eigenvalues have equal modulus (|lambda_s| = |lambda_l| = " +
                              std::to_string(std::sqrt(ll)) + "); no best constant weight exists");
    }
    return pair;
}

}  // namespace consensus
