#pragma once

// Best-constant consensus weights W = I - h L.
//
// The canonical route is design_pipeline(): full spectrum -> extremal pair
// -> solve |1 - h lambda_s| = |1 - h lambda_l| for real h -> gamma =
// |1 - h lambda_s| -> R = 1 - gamma. Closed forms are checked against it
// and minimax_h() provides an independent optimum of the same objective.
//
// Note that for complex spectra the pair solve is not always the minimax
// optimum, and |1 - h lambda_s| is not always the largest modulus over the
// spectrum. spectral_factor() gives the true per-step contraction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "closed_forms.hpp"
#include "errors.hpp"
#include "spectral.hpp"
#include "topology.hpp"

namespace consensus {

enum class Method { PairSolve, ClosedForm, Minimax };

[[nodiscard]] inline const char* to_string(Method method) noexcept {
    switch (method) {
        case Method::PairSolve: return "pipeline";
        case Method::ClosedForm: return "closed";
        case Method::Minimax: return "minimax";
    }
    return "unknown";
}

struct ConsensusDesign {
    double h = 0.0;
    double gamma = 0.0;  // convergence factor |1 - h lambda_s|
    double rate = 0.0;   // R = 1 - gamma
    Method method = Method::PairSolve;
    std::optional<ExtremalPair> extremal;
};

/// Real h with |1 - h s| = |1 - h l|:  h = 2 (Re l - Re s) / (|l|^2 - |s|^2).
inline double solve_h_pair(Complex lambda_s, Complex lambda_l) {
    const double ns = std::norm(lambda_s);
    const double nl = std::norm(lambda_l);
    if (std::abs(nl - ns) <= kTieTolerance * std::max({1.0, nl, ns})) {
        throw DegenerateError("|lambda_s| = |lambda_l|: the equal-modulus condition has no nonzero solution");
    }
    return 2.0 * (lambda_l.real() - lambda_s.real()) / (nl - ns);
}

inline double solve_h_pair(const ComplexEigenvalue& lambda_s, const ComplexEigenvalue& lambda_l) {
    return solve_h_pair(lambda_s.value(), lambda_l.value());
}

inline ConsensusDesign design_from_spectrum(const Spectrum& spectrum) {
    ExtremalPair pair = extremal_pair(spectrum);
    const double h = solve_h_pair(pair.lambda_s, pair.lambda_l);
    const double gamma = std::abs(1.0 - h * pair.lambda_s.value());
    return {h, gamma, 1.0 - gamma, Method::PairSolve, std::move(pair)};
}

inline ConsensusDesign design_pipeline(const NetworkModel& model) {
    return design_from_spectrum(full_spectrum(model, SpectrumSource::ClosedForm));
}

/// max over nonzero eigenvalues of |1 - h lambda|: the asymptotic per-step
/// contraction of x(t+1) = (I - h L) x(t) on the disagreement subspace.
inline double spectral_factor(const Spectrum& spectrum, double h) {
    const auto values = spectrum.values();
    double worst = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i) worst = std::max(worst, std::norm(1.0 - h * values[i]));
    return std::sqrt(worst);
}

struct MinimaxOptions {
    double h_tolerance = 1e-12;
    int max_iterations = 200;
};

/// Ternary search of the convex f(h) = max_nonzero |1 - h lambda| on [0, 2 / max Re lambda].
/// gamma and rate describe the true optimum of f; `extremal` is left empty.
inline ConsensusDesign minimax_h(const Spectrum& spectrum, MinimaxOptions options = {}) {
    const auto values = spectrum.values();
    if (values.size() < 2) throw DegenerateError("spectrum has no nonzero eigenvalue");
    double max_re = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i) max_re = std::max(max_re, values[i].real());
    if (max_re <= 0.0) throw DegenerateError("no eigenvalue with positive real part");

    double lo = 0.0;
    double hi = 2.0 / max_re;
    for (int it = 0; it < options.max_iterations && hi - lo > options.h_tolerance; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (spectral_factor(spectrum, m1) < spectral_factor(spectrum, m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    const double h = 0.5 * (lo + hi);
    const double gamma = spectral_factor(spectrum, h);
    return {h, gamma, 1.0 - gamma, Method::Minimax, std::nullopt};
}

// ---------------------------------------------------------------------------
// Closed forms and their reconciliation with the pipeline.

enum class ClosedFormCase {
    RingEven,
    RingOdd,
    TorusEvenEven,
    TorusOddOdd,
    MultiTorusEven,
    MultiTorusOdd,
    RNearestEven,
    RNearestOdd,
};

[[nodiscard]] inline const char* to_string(ClosedFormCase c) noexcept {
    switch (c) {
        case ClosedFormCase::RingEven: return "ring-even";
        case ClosedFormCase::RingOdd: return "ring-odd";
        case ClosedFormCase::TorusEvenEven: return "torus-even-even";
        case ClosedFormCase::TorusOddOdd: return "torus-odd-odd";
        case ClosedFormCase::MultiTorusEven: return "mtorus-all-even";
        case ClosedFormCase::MultiTorusOdd: return "mtorus-all-odd";
        case ClosedFormCase::RNearestEven: return "rnearest-even";
        case ClosedFormCase::RNearestOdd: return "rnearest-odd";
    }
    return "unknown";
}

/// How a closed-form rate relates to the pipeline rate R.
enum class Reconciliation {
    Identical,    // printed == R
    OffsetByOne,  // printed == R - 1
    Mismatch,
};

[[nodiscard]] inline const char* to_string(Reconciliation tag) noexcept {
    switch (tag) {
        case Reconciliation::Identical: return "Identical";
        case Reconciliation::OffsetByOne: return "OffsetByOne";
        case Reconciliation::Mismatch: return "Mismatch";
    }
    return "unknown";
}

inline constexpr double kReconcileTolerance = 1e-9;

inline Reconciliation reconcile(double printed, double canonical, double tolerance = kReconcileTolerance) {
    if (!std::isfinite(printed)) return Reconciliation::Mismatch;
    if (std::abs(printed - canonical) <= tolerance) return Reconciliation::Identical;
    if (std::abs(printed - (canonical - 1.0)) <= tolerance) return Reconciliation::OffsetByOne;
    return Reconciliation::Mismatch;
}

/// Throws UnsupportedParityError for mixed-parity tori.
inline ClosedFormCase closed_form_case(const NetworkModel& model) {
    validate(model);
    switch (model.kind) {
        case Kind::Ring: return model.n % 2 == 0 ? ClosedFormCase::RingEven : ClosedFormCase::RingOdd;
        case Kind::RNearestRing: return model.n % 2 == 0 ? ClosedFormCase::RNearestEven : ClosedFormCase::RNearestOdd;
        case Kind::Torus: break;
    }
    const bool all_even = std::all_of(model.dims.begin(), model.dims.end(), [](std::size_t k) { return k % 2 == 0; });
    const bool all_odd = std::all_of(model.dims.begin(), model.dims.end(), [](std::size_t k) { return k % 2 == 1; });
    if (!all_even && !all_odd) {
        throw UnsupportedParityError("no closed form for mixed-parity torus dims; use the pipeline");
    }
    if (model.dims.size() == 2) return all_even ? ClosedFormCase::TorusEvenEven : ClosedFormCase::TorusOddOdd;
    return all_even ? ClosedFormCase::MultiTorusEven : ClosedFormCase::MultiTorusOdd;
}

namespace detail {

inline std::size_t major_position(const std::vector<std::size_t>& dims) {
    return static_cast<std::size_t>(std::max_element(dims.begin(), dims.end()) - dims.begin());
}

/// dims with the major (largest) dimension moved to the front.
inline std::vector<std::size_t> major_first(const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> out = dims;
    std::rotate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(major_position(dims)),
                out.begin() + static_cast<std::ptrdiff_t>(major_position(dims)) + 1);
    return out;
}

}  // namespace detail

inline double closed_form_h(const NetworkModel& model) {
    namespace cf = closed_forms;
    const ClosedFormCase which = closed_form_case(model);
    switch (which) {
        case ClosedFormCase::RingEven: return cf::ring_even_h(model.n, model.a);
        case ClosedFormCase::RingOdd: return cf::ring_odd_h(model.n, model.a);
        case ClosedFormCase::RNearestEven: return cf::rnearest_even_h(model.n, model.r, model.a);
        case ClosedFormCase::RNearestOdd: return cf::rnearest_odd_h(model.n, model.r, model.a);
        case ClosedFormCase::TorusEvenEven:
        case ClosedFormCase::TorusOddOdd:
        case ClosedFormCase::MultiTorusEven:
        case ClosedFormCase::MultiTorusOdd: break;
    }
    const auto ordered = detail::major_first(model.dims);
    switch (which) {
        case ClosedFormCase::TorusEvenEven: return cf::torus_even_h(ordered[0], model.a);
        case ClosedFormCase::TorusOddOdd: return cf::torus_odd_h(ordered[1], ordered[0], model.a);
        case ClosedFormCase::MultiTorusEven: return cf::multi_torus_even_h(ordered[0], ordered.size(), model.a);
        default: return cf::multi_torus_odd_h(ordered, model.a);
    }
}

struct ClosedFormRate {
    ClosedFormCase formula = ClosedFormCase::RingEven;
    double value = 0.0;          // closed-form R, verbatim
    double pipeline_rate = 0.0;  // canonical R
    Reconciliation tag = Reconciliation::Mismatch;
};

/// Verbatim closed-form R; the all-odd m-torus has no printed R and uses
/// 1 - |1 - h lambda_s| with h from its closed-form consensus parameter.
inline double closed_form_rate_value(const NetworkModel& model) {
    namespace cf = closed_forms;
    const ClosedFormCase which = closed_form_case(model);
    switch (which) {
        case ClosedFormCase::RingEven: return cf::ring_even_rate(model.n, model.a);
        case ClosedFormCase::RingOdd: return cf::ring_odd_rate(model.n, model.a);
        case ClosedFormCase::RNearestEven: return cf::rnearest_even_rate(model.n, model.r, model.a);
        case ClosedFormCase::RNearestOdd: return cf::rnearest_odd_rate(model.n, model.r, model.a);
        default: break;
    }
    const auto ordered = detail::major_first(model.dims);
    switch (which) {
        case ClosedFormCase::TorusEvenEven: return cf::torus_even_rate(ordered[0], model.a);
        case ClosedFormCase::TorusOddOdd: return cf::torus_odd_rate(ordered[1], ordered[0], model.a);
        case ClosedFormCase::MultiTorusEven: return cf::multi_torus_even_rate(ordered[0], ordered.size(), model.a);
        default: {
            MultiIndex index(model.dims.size(), 0);
            index[detail::major_position(model.dims)] = 1;
            const ComplexEigenvalue lambda_s = closed_eigenvalue(model, index);
            return 1.0 - std::abs(1.0 - cf::multi_torus_odd_h(ordered, model.a) * lambda_s.value());
        }
    }
}

inline ClosedFormRate closed_form_R(const NetworkModel& model, const ConsensusDesign& pipeline) {
    ClosedFormRate out;
    out.formula = closed_form_case(model);
    out.value = closed_form_rate_value(model);
    out.pipeline_rate = pipeline.rate;
    out.tag = reconcile(out.value, pipeline.rate);
    return out;
}

inline ClosedFormRate closed_form_R(const NetworkModel& model) {
    closed_form_case(model);
    return closed_form_R(model, design_pipeline(model));
}

/// h from the closed form; gamma and rate follow from the pipeline's lambda_s
/// so that rate = 1 - gamma holds. The verbatim closed-form R is closed_form_R().
inline ConsensusDesign closed_form_design(const NetworkModel& model, const ConsensusDesign& pipeline) {
    const double h = closed_form_h(model);
    ConsensusDesign out{h, 0.0, 0.0, Method::ClosedForm, pipeline.extremal};
    out.gamma = std::abs(1.0 - h * pipeline.extremal->lambda_s.value());
    out.rate = 1.0 - out.gamma;
    return out;
}

inline ConsensusDesign closed_form_design(const NetworkModel& model) {
    closed_form_case(model);
    return closed_form_design(model, design_pipeline(model));
}

}  // namespace consensus
