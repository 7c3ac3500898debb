#pragma once

// Synchronous consensus iteration x(t+1) = (I - h L) x(t).
//
// Two vectors are advanced per step:
//   x(t)  the raw state; its mean is reported as `averages`.
//   d(t)  the disagreement x(t) - mean(x0) 1, re-projected onto the
//         zero-mean subspace after every step. W commutes with that
//         projection, so d(t) equals x(t) - mean(x0) 1 exactly in real
//         arithmetic; the projection only discards rounding noise along 1,
//         which would otherwise put a floor of ~1e-16 |d(0)| under the
//         error norms and hide the asymptotic contraction.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "design.hpp"
#include "errors.hpp"
#include "topology.hpp"

namespace consensus {

enum class Multiply { Structured, Dense };

inline constexpr double kDivergenceFactor = 1e6;
inline constexpr std::size_t kDefaultWarmup = 100;
inline constexpr std::size_t kDefaultWindow = 50;

struct SimulationTrace {
    std::size_t steps = 0;
    std::vector<double> error_norms;  // steps + 1 entries, ||x(t) - mean(x0) 1||
    std::vector<double> averages;     // steps + 1 entries, mean(x(t))
    double empirical_factor = 0.0;
    bool converged = false;
    std::vector<double> final_state;
};

namespace detail {

inline double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double norm_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// Geometric mean of successive ratios over the last `window` steps, or nullopt.
inline std::optional<double> tail_factor(std::span<const double> norms, std::size_t window) {
    if (window == 0 || norms.size() < window + 1) return std::nullopt;
    const std::size_t first = norms.size() - window - 1;
    for (std::size_t t = first; t < norms.size(); ++t) {
        if (!(norms[t] > 0.0) || !std::isfinite(norms[t])) return std::nullopt;
    }
    return std::exp((std::log(norms.back()) - std::log(norms[first])) / static_cast<double>(window));
}

}  // namespace detail

/// Stops when the error norm is <= tolerance or after max_steps steps.
inline SimulationTrace run_consensus(const NetworkModel& model, double h, std::span<const double> x0,
                                     std::size_t max_steps, double tolerance, Multiply multiply = Multiply::Structured,
                                     std::size_t dense_cap = kDefaultDenseCap) {
    validate(model);
    const std::size_t n = model.order();
    if (x0.size() != n) {
        throw ParameterError("x0 has " + std::to_string(x0.size()) + " entries, model order is " + std::to_string(n));
    }
    if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("h must be positive and finite");
    if (!(tolerance > 0.0)) throw ParameterError("tolerance must be positive");

    std::optional<DenseLaplacian> dense;
    if (multiply == Multiply::Dense) dense = dense_laplacian(model, dense_cap);
    auto apply = [&](std::span<const double> in, std::span<double> out) {
        if (dense) {
            apply_dense(*dense, in, out);
        } else {
            apply_laplacian(model, in, out);
        }
    };

    const double mean0 = detail::mean_of(x0);
    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = x0[i] - mean0;
    const double drift0 = detail::mean_of(d);
    for (double& v : d) v -= drift0;
    std::vector<double> scratch(n);

    SimulationTrace trace;
    const double initial = detail::norm_of(d);
    trace.error_norms.push_back(initial);
    trace.averages.push_back(mean0);

    while (trace.error_norms.back() > tolerance && trace.steps < max_steps) {
        apply(x, scratch);
        for (std::size_t i = 0; i < n; ++i) x[i] -= h * scratch[i];
        apply(d, scratch);
        for (std::size_t i = 0; i < n; ++i) d[i] -= h * scratch[i];
        const double drift = detail::mean_of(d);
        for (double& v : d) v -= drift;

        ++trace.steps;
        const double error = detail::norm_of(d);
        trace.error_norms.push_back(error);
        trace.averages.push_back(detail::mean_of(x));
        if (error > kDivergenceFactor * initial || !std::isfinite(error)) {
            throw DivergenceError("error norm grew to " + std::to_string(error) + " after " +
                                  std::to_string(trace.steps) + " steps (initial " + std::to_string(initial) + ")");
        }
    }
    trace.converged = trace.error_norms.back() <= tolerance;
    const std::size_t window = std::min(kDefaultWindow, trace.steps);
    trace.empirical_factor = detail::tail_factor(trace.error_norms, window).value_or(0.0);
    trace.final_state = std::move(x);
    return trace;
}

inline double empirical_contraction(const SimulationTrace& trace, std::size_t window = kDefaultWindow) {
    const auto factor = detail::tail_factor(trace.error_norms, window);
    if (!factor) {
        throw InsufficientDataError("need " + std::to_string(window + 1) + " trailing nonzero error norms, trace has " +
                                    std::to_string(trace.error_norms.size()) + " steps' worth");
    }
    return *factor;
}

// ---------------------------------------------------------------------------

/// splitmix64 (Steele, Lea, Flood). Uniform doubles use the top 53 bits.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// [0, 1)
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

inline std::vector<double> random_initial_state(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> x(n);
    for (double& v : x) v = rng.uniform();
    return x;
}

struct TrialResult {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double empirical_factor = 0.0;
    double gamma = 0.0;
    bool pass = false;
    std::string message;  // empty on pass
};

struct VerifyOptions {
    std::size_t warmup = kDefaultWarmup;
    std::size_t window = kDefaultWindow;
    Multiply multiply = Multiply::Structured;
    std::size_t dense_cap = kDefaultDenseCap;
};

inline double rate_tolerance(double gamma) { return std::max(0.01, 0.02 * gamma); }

/// Trial t uses x0 = random_initial_state(order, seed + t) and runs warmup + window steps.
inline std::vector<TrialResult> verify_consensus(const NetworkModel& model, const ConsensusDesign& design,
                                                 std::size_t trials, std::uint64_t seed, VerifyOptions options = {}) {
    if (trials == 0) throw ParameterError("trials must be >= 1");
    validate(model);
    std::vector<TrialResult> report;
    for (std::size_t t = 0; t < trials; ++t) {
        TrialResult row;
        row.trial = t;
        row.seed = seed + t;
        row.gamma = design.gamma;
        const auto x0 = random_initial_state(model.order(), row.seed);
        try {
            const auto trace = run_consensus(model, design.h, x0, options.warmup + options.window,
                                             std::numeric_limits<double>::min(), options.multiply, options.dense_cap);
            const double scale = detail::norm_of(x0);
            double drift = 0.0;
            for (double avg : trace.averages) drift = std::max(drift, std::abs(avg - trace.averages.front()));
            if (const auto factor = detail::tail_factor(trace.error_norms, options.window)) {
                row.empirical_factor = *factor;
            } else {
                row.empirical_factor = trace.error_norms.back() == 0.0 ? 0.0 : std::nan("");
            }
            if (drift > 1e-12 * scale) {
                row.message = "average drifted by " + std::to_string(drift);
            } else if (design.gamma < 1.0 && !(trace.error_norms.back() < trace.error_norms.front())) {
                row.message = "no convergence although gamma < 1";
            } else if (!(std::abs(row.empirical_factor - design.gamma) <= rate_tolerance(design.gamma))) {
                row.message = "empirical factor differs from gamma";
            }
        } catch (const DivergenceError& e) {
            row.empirical_factor = std::nan("");
            row.message = std::string("DivergenceError: ") + e.what();
        }
        row.pass = row.message.empty();
        report.push_back(std::move(row));
    }
    return report;
}

}  // namespace consensus
