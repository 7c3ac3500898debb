#pragma once

// Parameter sweeps, symmetric-vs-asymmetric absolute error, and the
// datasets behind the rate figures.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "design.hpp"
#include "errors.hpp"
#include "model_grammar.hpp"
#include "topology.hpp"

namespace consensus {

enum class RateSource { Pipeline, Closed };

struct SweepRow {
    NetworkModel model;
    double h = 0.0;
    double gamma = 0.0;
    double rate = 0.0;
    double rate_symmetric = 0.0;
    double absolute_error = 0.0;  // rate_symmetric - rate
    Method method = Method::PairSolve;
    std::string error_kind;  // empty when the point evaluated
    std::string error;

    [[nodiscard]] bool ok() const noexcept { return error_kind.empty(); }
};

/// Cartesian grid; the first list varies slowest and `a` fastest.
struct SweepGrid {
    Kind kind = Kind::Ring;
    std::vector<std::size_t> n;
    std::vector<std::size_t> r{1};
    std::vector<std::vector<std::size_t>> dims;
    std::vector<double> a;
};

struct SweepOptions {
    RateSource source = RateSource::Pipeline;
    std::size_t threads = 0;  // 0: hardware concurrency, capped by CONSENSUS_SPECTRA_THREADS
};

/// Models in grid order. Points are not validated here; sweep() reports them.
inline std::vector<NetworkModel> expand(const SweepGrid& grid) {
    std::vector<NetworkModel> models;
    switch (grid.kind) {
        case Kind::Ring:
            for (std::size_t n : grid.n)
                for (double a : grid.a) models.push_back(NetworkModel::ring(n, a));
            break;
        case Kind::RNearestRing:
            for (std::size_t n : grid.n)
                for (std::size_t r : grid.r)
                    for (double a : grid.a) models.push_back(NetworkModel::rnearest(n, r, a));
            break;
        case Kind::Torus:
            for (const auto& d : grid.dims)
                for (double a : grid.a) models.push_back(NetworkModel::torus(d, a));
            break;
    }
    return models;
}

inline std::size_t sweep_threads(std::size_t requested = 0) {
    std::size_t threads = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CONSENSUS_SPECTRA_THREADS")) {
        char* end = nullptr;
        const unsigned long cap = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && cap > 0) threads = std::min<std::size_t>(threads, cap);
    }
    return threads;
}

inline SweepRow evaluate_point(const NetworkModel& model, RateSource source) {
    SweepRow row;
    row.model = model;
    try {
        validate(model);
        if (source == RateSource::Pipeline) {
            const auto design = design_pipeline(model);
            row.h = design.h;
            row.gamma = design.gamma;
            row.rate = design.rate;
            row.rate_symmetric = model.a == 0.0 ? design.rate : design_pipeline(model.symmetric()).rate;
            row.method = Method::PairSolve;
        } else {
            row.h = closed_form_h(model);
            row.rate = closed_form_rate_value(model);
            row.gamma = 1.0 - row.rate;
            row.rate_symmetric = model.a == 0.0 ? row.rate : closed_form_rate_value(model.symmetric());
            row.method = Method::ClosedForm;
        }
        row.absolute_error = row.rate_symmetric - row.rate;
    } catch (const Error& e) {
        row.error_kind = e.kind();
        row.error = e.what();
    }
    return row;
}

/// One row per model, in input order regardless of thread count.
inline std::vector<SweepRow> sweep(const std::vector<NetworkModel>& models, SweepOptions options = {}) {
    std::vector<SweepRow> rows(models.size());
    const std::size_t threads = std::min(sweep_threads(options.threads), std::max<std::size_t>(1, models.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < models.size(); i = next++) rows[i] = evaluate_point(models[i], options.source);
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    return rows;
}

inline std::vector<SweepRow> sweep(const SweepGrid& grid, SweepOptions options = {}) {
    return sweep(expand(grid), options);
}

/// Rows over `sizes` for one asymmetry level. Tori use square k x k dims.
inline std::vector<SweepRow> absolute_error_curve(Kind kind, const std::vector<std::size_t>& sizes, double a,
                                                  std::size_t r = 1, SweepOptions options = {}) {
    if (!(a > 0.0 && a <= 1.0)) throw ParameterError("absolute error curve needs a in (0, 1]");
    std::vector<NetworkModel> models;
    for (std::size_t n : sizes) {
        switch (kind) {
            case Kind::Ring: models.push_back(NetworkModel::ring(n, a)); break;
            case Kind::RNearestRing: models.push_back(NetworkModel::rnearest(n, r, a)); break;
            case Kind::Torus: models.push_back(NetworkModel::torus({n, n}, a)); break;
        }
    }
    return sweep(models, options);
}

/// First a at which the rate reaches 0, linearly interpolated between grid
/// points. `rows` must be ordered by increasing a.
inline std::optional<double> zero_crossing(const std::vector<SweepRow>& rows) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].ok() || rows[i].rate > 0.0) continue;
        if (i == 0 || !rows[i - 1].ok()) return rows[i].model.a;
        const double a0 = rows[i - 1].model.a;
        const double a1 = rows[i].model.a;
        const double r0 = rows[i - 1].rate;
        const double r1 = rows[i].rate;
        return r0 == r1 ? a1 : a0 + (a1 - a0) * r0 / (r0 - r1);
    }
    return std::nullopt;
}

/// Largest a whose rate exceeds `threshold`.
inline std::optional<double> largest_a_above(const std::vector<SweepRow>& rows, double threshold) {
    std::optional<double> best;
    for (const auto& row : rows) {
        if (row.ok() && row.rate > threshold && (!best || row.model.a > *best)) best = row.model.a;
    }
    return best;
}

// ---------------------------------------------------------------------------

struct FigureDataset {
    int id = 0;
    std::string file_name;
    std::map<std::string, std::string> metadata;
    std::vector<SweepRow> rows;
};

inline constexpr int kFigureIds[] = {3, 4, 5, 6, 7};

namespace detail {

inline std::vector<std::size_t> stepped(std::size_t first, std::size_t last, std::size_t step) {
    std::vector<std::size_t> out;
    for (std::size_t v = first; v <= last; v += step) out.push_back(v);
    return out;
}

inline std::vector<double> a_grid(int steps) {
    std::vector<double> out;
    for (int i = 0; i <= steps; ++i) out.push_back(static_cast<double>(i) / steps);
    return out;
}

}  // namespace detail

/// Datasets use the figures' stated parameters; ranges they leave open are
/// fixed defaults recorded in `metadata`.
inline FigureDataset figure_dataset(int id, SweepOptions options = {}) {
    FigureDataset out;
    out.id = id;
    out.metadata["rates"] = options.source == RateSource::Pipeline ? "pipeline" : "closed";
    out.metadata["e_symbol"] = "read as a";
    std::vector<NetworkModel> models;
    switch (id) {
        case 3: {
            SweepGrid grid{Kind::Ring, detail::stepped(4, 40, 2), {1}, {}, {0.0, 0.3, 0.6, 0.9}};
            models = expand(grid);
            out.file_name = "fig3_ring_n4-40_a0-0.3-0.6-0.9.csv";
            out.metadata["grid"] = "ring n=4..40 step 2, a in {0,0.3,0.6,0.9} (default)";
            break;
        }
        case 4: {
            const auto ks = detail::stepped(5, 21, 2);
            for (std::size_t k1 : ks)
                for (std::size_t k2 : ks) models.push_back(NetworkModel::torus({k1, k2}, 0.5));
            out.file_name = "fig4_torus_k5-21odd_a0.5.csv";
            out.metadata["grid"] = "torus k1,k2 in {5,7,...,21} (default), a=0.5 (default)";
            break;
        }
        case 5: {
            SweepGrid grid{Kind::RNearestRing, {400}, {1, 2, 4, 8}, {}, detail::a_grid(20)};
            models = expand(grid);
            out.file_name = "fig5_rnearest_n400_r1-2-4-8_a0-1.csv";
            out.metadata["grid"] = "rnearest n=400, r in {1,2,4,8} (default), a=0..1 step 0.05 (default)";
            break;
        }
        case 6: {
            const std::vector<std::size_t> all{11, 15, 21, 25, 27};
            models.push_back(NetworkModel::ring(11, 0.5));
            for (std::size_t m = 2; m <= all.size(); ++m) {
                models.push_back(NetworkModel::torus({all.begin(), all.begin() + static_cast<std::ptrdiff_t>(m)}, 0.5));
            }
            out.file_name = "fig6_mtorus_dims11-15-21-25-27_a0.5.csv";
            out.metadata["grid"] = "dims prefixes of 11,15,21,25,27 for m=1..5 (m=1 is ring n=11), a=0.5 (default)";
            break;
        }
        case 7: {
            SweepGrid grid{Kind::Ring, {}, {1}, {}, {0.3, 0.9}};
            grid.n = detail::stepped(4, 64, 2);
            for (double a : grid.a)
                for (std::size_t n : grid.n) models.push_back(NetworkModel::ring(n, a));
            out.file_name = "fig7_ring_abs_error_n4-64_a0.3-0.9.csv";
            out.metadata["grid"] = "ring n=4..64 step 2 (default), a in {0.3,0.9}; rows grouped by a";
            break;
        }
        default:
            throw ParameterError("figure id must be one of 3, 4, 5, 6, 7");
    }
    out.rows = sweep(models, options);
    return out;
}

}  // namespace consensus
