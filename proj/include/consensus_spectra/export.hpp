#pragma once

// CSV (';'-delimited, '.' decimals, header row) and JSON renderings.
// Reals print in shortest round-trip form; non-finite values print as
// nan/inf in CSV and null in JSON.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "analysis.hpp"
#include "design.hpp"
#include "model_grammar.hpp"
#include "simulate.hpp"
#include "spectral.hpp"

namespace consensus {

using Json = nlohmann::ordered_json;

inline std::string join_index(const MultiIndex& index, char sep = '|') {
    std::string out;
    for (std::size_t l = 0; l < index.size(); ++l) {
        if (l) out += sep;
        out += std::to_string(index[l]);
    }
    return out;
}

inline Json real_json(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json eigenvalue_json(const ComplexEigenvalue& e) {
    return Json{{"index", e.index}, {"re", real_json(e.re)}, {"im", real_json(e.im)}};
}

// -- spectrum -----------------------------------------------------------------

inline void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum) {
    os << "index;re;im\n";
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        const Complex v = spectrum.values()[i];
        os << join_index(spectrum.index_of(i)) << ';' << format_real(v.real()) << ';' << format_real(v.imag()) << '\n';
    }
}

inline Json spectrum_json(const Spectrum& spectrum) {
    Json values = Json::array();
    for (std::size_t i = 0; i < spectrum.size(); ++i) values.push_back(eigenvalue_json(spectrum.at(i)));
    Json out;
    if (spectrum.model()) out["model"] = format_model(*spectrum.model());
    out["source"] = to_string(spectrum.source());
    out["shape"] = spectrum.shape();
    out["eigenvalues"] = std::move(values);
    return out;
}

// -- design -------------------------------------------------------------------

/// Closed-form rate comparison, or the reason there is none.
struct ReconciliationReport {
    std::optional<ClosedFormRate> rate;
    std::optional<double> closed_h;
    std::string error_kind;
    std::string error;
};

inline ReconciliationReport reconciliation_report(const NetworkModel& model, const std::optional<ConsensusDesign>& pipeline) {
    ReconciliationReport out;
    try {
        closed_form_case(model);
        out.closed_h = closed_form_h(model);
        out.rate = pipeline ? closed_form_R(model, *pipeline) : closed_form_R(model);
    } catch (const Error& e) {
        out.error_kind = e.kind();
        out.error = e.what();
    }
    return out;
}

inline Json assumptions_json() {
    return Json{{"e_symbol", "the undefined symbol e in the r-nearest h expressions is read as a"},
                {"gamma", "|1 - h lambda_s|"},
                {"rate", "1 - gamma"}};
}

inline Json reconciliation_json(const ReconciliationReport& report) {
    if (!report.rate) return Json{{"error_kind", report.error_kind}, {"message", report.error}};
    return Json{{"formula", to_string(report.rate->formula)},
                {"closed_h", real_json(report.closed_h.value_or(std::nan("")))},
                {"printed_rate", real_json(report.rate->value)},
                {"pipeline_rate", real_json(report.rate->pipeline_rate)},
                {"tag", to_string(report.rate->tag)}};
}

inline Json design_json(const NetworkModel& model, const ConsensusDesign& design, const ReconciliationReport& report) {
    Json out;
    out["model"] = format_model(model);
    out["h"] = real_json(design.h);
    out["gamma"] = real_json(design.gamma);
    out["rate"] = real_json(design.rate);
    out["method"] = to_string(design.method);
    out["lambda_s"] = design.extremal ? eigenvalue_json(design.extremal->lambda_s) : Json(nullptr);
    out["lambda_l"] = design.extremal ? eigenvalue_json(design.extremal->lambda_l) : Json(nullptr);
    out["reconciliation"] = reconciliation_json(report);
    out["assumptions"] = assumptions_json();
    return out;
}

inline void write_design_csv(std::ostream& os, const NetworkModel& model, const ConsensusDesign& design,
                             const ReconciliationReport& report) {
    os << "model;h;gamma;rate;method;lambda_s_re;lambda_s_im;lambda_l_re;lambda_l_im;printed_rate;tag\n";
    os << format_model(model) << ';' << format_real(design.h) << ';' << format_real(design.gamma) << ';'
       << format_real(design.rate) << ';' << to_string(design.method) << ';';
    if (design.extremal) {
        os << format_real(design.extremal->lambda_s.re) << ';' << format_real(design.extremal->lambda_s.im) << ';'
           << format_real(design.extremal->lambda_l.re) << ';' << format_real(design.extremal->lambda_l.im) << ';';
    } else {
        os << ";;;;";
    }
    if (report.rate) {
        os << format_real(report.rate->value) << ';' << to_string(report.rate->tag) << '\n';
    } else {
        os << ';' << report.error_kind << '\n';
    }
}

// -- simulation ---------------------------------------------------------------

inline void write_trace_csv(std::ostream& os, const SimulationTrace& trace) {
    os << "step;error_norm;average\n";
    for (std::size_t t = 0; t < trace.error_norms.size(); ++t) {
        os << t << ';' << format_real(trace.error_norms[t]) << ';' << format_real(trace.averages[t]) << '\n';
    }
}

inline Json trace_json(const SimulationTrace& trace) {
    Json norms = Json::array();
    Json averages = Json::array();
    for (double v : trace.error_norms) norms.push_back(real_json(v));
    for (double v : trace.averages) averages.push_back(real_json(v));
    return Json{{"steps", trace.steps},
                {"converged", trace.converged},
                {"empirical_factor", real_json(trace.empirical_factor)},
                {"error_norms", std::move(norms)},
                {"averages", std::move(averages)}};
}

inline Json verify_json(const std::vector<TrialResult>& report) {
    Json out = Json::array();
    for (const auto& row : report) {
        Json entry{{"trial", row.trial},
                   {"seed", row.seed},
                   {"empirical_factor", real_json(row.empirical_factor)},
                   {"gamma", real_json(row.gamma)},
                   {"pass", row.pass}};
        if (!row.pass) entry["message"] = row.message;
        out.push_back(std::move(entry));
    }
    return out;
}

inline void write_verify_csv(std::ostream& os, const std::vector<TrialResult>& report) {
    os << "trial;seed;empirical_factor;gamma;pass\n";
    for (const auto& row : report) {
        os << row.trial << ';' << row.seed << ';' << format_real(row.empirical_factor) << ';' << format_real(row.gamma)
           << ';' << (row.pass ? "true" : "false") << '\n';
    }
}

// -- sweeps -------------------------------------------------------------------

inline std::string dims_text(const NetworkModel& model) {
    return model.is_torus() ? join_index(model.dims, 'x') : std::string{};
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "kind;n;r;dims;a;h;gamma;rate;rate_symmetric;absolute_error;method;error\n";
    for (const auto& row : rows) {
        const auto& m = row.model;
        os << to_string(m.kind) << ';' << m.order() << ';' << (m.is_torus() ? 0 : m.r) << ';' << dims_text(m) << ';'
           << format_real(m.a) << ';';
        if (row.ok()) {
            os << format_real(row.h) << ';' << format_real(row.gamma) << ';' << format_real(row.rate) << ';'
               << format_real(row.rate_symmetric) << ';' << format_real(row.absolute_error) << ';'
               << to_string(row.method) << ";\n";
        } else {
            os << ";;;;;" << to_string(row.method) << ';' << row.error_kind << '\n';
        }
    }
}

inline Json sweep_row_json(const SweepRow& row) {
    const auto& m = row.model;
    Json out{{"kind", to_string(m.kind)}, {"n", m.order()}};
    if (m.kind == Kind::RNearestRing) out["r"] = m.r;
    if (m.is_torus()) out["dims"] = m.dims;
    out["a"] = m.a;
    if (row.ok()) {
        out["h"] = real_json(row.h);
        out["gamma"] = real_json(row.gamma);
        out["rate"] = real_json(row.rate);
        out["rate_symmetric"] = real_json(row.rate_symmetric);
        out["absolute_error"] = real_json(row.absolute_error);
    } else {
        out["error_kind"] = row.error_kind;
        out["error"] = row.error;
    }
    out["method"] = to_string(row.method);
    return out;
}

/// JSON-lines, one object per row.
inline void write_sweep_jsonl(std::ostream& os, const std::vector<SweepRow>& rows) {
    for (const auto& row : rows) os << sweep_row_json(row).dump() << '\n';
}

inline Json figure_metadata_json(const FigureDataset& data) {
    Json meta = Json::object();
    meta["figure"] = data.id;
    meta["file"] = data.file_name;
    for (const auto& [key, value] : data.metadata) meta[key] = value;
    meta["rows"] = data.rows.size();
    return meta;
}

}  // namespace consensus
