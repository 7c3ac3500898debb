#pragma once

// Command-line frontend. run_cli() is the whole program; the executable in
// tools/ only forwards argv and the standard streams.
//
// Exit status: 0 success, 1 validation or usage error, 2 computation error.
// Errors print one line on the diagnostic stream:
//   error: <ErrorKind>: <message>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "analysis.hpp"
#include "design.hpp"
#include "errors.hpp"
#include "export.hpp"
#include "model_grammar.hpp"
#include "simulate.hpp"
#include "spectral.hpp"
#include "topology.hpp"

namespace consensus {

struct CliConfig {
    std::string command;
    std::optional<NetworkModel> model;
    std::string format;  // empty: per-command default
    std::string out;     // empty: standard output
    std::uint64_t seed = 42;
    std::string method = "pipeline";

    std::string source = "closed";
    std::size_t dense_cap = kDefaultDenseCap;
    std::optional<double> h;
    std::size_t steps = 1000;
    double tol = 1e-10;
    std::string multiply = "structured";
    std::size_t trials = 5;
    std::size_t warmup = kDefaultWarmup;
    std::size_t window = kDefaultWindow;
    std::vector<std::size_t> n;
    std::vector<std::size_t> r;
    std::vector<std::string> dims;
    std::vector<double> a;
    int figure_id = 0;
    std::string out_dir;
};

namespace detail {

inline std::string one_line(std::string text) {
    for (char& c : text) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return text;
}

inline ConsensusDesign design_for(const CliConfig& cfg, const NetworkModel& model) {
    if (cfg.method == "closed") return closed_form_design(model);
    if (cfg.method == "minimax") return minimax_h(full_spectrum(model));
    return design_pipeline(model);
}

inline std::vector<std::size_t> parse_dims(const std::string& text) {
    return parse_model("torus:dims=" + text + ",a=0").dims;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ParameterError("cannot open '" + path.string() + "' for writing");
    file << content;
    if (!file.flush()) throw ParameterError("write to '" + path.string() + "' failed");
}

inline std::string render_figure(const FigureDataset& data, const std::string& format) {
    std::ostringstream os;
    if (format == "json") {
        os << Json{{"metadata", figure_metadata_json(data)}}.dump() << '\n';
        write_sweep_jsonl(os, data.rows);
    } else {
        write_sweep_csv(os, data.rows);
    }
    return os.str();
}

}  // namespace detail

/// Runs a parsed configuration, writing the result to `os`.
inline void dispatch(const CliConfig& cfg, std::ostream& os) {
    const bool json = cfg.format == "json";
    const auto require_model = [&]() -> const NetworkModel& {
        if (!cfg.model) throw ParameterError("--model is required; grammar: " + std::string(kModelGrammar));
        return *cfg.model;
    };

    if (cfg.command == "spectrum") {
        const auto& model = require_model();
        SpectrumSource source = SpectrumSource::ClosedForm;
        if (cfg.source == "dft") source = SpectrumSource::DftOracle;
        if (cfg.source == "cartesian") source = SpectrumSource::CartesianSum;
        const Spectrum spectrum = full_spectrum(model, source, cfg.dense_cap);
        if (json) {
            os << spectrum_json(spectrum).dump(2) << '\n';
        } else {
            write_spectrum_csv(os, spectrum);
        }
    } else if (cfg.command == "design") {
        const auto& model = require_model();
        std::optional<ConsensusDesign> pipeline;
        ConsensusDesign design;
        if (cfg.method == "minimax") {
            design = minimax_h(full_spectrum(model));
        } else {
            pipeline = design_pipeline(model);
            design = cfg.method == "closed" ? closed_form_design(model, *pipeline) : *pipeline;
        }
        const auto report = reconciliation_report(model, pipeline);
        if (json) {
            os << design_json(model, design, report).dump(2) << '\n';
        } else {
            write_design_csv(os, model, design, report);
        }
    } else if (cfg.command == "simulate") {
        const auto& model = require_model();
        const double h = cfg.h ? *cfg.h : detail::design_for(cfg, model).h;
        const auto x0 = random_initial_state(model.order(), cfg.seed);
        const auto trace = run_consensus(model, h, x0, cfg.steps, cfg.tol,
                                         cfg.multiply == "dense" ? Multiply::Dense : Multiply::Structured, cfg.dense_cap);
        if (json) {
            Json out{{"model", format_model(model)}, {"h", real_json(h)}, {"seed", cfg.seed}};
            out.update(trace_json(trace));
            os << out.dump(2) << '\n';
        } else {
            write_trace_csv(os, trace);
        }
    } else if (cfg.command == "verify") {
        const auto& model = require_model();
        ConsensusDesign design = detail::design_for(cfg, model);
        if (cfg.h) {
            design.h = *cfg.h;
            design.gamma = spectral_factor(full_spectrum(model), *cfg.h);
            design.rate = 1.0 - design.gamma;
        }
        VerifyOptions options{cfg.warmup, cfg.window,
                              cfg.multiply == "dense" ? Multiply::Dense : Multiply::Structured, cfg.dense_cap};
        const auto report = verify_consensus(model, design, cfg.trials, cfg.seed, options);
        if (json) {
            os << verify_json(report).dump(2) << '\n';
        } else {
            write_verify_csv(os, report);
        }
    } else if (cfg.command == "sweep") {
        const auto& model = require_model();
        if (cfg.method == "minimax") throw ParameterError("sweep supports --method pipeline or closed");
        SweepGrid grid;
        grid.kind = model.kind;
        grid.n = cfg.n.empty() ? std::vector<std::size_t>{model.n} : cfg.n;
        grid.r = cfg.r.empty() ? std::vector<std::size_t>{model.r} : cfg.r;
        if (cfg.dims.empty()) {
            grid.dims = {model.dims};
        } else {
            for (const auto& text : cfg.dims) grid.dims.push_back(detail::parse_dims(text));
        }
        grid.a = cfg.a.empty() ? std::vector<double>{model.a} : cfg.a;
        const auto rows = sweep(grid, {cfg.method == "closed" ? RateSource::Closed : RateSource::Pipeline, 0});
        if (json) {
            write_sweep_jsonl(os, rows);
        } else {
            write_sweep_csv(os, rows);
        }
    } else if (cfg.command == "figure") {
        if (cfg.method == "minimax") throw ParameterError("figure supports --method pipeline or closed");
        const auto data =
            figure_dataset(cfg.figure_id, {cfg.method == "closed" ? RateSource::Closed : RateSource::Pipeline, 0});
        const std::string body = detail::render_figure(data, cfg.format);
        if (cfg.out_dir.empty()) {
            os << body;
        } else {
            std::filesystem::path dir(cfg.out_dir);
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            std::filesystem::path file = dir / data.file_name;
            if (json) file.replace_extension(".jsonl");
            detail::write_file(file, body);
            if (!json) {
                std::filesystem::path meta = dir / data.file_name;
                meta.replace_extension(".meta.json");
                detail::write_file(meta, figure_metadata_json(data).dump(2) + "\n");
            }
            os << file.string() << '\n';
        }
    } else {
        throw ParameterError("unknown command '" + cfg.command + "'");
    }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Convergence rates of best-constant consensus on directed rings and tori", "consensus_spectra"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1, 1);

    CliConfig cfg;
    std::string model_text;
    std::optional<double> h_value;

    const std::vector<std::string> formats{"csv", "json"};
    const std::vector<std::string> methods{"pipeline", "closed", "minimax"};

    auto add_model = [&](CLI::App* sub) {
        sub->add_option("--model", model_text, std::string("network model: ") + std::string(kModelGrammar))
            ->required();
    };
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember(formats));
        sub->add_option("--out", cfg.out, "output file (default: standard output)");
    };
    auto add_method = [&](CLI::App* sub) {
        sub->add_option("--method", cfg.method, "pipeline, closed or minimax")->check(CLI::IsMember(methods));
    };
    auto add_dense_cap = [&](CLI::App* sub) {
        sub->add_option("--dense-cap", cfg.dense_cap, "largest order allowed for dense/DFT routes");
    };

    auto* spectrum = app.add_subcommand("spectrum", "all Laplacian eigenvalues in index order");
    add_model(spectrum);
    add_output(spectrum);
    add_dense_cap(spectrum);
    spectrum->add_option("--source", cfg.source, "closed, dft or cartesian")
        ->check(CLI::IsMember({"closed", "dft", "cartesian"}));

    auto* design = app.add_subcommand("design", "consensus parameter h, factor gamma and rate R");
    add_model(design);
    add_output(design);
    add_method(design);

    auto* simulate = app.add_subcommand("simulate", "iterate x(t+1) = (I - hL) x(t) from a seeded random state");
    add_model(simulate);
    add_output(simulate);
    add_method(simulate);
    add_dense_cap(simulate);
    simulate->add_option("--h", h_value, "override the designed h");
    simulate->add_option("--steps", cfg.steps, "maximum number of steps");
    simulate->add_option("--tol", cfg.tol, "stop when the error norm is at most this");
    simulate->add_option("--seed", cfg.seed, "initial-state seed");
    simulate->add_option("--multiply", cfg.multiply, "structured or dense")
        ->check(CLI::IsMember({"structured", "dense"}));

    auto* verify = app.add_subcommand("verify", "compare empirical contraction with gamma over random trials");
    add_model(verify);
    add_output(verify);
    add_method(verify);
    add_dense_cap(verify);
    verify->add_option("--h", h_value, "override the designed h");
    verify->add_option("--trials", cfg.trials, "number of random initial states");
    verify->add_option("--seed", cfg.seed, "seed of trial 0; trial t uses seed + t");
    verify->add_option("--warmup", cfg.warmup, "steps before the estimation window");
    verify->add_option("--window", cfg.window, "steps in the estimation window");
    verify->add_option("--multiply", cfg.multiply, "structured or dense")
        ->check(CLI::IsMember({"structured", "dense"}));

    auto* sweep_cmd = app.add_subcommand("sweep", "rates over a parameter grid around --model");
    add_model(sweep_cmd);
    add_output(sweep_cmd);
    add_method(sweep_cmd);
    sweep_cmd->add_option("--n", cfg.n, "node counts, comma separated")->delimiter(',');
    sweep_cmd->add_option("--r", cfg.r, "neighbor radii, comma separated")->delimiter(',');
    sweep_cmd->add_option("--dims", cfg.dims, "torus shapes such as 4x4, comma separated")->delimiter(',');
    sweep_cmd->add_option("--a", cfg.a, "asymmetry factors, comma separated")->delimiter(',');

    auto* figure = app.add_subcommand("figure", "dataset behind one of the rate figures");
    add_output(figure);
    add_method(figure);
    figure->add_option("--id", cfg.figure_id, "figure number: 3, 4, 5, 6 or 7")
        ->required()
        ->check(CLI::IsMember({3, 4, 5, 6, 7}));
    figure->add_option("--out-dir", cfg.out_dir, "write fig<id>_<params>.csv into this directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error: UsageError: " << detail::one_line(e.what()) << '\n';
        err << "model grammar: " << kModelGrammar << '\n';
        return 1;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    if (cfg.format.empty()) cfg.format = (cfg.command == "design" || cfg.command == "verify") ? "json" : "csv";
    cfg.h = h_value;

    try {
        if (!model_text.empty()) cfg.model = parse_model(model_text);
        std::ostringstream buffer;
        dispatch(cfg, buffer);
        if (cfg.out.empty()) {
            out << buffer.str();
            out.flush();
        } else {
            detail::write_file(cfg.out, buffer.str());
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.kind() << ": " << detail::one_line(e.what()) << '\n';
        return 1;
    } catch (const ComputationError& e) {
        err << "error: " << e.kind() << ": " << detail::one_line(e.what()) << '\n';
        return 2;
    }
    return 0;
}

}  // namespace consensus
