#pragma once

// Text form of a NetworkModel:
//
//   ring:n=<int>,a=<float>
//   rnearest:n=<int>,r=<int>,a=<float>
//   torus:dims=<int>x<int>[x<int>...],a=<float>
//
// format_model() prints `a` in shortest round-trip form, so
// parse_model(format_model(m)) == m for every valid m.

#include <charconv>
#include <map>
#include <string>
#include <string_view>
#include <system_error>

#include "errors.hpp"
#include "topology.hpp"

namespace consensus {

inline constexpr std::string_view kModelGrammar =
    "ring:n=<int>,a=<float> | rnearest:n=<int>,r=<int>,a=<float> | "
    "torus:dims=<int>x<int>[x<int>...],a=<float>";

namespace detail {

inline std::size_t parse_count(std::string_view text, std::string_view what) {
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ParameterError("invalid integer for " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return value;
}

inline double parse_real(std::string_view text, std::string_view what) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ParameterError("invalid number for " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace detail

/// Shortest decimal text that reads back to exactly `value`.
inline std::string format_real(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return {buf, ptr};
}

inline NetworkModel parse_model(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw ParameterError("model must look like " + std::string(kModelGrammar));
    }
    const std::string_view kind = text.substr(0, colon);
    std::map<std::string, std::string, std::less<>> fields;
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0) {
            throw ParameterError("expected key=value, got '" + std::string(item) + "'");
        }
        auto [it, inserted] = fields.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
        if (!inserted) throw ParameterError("duplicate key '" + it->first + "'");
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }

    auto take = [&](std::string_view key) {
        auto it = fields.find(key);
        if (it == fields.end()) throw ParameterError("missing key '" + std::string(key) + "' in " + std::string(text));
        std::string value = std::move(it->second);
        fields.erase(it);
        return value;
    };

    NetworkModel model;
    if (kind == "ring") {
        model = NetworkModel::ring(detail::parse_count(take("n"), "n"), 0.0);
    } else if (kind == "rnearest") {
        const auto n = detail::parse_count(take("n"), "n");
        model = NetworkModel::rnearest(n, detail::parse_count(take("r"), "r"), 0.0);
    } else if (kind == "torus") {
        std::vector<std::size_t> dims;
        const std::string spec = take("dims");
        std::string_view view = spec;
        while (true) {
            const auto x = view.find('x');
            dims.push_back(detail::parse_count(view.substr(0, x), "dims"));
            if (x == std::string_view::npos) break;
            view = view.substr(x + 1);
        }
        model = NetworkModel::torus(std::move(dims), 0.0);
    } else {
        throw ParameterError("unknown model kind '" + std::string(kind) + "'; expected " + std::string(kModelGrammar));
    }
    model.a = detail::parse_real(take("a"), "a");
    if (!fields.empty()) throw ParameterError("unknown key '" + fields.begin()->first + "'");
    validate(model);
    return model;
}

inline std::string format_model(const NetworkModel& model) {
    std::string out = to_string(model.kind);
    out += ':';
    switch (model.kind) {
        case Kind::Ring:
            out += "n=" + std::to_string(model.n);
            break;
        case Kind::RNearestRing:
            out += "n=" + std::to_string(model.n) + ",r=" + std::to_string(model.r);
            break;
        case Kind::Torus:
            out += "dims=";
            for (std::size_t l = 0; l < model.dims.size(); ++l) {
                if (l) out += 'x';
                out += std::to_string(model.dims[l]);
            }
            break;
    }
    out += ",a=" + format_real(model.a);
    return out;
}

}  // namespace consensus
