#pragma once

// JSON encodings of models, states, sample sets, partial-fraction
// representations and evaluation grids. Complex scalars are [re, im] pairs.
// Output is written by hand with 17 significant digits so that identical
// inputs give byte-identical files.

#include <charconv>
#include <cstddef>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "rankone/errors.hpp"
#include "rankone/jacobi.hpp"
#include "rankone/oscillator.hpp"
#include "rankone/spectral_model.hpp"

namespace rankone::io {

using nlohmann::json;

/// Malformed files (as opposed to invalid numerical content).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A loaded model file. `jacobi` is kept for Jacobi models so that the
/// polynomial routes can be cross-checked.
struct ModelFile {
    SpectralModel model;
    std::optional<JacobiParams> jacobi;
    std::size_t truncation = 0;
};

inline std::string format_real(double x) {
    if (x == 0.0) x = 0.0;  // no "-0"
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
}

namespace detail {

inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

inline double as_real(const json& j) {
    if (!j.is_number()) throw FormatError("expected a number, got " + j.dump());
    return j.get<double>();
}

inline std::size_t as_index(const json& j) {
    if (!j.is_number_integer() || j.get<long long>() < 0) throw FormatError("expected a non-negative integer");
    return j.get<std::size_t>();
}

inline std::vector<double> as_reals(const json& j) {
    if (!j.is_array()) throw FormatError("expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const json& x : j) out.push_back(as_real(x));
    return out;
}

inline Complex as_complex(const json& j) {
    if (!j.is_array() || j.size() != 2) throw FormatError("complex scalars are [re, im] pairs, got " + j.dump());
    return {as_real(j[0]), as_real(j[1])};
}

inline std::vector<Complex> as_complexes(const json& j) {
    if (!j.is_array()) throw FormatError("expected an array of [re, im] pairs");
    std::vector<Complex> out;
    out.reserve(j.size());
    for (const json& x : j) out.push_back(as_complex(x));
    return out;
}

inline void write_reals(std::ostream& os, std::span<const double> xs) {
    os << '[';
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << format_real(xs[i]);
    os << ']';
}

inline void write_complex(std::ostream& os, Complex z) {
    os << '[' << format_real(z.real()) << ',' << format_real(z.imag()) << ']';
}

inline void write_complexes(std::ostream& os, std::span<const Complex> zs) {
    os << '[';
    for (std::size_t i = 0; i < zs.size(); ++i) {
        if (i) os << ',';
        write_complex(os, zs[i]);
    }
    os << ']';
}

}  // namespace detail

/// {"kind":"explicit",...}, {"kind":"jacobi",...} or {"kind":"oscillator",...}.
inline ModelFile parse_model(const json& j) {
    const json& kind_field = detail::field(j, "kind");
    if (!kind_field.is_string()) throw FormatError("\"kind\" must be a string");
    const std::string kind = kind_field.get<std::string>();
    if (kind == "explicit") {
        return {SpectralModel(detail::as_reals(detail::field(j, "eigenvalues")),
                              detail::as_reals(detail::field(j, "weights"))),
                std::nullopt, 0};
    }
    if (kind == "jacobi") {
        JacobiParams params(detail::as_reals(detail::field(j, "q")), detail::as_reals(detail::field(j, "b")));
        const std::size_t n = detail::as_index(detail::field(j, "truncation"));
        SpectralModel model = truncate(params, n);
        return {std::move(model), std::move(params), n};
    }
    if (kind == "oscillator") {
        const std::size_t levels = detail::as_index(detail::field(j, "levels"));
        bool normalized = false;
        if (j.contains("normalized")) {
            if (!j.at("normalized").is_boolean()) throw FormatError("\"normalized\" must be a boolean");
            normalized = j.at("normalized").get<bool>();
        }
        return {oscillator_model(levels, normalized), std::nullopt, 0};
    }
    throw FormatError("unknown model kind \"" + kind + "\"");
}

inline std::string model_to_json(const SpectralModel& model) {
    std::ostringstream os;
    os << R"({"kind":"explicit","eigenvalues":)";
    detail::write_reals(os, model.eigenvalues());
    os << R"(,"weights":)";
    detail::write_reals(os, model.weights());
    os << '}';
    return os.str();
}

/// {"coords":[[re,im],...]}
inline StateVector parse_state(const json& j) { return StateVector(detail::as_complexes(detail::field(j, "coords"))); }

inline std::string state_to_json(const StateVector& phi) {
    std::ostringstream os;
    os << R"({"coords":)";
    detail::write_complexes(os, phi.coords());
    os << '}';
    return os.str();
}

/// {"h": number, "nodes":[...], "weights":[...], "values":[[re,im],...]}
inline SampleSet parse_sample_set(const json& j) {
    return SampleSet(detail::as_real(detail::field(j, "h")), detail::as_reals(detail::field(j, "nodes")),
                     detail::as_reals(detail::field(j, "weights")), detail::as_complexes(detail::field(j, "values")));
}

inline std::string sample_set_to_json(const SampleSet& s) {
    std::ostringstream os;
    os << R"({"h":)" << format_real(s.h()) << R"(,"nodes":)";
    detail::write_reals(os, s.nodes());
    os << R"(,"weights":)";
    detail::write_reals(os, s.node_weights());
    os << R"(,"values":)";
    detail::write_complexes(os, s.values());
    os << '}';
    return os.str();
}

/// {"c":[re,im], "poles":[...], "coeffs":[[re,im],...]}
inline MeromorphicRep parse_rep(const json& j) {
    return MeromorphicRep(detail::as_complex(detail::field(j, "c")), detail::as_reals(detail::field(j, "poles")),
                          detail::as_complexes(detail::field(j, "coeffs")));
}

inline std::string rep_to_json(const MeromorphicRep& rep) {
    std::ostringstream os;
    os << R"({"c":)";
    detail::write_complex(os, rep.constant());
    os << R"(,"poles":)";
    detail::write_reals(os, rep.poles());
    os << R"(,"coeffs":)";
    detail::write_complexes(os, rep.coefficients());
    os << '}';
    return os.str();
}

/// {"points":[[re,im],...]}
inline std::vector<Complex> parse_grid(const json& j) { return detail::as_complexes(detail::field(j, "points")); }

/// {"nodes":[...]} plus "weights" when given.
inline std::string spectrum_to_json(std::span<const double> nodes, const std::vector<double>* weights) {
    std::ostringstream os;
    os << R"({"nodes":)";
    detail::write_reals(os, nodes);
    if (weights != nullptr) {
        os << R"(,"weights":)";
        detail::write_reals(os, *weights);
    }
    os << '}';
    return os.str();
}

}  // namespace rankone::io
