// File formats: JSON state sets, JSON PCA models, JSON matrix blocks and
// "d,value" CSV curves. Every floating-point number is written with 17
// significant digits so doubles survive a round trip bit for bit. Files are
// written to a temporary sibling and renamed into place.

#ifndef QDECIM_IO_HPP
#define QDECIM_IO_HPP

#include "qdecim/numerics.hpp"
#include "qdecim/pca.hpp"
#include "qdecim/stateset.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

namespace qdecim::io {

/// Raised when a file cannot be read or written (as opposed to malformed content).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kModelFormatVersion = 1;

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read error on " + path.string());
    return text;
}

inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << text;
        out.flush();
        if (!out) throw IoError("write error on " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into place at " + path.string());
    }
}

namespace detail {

inline void append_complex(std::string& out, Complex z) {
    out += '[';
    out += format_double(z.real());
    out += ", ";
    out += format_double(z.imag());
    out += ']';
}

// Columns of m as a JSON array of arrays of [re, im] pairs, one column per line.
inline void append_columns(std::string& out, const ComplexMatrix& m, const char* indent) {
    out += "[\n";
    for (Index j = 0; j < m.cols(); ++j) {
        out += indent;
        out += "  [";
        for (Index i = 0; i < m.rows(); ++i) {
            if (i > 0) out += ", ";
            append_complex(out, m(i, j));
        }
        out += j + 1 < m.cols() ? "],\n" : "]\n";
    }
    out += indent;
    out += ']';
}

inline std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

[[noreturn]] inline void malformed(const std::string& what) {
    throw Error(ErrorKind::InvalidArgument, "malformed file: " + what);
}

inline nlohmann::json parse_json(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        malformed(e.what());
    }
}

inline const nlohmann::json& member(const nlohmann::json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) malformed(std::string("missing \"") + key + "\"");
    return j.at(key);
}

inline double number(const nlohmann::json& j, const char* what) {
    if (!j.is_number()) malformed(std::string(what) + " is not a number");
    return j.get<double>();
}

inline Index count_value(const nlohmann::json& j, const char* what) {
    if (!j.is_number_integer() && !j.is_number_unsigned()) {
        malformed(std::string(what) + " is not an integer");
    }
    const auto v = j.get<long long>();
    if (v < 0) malformed(std::string(what) + " is negative");
    return static_cast<Index>(v);
}

inline Complex complex_value(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) malformed("complex entry must be [re, im]");
    return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

inline ComplexMatrix columns(const nlohmann::json& j, Index rows, Index cols, const char* what) {
    if (!j.is_array() || static_cast<Index>(j.size()) != cols) {
        malformed(std::string(what) + " must hold " + std::to_string(cols) + " columns");
    }
    ComplexMatrix m(rows, cols);
    for (Index c = 0; c < cols; ++c) {
        const auto& col = j[static_cast<std::size_t>(c)];
        if (!col.is_array() || static_cast<Index>(col.size()) != rows) {
            malformed(std::string(what) + " column " + std::to_string(c) + " must have " +
                      std::to_string(rows) + " entries");
        }
        for (Index r = 0; r < rows; ++r) m(r, c) = complex_value(col[static_cast<std::size_t>(r)]);
    }
    return m;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// State-set files:
//   { "dimension": D, "states": [ [[re, im] x D] x M ], "labels": [...] }

struct StateSetData {
    ComplexMatrix matrix;  // D x M
    std::vector<std::string> labels;
};

inline std::string state_set_json(const ComplexMatrix& states,
                                  const std::vector<std::string>& labels = {}) {
    std::string out = "{\n  \"dimension\": " + std::to_string(states.rows()) + ",\n";
    out += "  \"states\": ";
    detail::append_columns(out, states, "  ");
    if (!labels.empty()) {
        out += ",\n  \"labels\": [";
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (i > 0) out += ", ";
            out += detail::quote(labels[i]);
        }
        out += ']';
    }
    out += "\n}\n";
    return out;
}

inline StateSetData parse_state_set(const std::string& text) {
    const nlohmann::json j = detail::parse_json(text);
    const Index dim = detail::count_value(detail::member(j, "dimension"), "dimension");
    const auto& states = detail::member(j, "states");
    if (!states.is_array() || states.empty()) detail::malformed("\"states\" must be a non-empty array");
    StateSetData data;
    data.matrix = detail::columns(states, dim, static_cast<Index>(states.size()), "states");
    if (j.contains("labels")) {
        const auto& labels = j.at("labels");
        if (!labels.is_array() || labels.size() != states.size()) {
            detail::malformed("\"labels\" must have one string per state");
        }
        for (const auto& l : labels) {
            if (!l.is_string()) detail::malformed("labels must be strings");
            data.labels.push_back(l.get<std::string>());
        }
    }
    if (!data.matrix.allFinite()) detail::malformed("non-finite coefficient");
    return data;
}

inline StateSetData read_state_set_file(const std::filesystem::path& path) {
    return parse_state_set(read_text(path));
}

inline StateSet load_state_set(const std::filesystem::path& path,
                               NormPolicy policy = NormPolicy::Strict,
                               const Tolerances& tol = default_tolerances()) {
    StateSetData data = read_state_set_file(path);
    return validate_state_set(std::move(data.matrix), policy, std::move(data.labels), tol);
}

inline void write_state_set_file(const std::filesystem::path& path, const ComplexMatrix& states,
                                 const std::vector<std::string>& labels = {}) {
    write_text_atomic(path, state_set_json(states, labels));
}

// ---------------------------------------------------------------------------
// Model files:
//   { "format_version": 1, "dimension": D, "count": M,
//     "singular_values": [e_1 .. e_M],
//     "basis":   [ [[re, im] x D] x (M+1) ],      columns phi_0 .. phi_M
//     "weights": [ [[re, im] x (M+1)] x M ] }     columns W_1 .. W_M

inline std::string model_json(const PcaModel& model) {
    std::string out = "{\n  \"format_version\": " + std::to_string(kModelFormatVersion) + ",\n";
    out += "  \"dimension\": " + std::to_string(model.dim()) + ",\n";
    out += "  \"count\": " + std::to_string(model.count()) + ",\n";
    out += "  \"singular_values\": [";
    for (Index k = 0; k < model.count(); ++k) {
        if (k > 0) out += ", ";
        out += format_double(model.singular_values()(k));
    }
    out += "],\n  \"basis\": ";
    detail::append_columns(out, model.basis(), "  ");
    out += ",\n  \"weights\": ";
    detail::append_columns(out, model.weights(), "  ");
    out += "\n}\n";
    return out;
}

inline PcaModel parse_model(const std::string& text, const Tolerances& tol = default_tolerances()) {
    const nlohmann::json j = detail::parse_json(text);
    const Index version = detail::count_value(detail::member(j, "format_version"), "format_version");
    if (version != kModelFormatVersion) {
        detail::malformed("unsupported format_version " + std::to_string(version));
    }
    const Index dim = detail::count_value(detail::member(j, "dimension"), "dimension");
    const Index count = detail::count_value(detail::member(j, "count"), "count");
    const auto& sv_json = detail::member(j, "singular_values");
    if (!sv_json.is_array() || static_cast<Index>(sv_json.size()) != count) {
        detail::malformed("\"singular_values\" must hold M numbers");
    }
    RealVector sv(count);
    for (Index k = 0; k < count; ++k) {
        sv(k) = detail::number(sv_json[static_cast<std::size_t>(k)], "singular value");
    }
    ComplexMatrix basis = detail::columns(detail::member(j, "basis"), dim, count + 1, "basis");
    ComplexMatrix weights = detail::columns(detail::member(j, "weights"), count + 1, count, "weights");
    return PcaModel::from_parts(std::move(basis), std::move(sv), std::move(weights), tol);
}

inline PcaModel load_model(const std::filesystem::path& path,
                           const Tolerances& tol = default_tolerances()) {
    return parse_model(read_text(path), tol);
}

inline void write_model_file(const std::filesystem::path& path, const PcaModel& model) {
    write_text_atomic(path, model_json(model));
}

// ---------------------------------------------------------------------------
// Matrix blocks (coarse-grained operators):
//   { "format_version": 1, "dimension": d, "matrix": [ [[re, im] x d] x d ] }

inline std::string matrix_json(const ComplexMatrix& m) {
    std::string out = "{\n  \"format_version\": " + std::to_string(kModelFormatVersion) + ",\n";
    out += "  \"dimension\": " + std::to_string(m.rows()) + ",\n  \"matrix\": ";
    detail::append_columns(out, m, "  ");
    out += "\n}\n";
    return out;
}

inline ComplexMatrix parse_matrix(const std::string& text) {
    const nlohmann::json j = detail::parse_json(text);
    const Index dim = detail::count_value(detail::member(j, "dimension"), "dimension");
    return detail::columns(detail::member(j, "matrix"), dim, dim, "matrix");
}

// ---------------------------------------------------------------------------
// Curves: CSV with header "d,value", d strictly increasing.

struct CurveRow {
    Index d;
    double value;
};

inline std::string curve_csv(const std::vector<CurveRow>& rows) {
    std::string out = "d,value\n";
    for (const auto& r : rows) {
        out += std::to_string(r.d);
        out += ',';
        out += format_double(r.value);
        out += '\n';
    }
    return out;
}

inline std::vector<CurveRow> parse_curve(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "d,value") {
        throw Error(ErrorKind::InvalidArgument, "curve file must start with \"d,value\"");
    }
    std::vector<CurveRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw Error(ErrorKind::InvalidArgument, "bad curve row: " + line);
        }
        try {
            rows.push_back({static_cast<Index>(std::stoll(line.substr(0, comma))),
                            std::stod(line.substr(comma + 1))});
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::InvalidArgument, "bad curve row: " + line);
        }
        if (rows.size() > 1 && rows.back().d <= rows[rows.size() - 2].d) {
            throw Error(ErrorKind::InvalidArgument, "curve d values must increase");
        }
    }
    return rows;
}

inline void write_curve_file(const std::filesystem::path& path, const std::vector<CurveRow>& rows) {
    write_text_atomic(path, curve_csv(rows));
}

}  // namespace qdecim::io

#endif  // QDECIM_IO_HPP
