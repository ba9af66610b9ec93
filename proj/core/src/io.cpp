#include "spherecode/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace spherecode {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw FileFormatError(field, field + ": " + msg);
}

// Canonical emitter: compact, object keys in sorted order (nlohmann default),
// floats with 17 significant digits so save/load round-trips bit for bit.
void canonical_dump(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.cbegin(); it != j.cend(); ++it) {
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                canonical_dump(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                canonical_dump(j[i], out);
            }
            out += ']';
            break;
        }
        case json::value_t::string:
            out += j.dump();
            break;
        case json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            break;
        case json::value_t::null:
            out += "null";
            break;
        case json::value_t::number_integer:
            out += std::to_string(j.get<std::int64_t>());
            break;
        case json::value_t::number_unsigned:
            out += std::to_string(j.get<std::uint64_t>());
            break;
        case json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) fail("(number)", "non-finite values are not serializable");
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out += buf;
            break;
        }
        default:
            fail("(value)", "unsupported JSON value type");
    }
}

std::string canonical(const json& j) {
    std::string out;
    canonical_dump(j, out);
    out += '\n';
    return out;
}

json parse_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        std::ostringstream os;
        os << origin << ":" << line << ": " << e.what();
        throw FileFormatError(origin, os.str());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path.string(), "cannot open file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(path.string(), "cannot open file for writing");
    out << text;
    if (!out) fail(path.string(), "write failed");
}

double number_at(const json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
}

Eigen::MatrixXd matrix_at(const json& j, const std::string& field, int expected_cols = -1) {
    if (!j.is_array()) fail(field, "expected an array of rows");
    const int rows = static_cast<int>(j.size());
    int cols = expected_cols;
    if (rows > 0) {
        if (!j[0].is_array()) fail(field + "[0]", "expected an array");
        if (cols < 0) cols = static_cast<int>(j[0].size());
    }
    if (cols < 0) cols = 0;
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const json& row = j[r];
        std::ostringstream fr;
        fr << field << "[" << r << "]";
        if (!row.is_array()) fail(fr.str(), "expected an array");
        if (static_cast<int>(row.size()) != cols)
            fail(fr.str(), "row length differs from " + std::to_string(cols));
        for (int c = 0; c < cols; ++c) m(r, c) = number_at(row[c], fr.str());
    }
    return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

json log_value_to_json(const LogValue& v) {
    json j;
    if (v.is_zero())
        j["log2"] = nullptr;
    else if (std::isinf(v.log2()))
        j["log2"] = "inf";  // saturated threshold (very deep recursion)
    else
        j["log2"] = v.log2();
    return j;
}

LogValue log_value_from_json(const json& j, const std::string& field) {
    if (!j.is_object() || !j.contains("log2")) fail(field, "expected {\"log2\": ...}");
    if (j["log2"].is_null()) return LogValue::zero();
    if (j["log2"].is_string()) {
        if (j["log2"] != "inf") fail(field + ".log2", "expected a number, null, or \"inf\"");
        return LogValue::from_log2(std::numeric_limits<double>::infinity());
    }
    return LogValue::from_log2(number_at(j["log2"], field + ".log2"));
}

std::vector<int> int_list(const json& j, const std::string& field) {
    if (!j.is_array()) fail(field, "expected an array of integers");
    std::vector<int> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number_integer() && !v.is_number_unsigned())
            fail(field, "expected integers");
        out.push_back(v.get<int>());
    }
    return out;
}

std::vector<double> double_list(const json& j, const std::string& field) {
    if (!j.is_array()) fail(field, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_at(j[i], field));
    return out;
}

}  // namespace

// --------------------------------------------------------------------------
// CodeFile

CodeFile parse_code_json(const std::string& text, const std::string& origin) {
    const json j = parse_text(text, origin);
    if (!j.is_object()) fail(origin, "expected a JSON object");
    if (!j.contains("dim")) fail("dim", "missing field");
    if (!j["dim"].is_number_integer() && !j["dim"].is_number_unsigned())
        fail("dim", "expected a positive integer");

    CodeFile file;
    file.dim = j["dim"].get<int>();
    if (file.dim < 1) fail("dim", "must be >= 1");

    const bool has_vectors = j.contains("vectors");
    const bool has_gram = j.contains("gram");
    if (has_vectors && has_gram) fail("vectors/gram", "exactly one of the two must be present");
    if (!has_vectors && !has_gram) fail("vectors/gram", "one of the two must be present");

    if (has_vectors) {
        Eigen::MatrixXd m = matrix_at(j["vectors"], "vectors", file.dim);
        file.code = Code(file.dim, std::move(m));
    } else {
        Eigen::MatrixXd m = matrix_at(j["gram"], "gram");
        if (m.rows() != m.cols()) fail("gram", "matrix must be square");
        file.gram = GramMatrix(std::move(m));
    }
    if (j.contains("metadata")) {
        if (!j["metadata"].is_object()) fail("metadata", "expected an object of strings");
        for (auto it = j["metadata"].cbegin(); it != j["metadata"].cend(); ++it) {
            if (!it.value().is_string()) fail("metadata." + it.key(), "expected a string");
            file.metadata[it.key()] = it.value().get<std::string>();
        }
    }
    return file;
}

CodeFile load_code_file(const std::filesystem::path& path) {
    return parse_code_json(read_file(path), path.string());
}

std::string serialize_code_file(const CodeFile& file) {
    json j;
    j["dim"] = file.dim;
    if (file.code && file.gram)
        fail("vectors/gram", "exactly one of the two must be present");
    if (file.code)
        j["vectors"] = matrix_to_json(file.code->rows());
    else if (file.gram)
        j["gram"] = matrix_to_json(file.gram->matrix());
    else
        fail("vectors/gram", "one of the two must be present");
    if (!file.metadata.empty()) {
        json m;
        for (const auto& [key, value] : file.metadata) m[key] = value;
        j["metadata"] = m;
    }
    return canonical(j);
}

void save_code_file(const CodeFile& file, const std::filesystem::path& path) {
    write_file(path, serialize_code_file(file));
}

// --------------------------------------------------------------------------
// AngleFile

AngleFile parse_angle_json(const std::string& text, const std::string& origin) {
    const json j = parse_text(text, origin);
    if (!j.is_object()) fail(origin, "expected a JSON object");
    if (!j.contains("beta")) fail("beta", "missing field");
    if (!j.contains("angles")) fail("angles", "missing field");
    AngleFile file;
    file.beta = number_at(j["beta"], "beta");
    file.angles = double_list(j["angles"], "angles");
    file.system();  // reject invalid systems at load time with their own message
    return file;
}

AngleFile load_angle_file(const std::filesystem::path& path) {
    return parse_angle_json(read_file(path), path.string());
}

std::string serialize_angle_file(const AngleFile& file) {
    json j;
    j["beta"] = file.beta;
    j["angles"] = file.angles;
    return canonical(j);
}

void save_angle_file(const AngleFile& file, const std::filesystem::path& path) {
    write_file(path, serialize_angle_file(file));
}

// --------------------------------------------------------------------------
// ColoringFile

EdgeColoring parse_coloring_json(const std::string& text, const std::string& origin) {
    const json j = parse_text(text, origin);
    if (!j.is_object()) fail(origin, "expected a JSON object");
    if (!j.contains("n")) fail("n", "missing field");
    const int n = j["n"].get<int>();
    if (n < 0) fail("n", "must be >= 0");
    if (!j.contains("colors")) fail("colors", "missing field");
    const json& rows = j["colors"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
        fail("colors", "expected an n x n matrix");

    int num_colors = 1;
    if (j.contains("num_colors")) {
        num_colors = j["num_colors"].get<int>();
    } else {
        for (int i = 0; i < n; ++i)
            for (int c = i + 1; c < n; ++c)
                num_colors = std::max(num_colors, rows[i][c].get<int>() + 1);
    }

    EdgeColoring coloring(n, std::max(num_colors, 1));
    for (int i = 0; i < n; ++i) {
        const json& row = rows[i];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            fail("colors", "expected an n x n matrix");
        for (int jcol = i + 1; jcol < n; ++jcol) {
            const int c = row[jcol].get<int>();
            const int mirrored = rows[jcol][i].get<int>();
            if (c != mirrored) {
                std::ostringstream os;
                os << "colors[" << i << "][" << jcol << "]";
                fail(os.str(), "matrix is not symmetric");
            }
            if (c < 0 || c >= coloring.num_colors()) {
                std::ostringstream os;
                os << "colors[" << i << "][" << jcol << "]";
                fail(os.str(), "colour out of range");
            }
            coloring.set_color(i, jcol, c);
        }
    }
    return coloring;
}

EdgeColoring load_coloring_file(const std::filesystem::path& path) {
    return parse_coloring_json(read_file(path), path.string());
}

std::string serialize_coloring(const EdgeColoring& coloring) {
    json j;
    j["n"] = coloring.size();
    j["num_colors"] = coloring.num_colors();
    json rows = json::array();
    for (int i = 0; i < coloring.size(); ++i) {
        json row = json::array();
        for (int c = 0; c < coloring.size(); ++c)
            row.push_back(i == c ? -1 : coloring.color(i, c));
        rows.push_back(row);
    }
    j["colors"] = rows;
    return canonical(j);
}

void save_coloring_file(const EdgeColoring& coloring, const std::filesystem::path& path) {
    write_file(path, serialize_coloring(coloring));
}

// --------------------------------------------------------------------------
// TraceFile

namespace {

json pivot_steps_to_json(const std::vector<PivotStep>& steps) {
    json out = json::array();
    for (const PivotStep& s : steps) {
        json j;
        j["vertex"] = s.vertex;
        j["color"] = s.color;
        j["y_before"] = s.y_size_before;
        j["y_after"] = s.y_size_after;
        out.push_back(j);
    }
    return out;
}

std::vector<PivotStep> pivot_steps_from_json(const json& j, const std::string& field) {
    if (!j.is_array()) fail(field, "expected an array");
    std::vector<PivotStep> out;
    for (const auto& e : j) {
        PivotStep s;
        s.vertex = e.at("vertex").get<int>();
        s.color = e.at("color").get<int>();
        s.y_size_before = e.at("y_before").get<long>();
        s.y_size_after = e.at("y_after").get<long>();
        out.push_back(s);
    }
    return out;
}

json record_to_json(const CaseRecord& rec) {
    json j;
    j["case"] = to_string(rec.case_id);
    j["dim"] = rec.code.dim();
    j["beta"] = rec.system.beta();
    j["angles"] = rec.system.angles();
    j["vectors"] = matrix_to_json(rec.code.rows());
    j["bound"] = log_value_to_json(rec.bound);
    j["threshold"] = log_value_to_json(rec.threshold);
    if (!rec.note.empty()) j["note"] = rec.note;

    if (rec.small_ak) {
        const SmallAkData& d = *rec.small_ak;
        json s;
        s["max_degree_g0"] = d.max_degree_g0;
        s["degree_cap"] = d.degree_cap;
        s["proj_product_max"] = d.proj_product_max;
        s["independent_set"] = d.independent_set;
        json cert;
        cert["passed"] = d.certificate.passed;
        cert["products_matched"] = d.certificate.products_matched;
        cert["max_offdiag_residue"] = d.certificate.max_offdiag_residue;
        cert["max_diag_rel_error"] = d.certificate.max_diag_rel_error;
        cert["diag_target"] = d.certificate.diag_target;
        cert["size_bound"] = d.certificate.size_bound.get_str();
        s["certificate"] = cert;
        j["small_ak"] = s;
    }
    if (rec.gap) {
        const GapData& d = *rec.gap;
        json g;
        g["ell"] = d.ell;
        g["pivot"] = d.pivot;
        g["color_s"] = d.color_s;
        g["delta_h"] = d.delta_h;
        g["neighborhood"] = d.neighborhood;
        g["projected_set"] = d.projected_set;
        g["independent_set"] = d.independent_set;
        g["beta_prime"] = d.beta_prime_value;
        g["formal_angles"] = d.formal_angles;
        j["gap"] = g;
    }
    if (rec.ramsey) {
        const RamseyData& d = *rec.ramsey;
        json r;
        r["t"] = d.t;
        r["t_forced"] = d.t_forced;
        r["tower"] = log_value_to_json(d.tower);
        r["color_r"] = d.color_r;
        r["T"] = d.T;
        r["M"] = d.M;
        r["pivots"] = pivot_steps_to_json(d.pivots);
        r["m_requested"] = d.m_requested;
        r["formal_angles"] = d.formal_angles;
        j["ramsey"] = r;
    }

    json children = json::array();
    for (const CaseRecord& child : rec.children) children.push_back(record_to_json(child));
    j["children"] = children;
    return j;
}

CaseRecord record_from_json(const json& j, const std::string& field) {
    if (!j.is_object()) fail(field, "expected an object");
    for (const char* key : {"case", "dim", "beta", "angles", "vectors", "bound", "threshold"})
        if (!j.contains(key)) fail(field + "." + key, "missing field");

    const int dim = j["dim"].get<int>();
    Eigen::MatrixXd vectors = matrix_at(j["vectors"], field + ".vectors", dim);
    Code code(dim, std::move(vectors));
    AngleSystem system(number_at(j["beta"], field + ".beta"),
                       double_list(j["angles"], field + ".angles"));

    CaseRecord rec(std::move(code), std::move(system));
    rec.case_id = case_id_from_string(j["case"].get<std::string>());
    rec.bound = log_value_from_json(j["bound"], field + ".bound");
    rec.threshold = log_value_from_json(j["threshold"], field + ".threshold");
    if (j.contains("note")) rec.note = j["note"].get<std::string>();

    if (j.contains("small_ak")) {
        const json& s = j["small_ak"];
        SmallAkData d;
        d.max_degree_g0 = s.at("max_degree_g0").get<int>();
        d.degree_cap = number_at(s.at("degree_cap"), field + ".small_ak.degree_cap");
        d.proj_product_max =
            number_at(s.at("proj_product_max"), field + ".small_ak.proj_product_max");
        d.independent_set = int_list(s.at("independent_set"), field + ".small_ak");
        const json& cert = s.at("certificate");
        d.certificate.passed = cert.at("passed").get<bool>();
        d.certificate.products_matched = cert.at("products_matched").get<bool>();
        d.certificate.max_offdiag_residue =
            number_at(cert.at("max_offdiag_residue"), field + ".certificate");
        d.certificate.max_diag_rel_error =
            number_at(cert.at("max_diag_rel_error"), field + ".certificate");
        d.certificate.diag_target = number_at(cert.at("diag_target"), field + ".certificate");
        d.certificate.size_bound = mpz_class(cert.at("size_bound").get<std::string>());
        rec.small_ak = std::move(d);
    }
    if (j.contains("gap")) {
        const json& g = j["gap"];
        GapData d;
        d.ell = g.at("ell").get<int>();
        d.pivot = g.at("pivot").get<int>();
        d.color_s = g.at("color_s").get<int>();
        d.delta_h = g.at("delta_h").get<int>();
        d.neighborhood = int_list(g.at("neighborhood"), field + ".gap.neighborhood");
        d.projected_set = int_list(g.at("projected_set"), field + ".gap.projected_set");
        d.independent_set = int_list(g.at("independent_set"), field + ".gap.independent_set");
        d.beta_prime_value = number_at(g.at("beta_prime"), field + ".gap.beta_prime");
        d.formal_angles = double_list(g.at("formal_angles"), field + ".gap.formal_angles");
        rec.gap = std::move(d);
    }
    if (j.contains("ramsey")) {
        const json& r = j["ramsey"];
        RamseyData d;
        d.t = r.at("t").get<long>();
        d.t_forced = r.at("t_forced").get<bool>();
        d.tower = log_value_from_json(r.at("tower"), field + ".ramsey.tower");
        d.color_r = r.at("color_r").get<int>();
        d.T = int_list(r.at("T"), field + ".ramsey.T");
        d.M = int_list(r.at("M"), field + ".ramsey.M");
        d.pivots = pivot_steps_from_json(r.at("pivots"), field + ".ramsey.pivots");
        d.m_requested = r.at("m_requested").get<long>();
        d.formal_angles = double_list(r.at("formal_angles"), field + ".ramsey.formal_angles");
        rec.ramsey = std::move(d);
    }

    if (j.contains("children")) {
        const json& children = j["children"];
        if (!children.is_array()) fail(field + ".children", "expected an array");
        for (std::size_t c = 0; c < children.size(); ++c) {
            std::ostringstream os;
            os << field << ".children[" << c << "]";
            rec.children.push_back(record_from_json(children[c], os.str()));
        }
    }
    return rec;
}

}  // namespace

DecompositionTrace parse_trace_json(const std::string& text, const std::string& origin) {
    const json j = parse_text(text, origin);
    if (!j.is_object()) fail(origin, "expected a JSON object");
    if (!j.contains("format") || j["format"] != "spherecode-trace")
        fail("format", "expected \"spherecode-trace\"");
    if (!j.contains("root")) fail("root", "missing field");

    DecompositionTrace trace{record_from_json(j["root"], "root"), LogValue::zero(), false};
    if (j.contains("claimed_bound"))
        trace.claimed_bound = log_value_from_json(j["claimed_bound"], "claimed_bound");
    else
        trace.claimed_bound = trace.root.bound;
    if (j.contains("verified")) trace.verified = j["verified"].get<bool>();
    return trace;
}

DecompositionTrace load_trace_file(const std::filesystem::path& path) {
    return parse_trace_json(read_file(path), path.string());
}

std::string serialize_trace(const DecompositionTrace& trace) {
    json j;
    j["format"] = "spherecode-trace";
    j["version"] = 1;
    j["verified"] = trace.verified;
    j["claimed_bound"] = log_value_to_json(trace.claimed_bound);
    j["root"] = record_to_json(trace.root);
    return canonical(j);
}

void save_trace_file(const DecompositionTrace& trace, const std::filesystem::path& path) {
    write_file(path, serialize_trace(trace));
}

}  // namespace spherecode
