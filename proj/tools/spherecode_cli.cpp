// Command-line surface for the spherical-code toolkit: validation, projection,
// bounds, the Ramsey pair finder, decomposition traces, brute-force search, and
// witness generation. Exit codes: 0 success/valid, 1 invalid input data,
// 2 verification failure, 3 resource/budget exhaustion.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "spherecode/bounds.hpp"
#include "spherecode/combinatorics.hpp"
#include "spherecode/decomposition.hpp"
#include "spherecode/geometry.hpp"
#include "spherecode/io.hpp"
#include "spherecode/search.hpp"

using namespace spherecode;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 1;
constexpr int kExitVerifyFailure = 2;
constexpr int kExitBudget = 3;

struct GlobalOptions {
    std::optional<double> tol;
    bool json_output = false;
    int threads = 1;
    std::uint64_t seed = 0;  // reserved for test-corpus generators

    ProjectionConfig config() const {
        if (tol) return ProjectionConfig::uniform(*tol);
        if (const char* env = std::getenv("SPHERECODE_TOL")) {
            try {
                return ProjectionConfig::uniform(std::stod(env));
            } catch (const std::exception&) {
                throw Error("SPHERECODE_TOL is not a valid tolerance");
            }
        }
        return ProjectionConfig{};
    }
};

std::string read_stream(std::istream& in) {
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// --code/--angles accept a path, "-" for stdin, or inline JSON (leading '{').
std::string fetch_text(const std::string& spec) {
    if (spec == "-") return read_stream(std::cin);
    if (!spec.empty() && spec.front() == '{') return spec;
    std::ifstream in(spec, std::ios::binary);
    if (!in) throw FileFormatError(spec, spec + ": cannot open file");
    return read_stream(in);
}

CodeFile fetch_code(const std::string& spec) {
    return parse_code_json(fetch_text(spec), spec == "-" ? "<stdin>" : spec);
}

AngleFile fetch_angles(const std::string& spec) {
    return parse_angle_json(fetch_text(spec), spec == "-" ? "<stdin>" : spec);
}

/// Vectors of a CodeFile, factoring the Gram variant when necessary.
Code vectors_of(const CodeFile& file, const ProjectionConfig& cfg) {
    if (file.code) return *file.code;
    return factor_gram(*file.gram, file.dim, cfg);
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string describe_log(const LogValue& v) {
    std::ostringstream os;
    if (v.is_zero()) {
        os << "0";
    } else if (v.log2() < 52.0) {
        os << v.value() << " (log2 = " << v.log2() << ")";
    } else {
        os << "2^" << v.log2();
    }
    return os.str();
}

json log_to_json(const LogValue& v) {
    json j;
    j["log2"] = v.is_zero() ? json(nullptr) : json(v.log2());
    return j;
}

const char* kind_name(PairKind kind) {
    switch (kind) {
        case PairKind::interval: return "interval";
        case PairKind::angle: return "angle";
        case PairKind::violation: return "violation";
        case PairKind::ambiguous: return "ambiguous";
    }
    return "?";
}

int run_validate(const GlobalOptions& global, const std::string& code_spec,
                 const std::string& angle_spec) {
    const ProjectionConfig cfg = global.config();
    const CodeFile file = fetch_code(code_spec);
    const AngleSystem L = fetch_angles(angle_spec).system();
    const ValidationReport report =
        file.code ? validate_code(*file.code, L, cfg) : validate_gram(*file.gram, L, cfg);

    if (global.json_output) {
        json pairs = json::array();
        for (const PairClass& pc : report.pairs) {
            json p;
            p["i"] = pc.i;
            p["j"] = pc.j;
            p["value"] = pc.product;
            p["class"] = kind_name(pc.kind);
            if (pc.color >= 0) p["color"] = pc.color;
            pairs.push_back(p);
        }
        json out;
        out["valid"] = report.valid;
        out["pairs"] = pairs;
        emit(out);
    } else {
        for (const PairClass& pc : report.pairs) {
            std::cout << "(" << pc.i << "," << pc.j << ") = " << pc.product << "  ->  ";
            if (pc.kind == PairKind::interval)
                std::cout << "interval (colour 0)\n";
            else if (pc.kind == PairKind::angle)
                std::cout << "angle a_" << pc.color << " (colour " << pc.color << ")\n";
            else
                std::cout << kind_name(pc.kind) << "\n";
        }
        std::cout << (report.valid ? "valid" : "INVALID") << ": " << report.pairs.size()
                  << " pairs\n";
    }
    return report.valid ? kExitOk : kExitInvalidInput;
}

int run_project(const GlobalOptions& global, const std::string& code_spec,
                std::optional<int> pivot, const std::vector<int>& basis,
                const std::string& out_path) {
    const ProjectionConfig cfg = global.config();
    const Code code = vectors_of(fetch_code(code_spec), cfg);

    std::vector<int> pivots;
    if (pivot) pivots.push_back(*pivot);
    pivots.insert(pivots.end(), basis.begin(), basis.end());
    if (pivots.empty()) throw Error("project: need --pivot or --basis");
    for (int p : pivots)
        if (p < 0 || p >= code.size()) throw Error("project: pivot index out of range");

    std::vector<Eigen::VectorXd> basis_vectors;
    for (int p : pivots) basis_vectors.push_back(code.vector(p));

    std::vector<Eigen::VectorXd> projected;
    for (int i = 0; i < code.size(); ++i) {
        if (std::find(pivots.begin(), pivots.end(), i) != pivots.end()) continue;
        projected.push_back(project_complement(code.vector(i), basis_vectors, cfg));
    }

    CodeFile out;
    out.dim = code.dim();
    out.code = Code::from_rows(code.dim(), projected);
    out.metadata["source"] = "projection through " + std::to_string(pivots.size()) +
                             " pivot(s)";
    const std::string text = serialize_code_file(out);
    if (out_path.empty() || out_path == "-")
        std::cout << text;
    else {
        std::ofstream f(out_path, std::ios::binary);
        f << text;
    }
    return kExitOk;
}

int run_bound(const GlobalOptions& global, const std::string& kind, long d, long k,
              double beta, bool no_inflation) {
    if (kind == "dgs") {
        if (d < 0 || k < 0) throw Error("bound: dgs needs --d and --k >= 0");
        const mpz_class value = dgs_bound(static_cast<unsigned long>(d),
                                          static_cast<unsigned long>(k));
        if (global.json_output) {
            json out;
            out["kind"] = "dgs";
            out["d"] = d;
            out["k"] = k;
            out["bound"] = value.get_str();
            emit(out);
        } else {
            std::cout << value.get_str() << "\n";
        }
        return kExitOk;
    }
    if (kind == "neg") {
        const long value = neg_bound(beta);
        if (global.json_output) {
            json out;
            out["kind"] = "neg";
            out["beta"] = beta;
            out["bound"] = value;
            emit(out);
        } else {
            std::cout << value << "\n";
        }
        return kExitOk;
    }
    if (kind == "fk") {
        if (k < 0 || k > 16) throw Error("bound: fk supports 0 <= k <= 16");
        FkPolicy policy;
        policy.d0_inflation = !no_inflation;
        const LogValue value = f_k(beta, static_cast<int>(k), policy);
        if (global.json_output) {
            json out;
            out["kind"] = "fk";
            out["beta"] = beta;
            out["k"] = k;
            out["bound"] = log_to_json(value);
            emit(out);
        } else {
            std::cout << describe_log(value) << "\n";
        }
        return kExitOk;
    }
    throw Error("bound: unknown kind '" + kind + "' (expected dgs|neg|fk)");
}

int run_ramsey(const GlobalOptions& global, const std::string& coloring_path, int k, int t,
               long m, bool force) {
    const EdgeColoring coloring = load_coloring_file(coloring_path);
    RamseyResult result;
    try {
        result = ramsey_pair(view_of(coloring), k, t, m, force);
    } catch (const Error& e) {
        // hypothesis violation without --force
        if (global.json_output) {
            json out;
            out["found"] = false;
            out["error"] = e.what();
            emit(out);
        } else {
            std::cerr << e.what() << "\n";
        }
        return kExitInvalidInput;
    }

    if (global.json_output) {
        json out;
        out["found"] = result.ok();
        if (result.ok()) {
            out["X"] = result.pair->X;
            out["Y"] = result.pair->Y;
            out["color"] = result.pair->color;
            json steps = json::array();
            for (const PivotStep& s : result.pair->log) {
                json e;
                e["vertex"] = s.vertex;
                e["color"] = s.color;
                e["y_before"] = s.y_size_before;
                e["y_after"] = s.y_size_after;
                steps.push_back(e);
            }
            out["steps"] = steps;
        } else {
            out["fail_step"] = result.fail_step;
            out["message"] = result.message;
        }
        emit(out);
    } else if (result.ok()) {
        std::cout << "colour " << result.pair->color << "\nX =";
        for (int v : result.pair->X) std::cout << " " << v;
        std::cout << "\nY =";
        for (int v : result.pair->Y) std::cout << " " << v;
        std::cout << "\n";
    } else {
        std::cout << "no pair: " << result.message << " (step " << result.fail_step << ")\n";
    }
    return result.ok() ? kExitOk : kExitVerifyFailure;
}

void print_tree(const CaseRecord& rec, int depth) {
    std::cout << std::string(static_cast<std::size_t>(depth) * 2, ' ') << to_string(rec.case_id)
              << "  n=" << rec.code.size() << " k=" << rec.system.k()
              << " bound=" << describe_log(rec.bound);
    if (!rec.note.empty()) std::cout << "  [" << rec.note << "]";
    std::cout << "\n";
    for (const CaseRecord& child : rec.children) print_tree(child, depth + 1);
}

int run_decompose(const GlobalOptions& global, const std::string& code_spec,
                  const std::string& angle_spec, const std::string& out_path,
                  std::optional<long> force_t) {
    const ProjectionConfig cfg = global.config();
    const Code code = vectors_of(fetch_code(code_spec), cfg);
    const AngleSystem L = fetch_angles(angle_spec).system();

    DecomposeOptions options;
    options.ramsey_t_override = force_t;
    const DecompositionTrace trace = decompose(code, L, cfg, options);
    if (!out_path.empty()) save_trace_file(trace, out_path);

    if (global.json_output) {
        json out;
        out["verified"] = trace.verified;
        out["bound"] = log_to_json(trace.claimed_bound);
        out["n"] = code.size();
        if (!out_path.empty()) out["trace"] = out_path;
        emit(out);
    } else {
        print_tree(trace.root, 0);
        std::cout << "bound " << describe_log(trace.claimed_bound) << " on n = " << code.size()
                  << ", " << (trace.verified ? "verified" : "VERIFICATION FAILED") << "\n";
    }
    return trace.verified ? kExitOk : kExitVerifyFailure;
}

int run_verify(const GlobalOptions& global, const std::string& trace_path) {
    const ProjectionConfig cfg = global.config();
    const DecompositionTrace trace = load_trace_file(trace_path);
    const VerifyReport report = verify_trace(trace, cfg);

    if (global.json_output) {
        json nodes = json::array();
        for (const NodeReport& node : report.nodes) {
            json e;
            e["path"] = node.path;
            e["case"] = to_string(node.case_id);
            e["ok"] = node.ok;
            e["issues"] = node.issues;
            nodes.push_back(e);
        }
        json out;
        out["ok"] = report.ok;
        out["nodes"] = nodes;
        out["summary"] = report.summary;
        emit(out);
    } else {
        for (const NodeReport& node : report.nodes) {
            std::cout << (node.ok ? "  ok " : "FAIL ") << node.path << " "
                      << to_string(node.case_id) << "\n";
            for (const std::string& msg : node.issues) std::cout << "       " << msg << "\n";
        }
        std::cout << report.summary << "\n";
    }
    return report.ok ? kExitOk : kExitVerifyFailure;
}

int run_search(const GlobalOptions& global, const std::vector<double>& values, int d,
               int n_max, double budget, bool no_symmetry) {
    SearchConfig cfg;
    cfg.candidate_values = values;
    cfg.d = d;
    cfg.n_max = n_max;
    cfg.time_budget_seconds = budget;
    cfg.symmetry_breaking = !no_symmetry;
    cfg.threads = global.threads;
    cfg.tol = global.config();
    const SearchResult result = max_code_search(cfg);

    if (global.json_output) {
        json witness = json::array();
        for (int i = 0; i < result.witness.size(); ++i) {
            json row = json::array();
            for (int j = 0; j < result.witness.size(); ++j)
                row.push_back(result.witness(i, j));
            witness.push_back(row);
        }
        json out;
        out["best_n"] = result.best_n;
        out["exhaustive"] = result.exhaustive;
        out["nodes_visited"] = result.nodes_visited;
        out["witness_gram"] = witness;
        emit(out);
    } else {
        std::cout << "best_n = " << result.best_n
                  << (result.exhaustive ? " (exhaustive)" : " (budget exhausted)")
                  << ", nodes visited: " << result.nodes_visited << "\nwitness gram:\n";
        for (int i = 0; i < result.witness.size(); ++i) {
            for (int j = 0; j < result.witness.size(); ++j)
                std::cout << (j ? " " : "") << result.witness(i, j);
            std::cout << "\n";
        }
    }
    return result.exhaustive ? kExitOk : kExitBudget;
}

int run_witness(const GlobalOptions&, const std::string& kind, int d,
                const std::string& out_path) {
    CodeFile file;
    if (kind == "simplex") {
        file.dim = d;
        file.code = simplex_code(d);
        file.metadata["name"] = "simplex-d" + std::to_string(d);
    } else if (kind == "icosahedron") {
        file.dim = 3;
        file.code = icosahedron_code();
        file.metadata["name"] = "icosahedron";
    } else {
        throw Error("witness: unknown kind '" + kind + "' (expected simplex|icosahedron)");
    }
    const std::string text = serialize_code_file(file);
    if (out_path.empty() || out_path == "-")
        std::cout << text;
    else {
        std::ofstream f(out_path, std::ios::binary);
        f << text;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spherical code bounds, decomposition traces, and search"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--tol", global.tol, "uniform tolerance override (wins over SPHERECODE_TOL)");
    app.add_flag("--json", global.json_output, "structured JSON output");
    app.add_option("--threads", global.threads, "worker threads for search")
        ->check(CLI::Range(1, 64));
    app.add_option("--seed", global.seed, "seed for randomized generators (reserved)");

    std::string code_spec = "-";
    std::string angle_spec;
    std::string out_path;
    std::string trace_path;
    std::string coloring_path;
    std::string kind;
    std::optional<int> pivot;
    std::vector<int> basis;
    long d = 0, k = 0, m = 1;
    int t = 1;
    double beta = 0.5;
    bool force = false, no_inflation = false, no_symmetry = false;
    int n_max = 12;
    double budget = std::numeric_limits<double>::infinity();
    std::vector<double> values;
    std::optional<long> force_t;

    auto* validate = app.add_subcommand("validate", "classify all pairs of a code against L");
    validate->add_option("--code", code_spec, "code file, '-' for stdin, or inline JSON");
    validate->add_option("--angles", angle_spec, "angle file or inline JSON")->required();

    auto* project = app.add_subcommand("project", "normalized projection of a code");
    project->add_option("--code", code_spec);
    project->add_option("--pivot", pivot, "single pivot index");
    project->add_option("--basis", basis, "comma-separated pivot indices")->delimiter(',');
    project->add_option("--out", out_path, "output file (default stdout)");

    auto* bound = app.add_subcommand("bound", "closed-form bounds");
    bound->add_option("--kind", kind, "dgs|neg|fk")->required();
    bound->add_option("--d", d);
    bound->add_option("--k", k);
    bound->add_option("--beta", beta);
    bound->add_flag("--no-inflation", no_inflation, "drop the d_0^k factor in fk");

    auto* ramsey = app.add_subcommand("ramsey", "constructive monochromatic pair");
    ramsey->add_option("--coloring", coloring_path)->required();
    ramsey->add_option("--k", k, "number of colours")->required();
    ramsey->add_option("--t", t)->required();
    ramsey->add_option("--m", m)->required();
    ramsey->add_flag("--force", force, "attempt even when n <= k^{kt} m");

    auto* decompose_cmd = app.add_subcommand("decompose", "build and verify a trace");
    decompose_cmd->add_option("--code", code_spec);
    decompose_cmd->add_option("--angles", angle_spec)->required();
    decompose_cmd->add_option("--out", out_path, "trace file to write");
    decompose_cmd->add_option("--force-t", force_t,
                              "override the Ramsey t (testing aid; recorded in the trace)");

    auto* verify = app.add_subcommand("verify", "re-verify a stored trace");
    verify->add_option("--trace", trace_path)->required();

    auto* search = app.add_subcommand("search", "max code size over a finite product set");
    search->add_option("--values", values, "candidate off-diagonal values")
        ->required()
        ->delimiter(',');
    search->add_option("--d", d, "target rank")->required();
    search->add_option("--nmax", n_max);
    search->add_option("--budget", budget, "time budget in seconds");
    search->add_flag("--no-symmetry", no_symmetry, "disable first-row symmetry breaking");

    auto* witness = app.add_subcommand("witness", "emit a reference code");
    witness->add_option("--kind", kind, "simplex|icosahedron")->required();
    witness->add_option("--d", d);
    witness->add_option("--out", out_path, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return run_validate(global, code_spec, angle_spec);
        if (project->parsed()) return run_project(global, code_spec, pivot, basis, out_path);
        if (bound->parsed())
            return run_bound(global, kind, d, k, beta, no_inflation);
        if (ramsey->parsed())
            return run_ramsey(global, coloring_path, static_cast<int>(k), t, m, force);
        if (decompose_cmd->parsed())
            return run_decompose(global, code_spec, angle_spec, out_path, force_t);
        if (verify->parsed()) return run_verify(global, trace_path);
        if (search->parsed())
            return run_search(global, values, static_cast<int>(d), n_max, budget, no_symmetry);
        if (witness->parsed()) return run_witness(global, kind, static_cast<int>(d), out_path);
    } catch (const FileFormatError& e) {
        if (global.json_output) {
            json out;
            out["error"] = e.what();
            out["field"] = e.field;
            emit(out);
        } else {
            std::cerr << "error: " << e.what() << "\n";
        }
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        if (global.json_output) {
            json out;
            out["error"] = e.what();
            emit(out);
        } else {
            std::cerr << "error: " << e.what() << "\n";
        }
        return kExitInvalidInput;
    }
    return kExitInvalidInput;
}
