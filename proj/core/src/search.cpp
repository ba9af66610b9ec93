#include "spherecode/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <sstream>

namespace spherecode {

FeasibilityReport check_gram_feasible(const GramMatrix& G, int d, const ProjectionConfig& cfg) {
    FeasibilityReport report;
    if (G.size() == 0) {
        report.feasible = d >= 0;
        return report;
    }
    G.require_shape(cfg.tol_sym, cfg.tol_unit);
    const Eigen::VectorXd ev = symmetric_eigenvalues(G.matrix());
    report.min_eigenvalue = ev(0);
    report.rank = numerical_rank(ev, cfg.tol_psd);
    const double lambda_max = ev(ev.size() - 1);
    report.feasible = ev(0) >= -cfg.tol_psd * std::max(lambda_max, 1.0) && report.rank <= d;
    return report;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Dfs {
    // immutable parameters
    std::vector<double> values;  // ascending, deduplicated
    int n_max = 0;
    int d = 0;
    double tol = 1e-8;
    bool symmetry_breaking = true;
    Clock::time_point deadline;

    // incremental factorization state
    std::vector<std::vector<double>> coords;  // per committed vertex
    std::vector<int> pivots;                  // vertex introducing each dimension
    std::vector<std::vector<double>> rows;    // committed off-diagonal values per row

    // outcome
    int best_n = 0;
    std::vector<std::vector<double>> best_rows;
    std::uint64_t nodes = 0;
    bool exhausted = true;
    bool done = false;  // best_n hit n_max, nothing better possible

    void commit_first_vertex() {
        coords.push_back({1.0});
        pivots.push_back(0);
        rows.push_back({});
        record();
    }

    void record() {
        if (static_cast<int>(coords.size()) > best_n) {
            best_n = static_cast<int>(coords.size());
            best_rows = rows;
            if (best_n >= n_max) done = true;
        }
    }

    bool out_of_time() {
        if ((nodes & 0xFFF) == 0 && Clock::now() > deadline) {
            exhausted = false;
            return true;
        }
        return false;
    }

    // Assign entry (v, j) and deeper; w / wnorm2 carry the triangular solve of
    // the candidate row against the committed pivots.
    void entry(int v, int j, std::vector<double>& g, std::vector<double>& w, double wnorm2,
               int first_col_idx) {
        if (done || !exhausted) return;
        if (j == v) {
            finish_row(v, g, w, wnorm2, first_col_idx);
            return;
        }
        const int start = (symmetry_breaking && j == 0 && v >= 2) ? first_col_idx : 0;
        for (int vi = start; vi < static_cast<int>(values.size()); ++vi) {
            ++nodes;
            if (out_of_time() || done) return;
            g[j] = values[vi];

            const int dim = dim_introduced_by(j);
            double w_next = 0.0;
            if (dim >= 0) {
                // j is the pivot for `dim`: one more solve component.
                double acc = g[j];
                for (int q = 0; q < dim; ++q) acc -= coords[j][q] * w[q];
                w_next = acc / coords[j][dim];
                const double nn = wnorm2 + w_next * w_next;
                if (nn > 1.0 + tol) continue;  // candidate row cannot be a unit vector
                w[dim] = w_next;
                entry(v, j + 1, g, w, nn, j == 0 ? vi : first_col_idx);
            } else {
                // j is dependent on earlier pivots: its equation must check out.
                double predicted = 0.0;
                for (std::size_t q = 0; q < coords[j].size(); ++q)
                    predicted += coords[j][q] * w[q];
                if (std::abs(predicted - g[j]) > tol) continue;
                entry(v, j + 1, g, w, wnorm2, j == 0 ? vi : first_col_idx);
            }
        }
    }

    int dim_introduced_by(int vertex) const {
        for (std::size_t r = 0; r < pivots.size(); ++r)
            if (pivots[r] == vertex) return static_cast<int>(r);
        return -1;
    }

    void finish_row(int v, std::vector<double>& g, std::vector<double>& w, double wnorm2,
                    int first_col_idx) {
        const double alpha2 = 1.0 - wnorm2;
        if (alpha2 < -tol) return;
        const int rank = static_cast<int>(pivots.size());
        const bool new_dim = alpha2 > tol;
        if (new_dim && rank + 1 > d) return;  // rank pruning on the completed submatrix

        std::vector<double> c(w.begin(), w.begin() + rank);
        if (new_dim) {
            c.push_back(std::sqrt(std::max(alpha2, 0.0)));
            pivots.push_back(v);
        }
        coords.push_back(std::move(c));
        rows.push_back(g);
        record();

        if (!done && static_cast<int>(coords.size()) < n_max) {
            std::vector<double> g2(v + 1), w2(pivots.size(), 0.0);
            entry(v + 1, 0, g2, w2, 0.0, first_col_idx);
        }

        coords.pop_back();
        rows.pop_back();
        if (new_dim) pivots.pop_back();
    }

    // Explore with the first off-diagonal entry restricted to values[lo, hi).
    void run(int lo, int hi) {
        commit_first_vertex();
        if (done || n_max < 2) return;
        std::vector<double> g(1), w(1, 0.0);
        for (int vi = lo; vi < hi && !done && exhausted; ++vi) {
            ++nodes;
            g[0] = values[vi];
            double w0 = g[0] / coords[0][0];
            if (w0 * w0 > 1.0 + tol) continue;
            w[0] = w0;
            // first_col_idx of row 1 seeds the symmetry-breaking order for row 2
            std::vector<double> gg = g;
            std::vector<double> ww = w;
            finish_row(1, gg, ww, w0 * w0, vi);
        }
    }
};

Eigen::MatrixXd gram_from_rows(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(std::max(n, 1), std::max(n, 1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < static_cast<int>(rows[i].size()); ++j) {
            m(i, j) = rows[i][j];
            m(j, i) = rows[i][j];
        }
    return m;
}

}  // namespace

SearchResult max_code_search(const SearchConfig& cfg) {
    if (cfg.candidate_values.empty())
        throw Error("max_code_search: candidate_values must be non-empty");
    for (double v : cfg.candidate_values)
        if (!(v > -1.0) || !(v < 1.0)) {
            std::ostringstream os;
            os << "max_code_search: candidate value " << v << " outside (-1,1)";
            throw Error(os.str());
        }
    if (cfg.d < 1) throw Error("max_code_search: d must be positive");
    if (cfg.n_max < 1) throw Error("max_code_search: n_max must be positive");

    std::vector<double> values = cfg.candidate_values;
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    const auto deadline =
        std::isfinite(cfg.time_budget_seconds)
            ? Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                 std::chrono::duration<double>(cfg.time_budget_seconds))
            : Clock::time_point::max();

    auto make_dfs = [&]() {
        Dfs dfs;
        dfs.values = values;
        dfs.n_max = cfg.n_max;
        dfs.d = cfg.d;
        dfs.tol = cfg.tol.tol_psd;
        dfs.symmetry_breaking = cfg.symmetry_breaking;
        dfs.deadline = deadline;
        return dfs;
    };

    SearchResult result;
    const int nv = static_cast<int>(values.size());

    if (cfg.threads <= 1 || cfg.n_max < 2 || nv < 2) {
        Dfs dfs = make_dfs();
        dfs.run(0, nv);
        result.best_n = dfs.best_n;
        result.witness = GramMatrix(gram_from_rows(dfs.best_rows));
        result.exhaustive = dfs.exhausted;
        result.nodes_visited = dfs.nodes;
        return result;
    }

    // One task per first-entry value; merge is a max, ties resolved toward the
    // lower (lexicographically smaller) branch.
    std::vector<std::future<Dfs>> tasks;
    tasks.reserve(nv);
    for (int vi = 0; vi < nv; ++vi) {
        tasks.push_back(std::async(std::launch::async, [&, vi]() {
            Dfs dfs = make_dfs();
            dfs.run(vi, vi + 1);
            return dfs;
        }));
    }
    result.best_n = 1;
    result.witness = GramMatrix(Eigen::MatrixXd::Identity(1, 1));
    bool have_witness = false;
    for (auto& task : tasks) {
        Dfs dfs = task.get();
        result.nodes_visited += dfs.nodes;
        result.exhaustive = result.exhaustive && dfs.exhausted;
        if (dfs.best_n > result.best_n || !have_witness) {
            if (dfs.best_n >= result.best_n) {
                result.best_n = dfs.best_n;
                result.witness = GramMatrix(gram_from_rows(dfs.best_rows));
                have_witness = true;
            }
        }
    }
    return result;
}

Code simplex_code(int d) {
    if (d < 1) throw Error("simplex_code: d must be positive");
    const int n = d + 1;
    const double scale = std::sqrt(static_cast<double>(n) / d);  // 1/|e_i - c|

    // Centered standard basis in R^{d+1}, reflected so the all-ones direction
    // becomes the last axis, which every centered vector is orthogonal to.
    Eigen::VectorXd z = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    Eigen::VectorXd h = z;
    h(n - 1) -= 1.0;
    const double h2 = h.squaredNorm();

    Eigen::MatrixXd vectors(n, d);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd u = Eigen::VectorXd::Constant(n, -1.0 / n);
        u(i) += 1.0;
        u *= scale;
        const Eigen::VectorXd reflected = u - (2.0 * h.dot(u) / h2) * h;
        vectors.row(i) = reflected.head(d);
        vectors.row(i) /= vectors.row(i).norm();
    }
    return Code(d, std::move(vectors));
}

Code icosahedron_code() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const double inv = 1.0 / std::sqrt(1.0 + phi * phi);
    Eigen::MatrixXd vectors(6, 3);
    vectors << 0, 1, phi,
               0, 1, -phi,
               1, phi, 0,
               1, -phi, 0,
               phi, 0, 1,
               phi, 0, -1;
    vectors *= inv;
    return Code(3, std::move(vectors));
}

double icosahedron_angle() { return 1.0 / std::sqrt(5.0); }

}  // namespace spherecode
