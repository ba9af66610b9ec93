#include "spherecode/combinatorics.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <sstream>

namespace spherecode {

Graph::Graph(int n) : n_(n), adj_(static_cast<std::size_t>(n) * n, 0) {
    if (n < 0) throw Error("Graph: negative vertex count");
}

void Graph::add_edge(int u, int v) {
    if (u == v) throw Error("Graph: self-loops not allowed");
    if (u < 0 || v < 0 || u >= n_ || v >= n_) throw Error("Graph: vertex out of range");
    adj_[idx(u, v)] = 1;
    adj_[idx(v, u)] = 1;
}

int Graph::degree(int v) const {
    int deg = 0;
    for (int u = 0; u < n_; ++u)
        if (u != v && adjacent(v, u)) ++deg;
    return deg;
}

Graph Graph::complement() const {
    Graph c(n_);
    for (int u = 0; u < n_; ++u)
        for (int v = u + 1; v < n_; ++v)
            if (!adjacent(u, v)) c.add_edge(u, v);
    return c;
}

int max_degree(const Graph& g) {
    int best = 0;
    for (int v = 0; v < g.size(); ++v) best = std::max(best, g.degree(v));
    return best;
}

std::vector<int> greedy_independent(const Graph& g) {
    std::vector<int> result;
    std::vector<char> alive(g.size(), 1);
    for (int v = 0; v < g.size(); ++v) {
        if (!alive[v]) continue;
        result.push_back(v);
        alive[v] = 0;
        for (int u = v + 1; u < g.size(); ++u)
            if (alive[u] && g.adjacent(v, u)) alive[u] = 0;
    }
    return result;
}

EdgeColoring::EdgeColoring(int n, int num_colors)
    : n_(n), num_colors_(num_colors),
      colors_(static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2, 0) {
    if (n < 0) throw Error("EdgeColoring: negative vertex count");
    if (num_colors < 1) throw Error("EdgeColoring: need at least one color");
}

std::size_t EdgeColoring::tri(int i, int j) const {
    if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_)
        throw Error("EdgeColoring: bad edge index");
    if (i > j) std::swap(i, j);
    // row-major upper triangle
    return static_cast<std::size_t>(i) * n_ - static_cast<std::size_t>(i) * (i + 1) / 2 +
           (j - i - 1);
}

int EdgeColoring::color(int i, int j) const { return colors_[tri(i, j)]; }

void EdgeColoring::set_color(int i, int j, int c) {
    if (c < 0 || c >= num_colors_) throw Error("EdgeColoring: color out of range");
    colors_[tri(i, j)] = c;
}

Graph EdgeColoring::color_class(int c) const {
    Graph g(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (color(i, j) == c) g.add_edge(i, j);
    return g;
}

Graph EdgeColoring::color_at_least(int threshold) const {
    Graph g(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (color(i, j) >= threshold) g.add_edge(i, j);
    return g;
}

ColoringView view_of(const EdgeColoring& coloring) {
    return ColoringView{coloring.size(), coloring.num_colors(),
                        [&coloring](int i, int j) { return coloring.color(i, j); }};
}

EdgeColoring color_graph(const Code& code, const AngleSystem& L, const ProjectionConfig& cfg) {
    const ValidationReport report = validate_code(code, L, cfg);
    if (!report.valid) {
        std::ostringstream os;
        const auto& off = *report.first_offender;
        os << "color_graph: pair (" << off.i << "," << off.j << ") with product " << off.product
           << (off.kind == PairKind::ambiguous ? " is ambiguous" : " violates L");
        throw Error(os.str());
    }
    EdgeColoring coloring(code.size(), L.k() + 1);
    for (const PairClass& pc : report.pairs) coloring.set_color(pc.i, pc.j, pc.color);
    return coloring;
}

RamseyResult ramsey_pair(const ColoringView& coloring, int k, int t, long m, bool force) {
    if (k < 1) throw Error("ramsey_pair: need at least one color");
    if (t < 0 || m < 0) throw Error("ramsey_pair: t and m must be non-negative");
    if (coloring.num_colors > k)
        throw Error("ramsey_pair: coloring uses more colors than the stated k");

    const long n = coloring.n;
    if (!force) {
        // Hypothesis n > k^{kt} m, evaluated exactly while k^{kt} fits 64 bits;
        // beyond that it cannot be verified against any representable n.
        const double log2_pow = static_cast<double>(k) * t * std::log2(std::max(k, 1));
        if (log2_pow > 64.0) {
            std::ostringstream os;
            os << "ramsey_pair: k^{kt} exceeds 2^64, hypothesis unverifiable at this size; "
                  "pass force to attempt";
            throw Error(os.str());
        }
        mpz_class pow;
        mpz_ui_pow_ui(pow.get_mpz_t(), static_cast<unsigned long>(k),
                      static_cast<unsigned long>(k) * static_cast<unsigned long>(t));
        if (!(mpz_class(n) > pow * m)) {
            std::ostringstream os;
            os << "ramsey_pair: hypothesis n > k^{kt} m fails (n = " << n
               << ", k^{kt} m = " << mpz_class(pow * m).get_str() << "); pass force to attempt";
            throw Error(os.str());
        }
    }

    RamseyResult result;
    const int steps = k * t;

    std::vector<int> y(n);
    for (long i = 0; i < n; ++i) y[i] = static_cast<int>(i);

    std::vector<int> pivots;
    std::vector<int> majority_colors;
    std::vector<PivotStep> log;
    pivots.reserve(steps);

    for (int step = 0; step < steps; ++step) {
        if (y.empty()) {
            result.fail_step = step;
            std::ostringstream os;
            os << "Y became empty before step " << step + 1 << " of " << steps;
            result.message = os.str();
            return result;
        }
        const int pivot = y.front();  // smallest index in Y_i
        std::vector<long> tally(k, 0);
        for (std::size_t q = 1; q < y.size(); ++q) {
            const int c = coloring.color(pivot, y[q]);
            if (c < 0 || c >= k) throw Error("ramsey_pair: edge color out of range");
            ++tally[c];
        }
        // majority colour, ties toward the smallest index
        int c_best = 0;
        for (int c = 1; c < k; ++c)
            if (tally[c] > tally[c_best]) c_best = c;

        PivotStep ps;
        ps.vertex = pivot;
        ps.color = c_best;
        ps.y_size_before = static_cast<long>(y.size());

        std::vector<int> next;
        next.reserve(tally[c_best]);
        for (std::size_t q = 1; q < y.size(); ++q)
            if (coloring.color(pivot, y[q]) == c_best) next.push_back(y[q]);
        ps.y_size_after = static_cast<long>(next.size());

        pivots.push_back(pivot);
        majority_colors.push_back(c_best);
        log.push_back(ps);
        y = std::move(next);
    }

    if (static_cast<long>(y.size()) < m) {
        result.fail_step = steps;
        std::ostringstream os;
        os << "final |Y| = " << y.size() << " below requested m = " << m;
        result.message = os.str();
        return result;
    }

    // Pigeonhole: some colour repeats t times among the kt majorities.
    MonoPair pair;
    pair.y_final_size = static_cast<long>(y.size());
    pair.log = std::move(log);
    if (t == 0) {
        pair.color = 0;
    } else {
        std::vector<int> count(k, 0);
        int chosen = -1;
        for (int c = 0; c < k && chosen < 0; ++c) {
            count[c] = static_cast<int>(
                std::count(majority_colors.begin(), majority_colors.end(), c));
            if (count[c] >= t) chosen = c;
        }
        if (chosen < 0) {
            // cannot happen after kt completed steps (ceil(kt/k) = t)
            result.fail_step = steps;
            result.message = "pigeonhole failed to find a repeated colour";
            return result;
        }
        pair.color = chosen;
        for (int s = 0; s < steps && static_cast<int>(pair.X.size()) < t; ++s)
            if (majority_colors[s] == chosen) pair.X.push_back(pivots[s]);
    }
    pair.Y.assign(y.begin(), y.begin() + m);

    std::string why;
    if (!check_mono_pair(coloring, pair, &why)) {
        result.fail_step = steps;
        result.message = "internal invariant breach: " + why;
        return result;
    }
    result.pair = std::move(pair);
    return result;
}

bool check_mono_pair(const ColoringView& coloring, const MonoPair& pair, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    for (int x : pair.X)
        for (int yv : pair.Y)
            if (x == yv) return fail("X and Y intersect");
    for (std::size_t a = 0; a < pair.X.size(); ++a)
        for (std::size_t b = a + 1; b < pair.X.size(); ++b)
            if (coloring.color(pair.X[a], pair.X[b]) != pair.color) {
                std::ostringstream os;
                os << "edge inside X (" << pair.X[a] << "," << pair.X[b] << ") has wrong colour";
                return fail(os.str());
            }
    for (int x : pair.X)
        for (int yv : pair.Y)
            if (coloring.color(x, yv) != pair.color) {
                std::ostringstream os;
                os << "edge (" << x << "," << yv << ") from X to Y has wrong colour";
                return fail(os.str());
            }
    return true;
}

}  // namespace spherecode
