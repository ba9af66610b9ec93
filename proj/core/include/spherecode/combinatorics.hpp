#ifndef SPHERECODE_COMBINATORICS_HPP
#define SPHERECODE_COMBINATORICS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spherecode/geometry.hpp"
#include "spherecode/types.hpp"

namespace spherecode {

/// Simple undirected graph on vertices 0..n-1 (dense adjacency).
class Graph {
public:
    explicit Graph(int n);

    int size() const { return n_; }
    void add_edge(int u, int v);
    bool adjacent(int u, int v) const { return adj_[idx(u, v)] != 0; }
    int degree(int v) const;
    Graph complement() const;

private:
    std::size_t idx(int u, int v) const { return static_cast<std::size_t>(u) * n_ + v; }
    int n_;
    std::vector<char> adj_;
};

int max_degree(const Graph& g);

/// Greedy independent set in ascending vertex order. The returned set is
/// independent and has size >= ceil(n / (max_degree + 1)).
std::vector<int> greedy_independent(const Graph& g);

/// Total edge coloring of K_n with colors 0..num_colors-1.
class EdgeColoring {
public:
    EdgeColoring(int n, int num_colors);

    int size() const { return n_; }
    int num_colors() const { return num_colors_; }
    int color(int i, int j) const;
    void set_color(int i, int j, int c);

    /// Subgraph formed by the edges of one color.
    Graph color_class(int c) const;

    /// Subgraph of edges with color >= threshold.
    Graph color_at_least(int threshold) const;

private:
    std::size_t tri(int i, int j) const;
    int n_;
    int num_colors_;
    std::vector<int> colors_;
};

/// Functional view of a coloring; lets the Ramsey machinery run on colorings
/// far too large to materialize (color computed per edge on demand).
struct ColoringView {
    int n = 0;
    int num_colors = 0;
    std::function<int(int, int)> color;
};

ColoringView view_of(const EdgeColoring& coloring);

/// Edge coloring of a validated code: color 0 for the interval, l for a_l.
EdgeColoring color_graph(const Code& code, const AngleSystem& L,
                         const ProjectionConfig& cfg = {});

struct PivotStep {
    int vertex = -1;
    int color = -1;
    long y_size_before = 0;  // |Y_{i-1}| scanned at this step
    long y_size_after = 0;   // |Y_i|
};

/// Monochromatic pair (X, Y): every edge inside X union Y that touches X has
/// color `color`. X holds the pigeonholed pivots, Y the surviving set
/// truncated to the requested m.
struct MonoPair {
    std::vector<int> X;
    std::vector<int> Y;
    int color = -1;
    std::vector<PivotStep> log;
    long y_final_size = 0;  // |Y_{kt}| before truncation
};

struct RamseyResult {
    std::optional<MonoPair> pair;
    int fail_step = -1;     // step at which Y became too small (-1 if ok)
    std::string message;
    bool ok() const { return pair.has_value(); }
};

/// Constructive proof of the Ramsey variant: kt pivot/majority rounds, then a
/// pigeonhole over the recorded majority colors. Requires the hypothesis
/// n > k^{kt} m unless force is set; with force the greedy run may fail
/// honestly (k = 1 in particular cannot sustain the shrink chain).
RamseyResult ramsey_pair(const ColoringView& coloring, int k, int t, long m,
                         bool force = false);

/// Independent re-check of the MonoPair invariant against a coloring.
bool check_mono_pair(const ColoringView& coloring, const MonoPair& pair,
                     std::string* why = nullptr);

}  // namespace spherecode

#endif
