#ifndef SPHERECODE_SEARCH_HPP
#define SPHERECODE_SEARCH_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "spherecode/geometry.hpp"
#include "spherecode/types.hpp"

namespace spherecode {

struct FeasibilityReport {
    bool feasible = false;
    double min_eigenvalue = 0.0;
    int rank = 0;
    explicit operator bool() const { return feasible; }
};

/// Realizability of a Gram matrix in R^d: PSD within tol_psd (relative to the
/// top eigenvalue) and numerical rank <= d.
FeasibilityReport check_gram_feasible(const GramMatrix& G, int d,
                                      const ProjectionConfig& cfg = {});

struct SearchConfig {
    std::vector<double> candidate_values;  // permitted off-diagonal values, subset of (-1,1)
    int d = 2;                             // target rank
    int n_max = 12;
    double time_budget_seconds = std::numeric_limits<double>::infinity();
    bool symmetry_breaking = true;
    int threads = 1;
    ProjectionConfig tol;
};

struct SearchResult {
    int best_n = 0;
    GramMatrix witness{Eigen::MatrixXd::Identity(1, 1)};
    bool exhaustive = true;  // full space explored (or the n_max cap was reached)
    std::uint64_t nodes_visited = 0;
};

/// Depth-first completion of off-diagonal entries in row-major order over the
/// candidate set (ascending), pruning partial leading principal submatrices
/// that fail PSD and completed ones whose rank exceeds d. Exhaustive unless
/// the time budget runs out.
SearchResult max_code_search(const SearchConfig& cfg);

/// d+1 unit vectors in R^d with pairwise products exactly -1/d (up to fp).
Code simplex_code(int d);

/// Six unit vectors in R^3, one per antipodal vertex pair of the icosahedron
/// (cyclic (0, +-1, +-phi) directions, normalized). Pairwise products are
/// +-1/sqrt(5) ~= +-0.4472, the classical six equiangular lines.
Code icosahedron_code();

/// The common |product| of icosahedron_code: 1/sqrt(5).
double icosahedron_angle();

}  // namespace spherecode

#endif
