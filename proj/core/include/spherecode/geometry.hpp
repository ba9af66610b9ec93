#ifndef SPHERECODE_GEOMETRY_HPP
#define SPHERECODE_GEOMETRY_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "spherecode/types.hpp"

namespace spherecode {

/// Pairwise classification of a code against an angle system.
enum class PairKind { interval, angle, violation, ambiguous };

struct PairClass {
    int i = 0;
    int j = 0;
    double product = 0.0;
    PairKind kind = PairKind::violation;
    int color = -1;  // 0 = interval, l >= 1 = angle a_l; -1 for violation/ambiguous
};

struct ValidationReport {
    bool valid = true;
    std::vector<PairClass> pairs;                 // all unordered pairs, (i<j), row-major
    std::optional<PairClass> first_offender;      // first non-classified pair, if any
};

/// Matrix of pairwise inner products. Exactly symmetric, diagonal forced to 1
/// after the unit-norm check. Throws NonUnitVectorError naming the offender.
GramMatrix gram_of(const Code& code, const ProjectionConfig& cfg = {});

/// Classify a single inner product against L. Nearest angle wins before the
/// interval; two angles within 2*tol_match of the value flag an ambiguity
/// instead of guessing.
PairClass classify_product(double value, const AngleSystem& L, const ProjectionConfig& cfg);

/// Per-pair classification of the whole code; verdict is the conjunction.
ValidationReport validate_code(const Code& code, const AngleSystem& L,
                               const ProjectionConfig& cfg = {});

/// Same classification applied to a Gram matrix taken at face value
/// (realizability is not implied; see check_gram_feasible).
ValidationReport validate_gram(const GramMatrix& G, const AngleSystem& L,
                               const ProjectionConfig& cfg = {});

/// Normalized projection of x onto the orthogonal complement of y:
/// (x - (x.y) y) / sqrt(1 - (x.y)^2). Requires |x.y| < 1 - tol_match.
Eigen::VectorXd project_normalized(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                   const ProjectionConfig& cfg = {});

/// Normalized projection of x onto the orthogonal complement of span(Y),
/// computed by chaining project_normalized pivot by pivot (Y[0] first).
/// Y must be linearly independent and x outside its span.
Eigen::VectorXd project_complement(const Eigen::VectorXd& x,
                                   const std::vector<Eigen::VectorXd>& basis,
                                   const ProjectionConfig& cfg = {});

/// Closed form for the projected inner product when all of X unions Y share a
/// common inner product c with Y: returns
///   1 - (1-c)^{-1} (1 - (c^{-1}+k)^{-1}) (1-a).
/// k = 0 returns a exactly. c = 0 with k > 0 and 1 + k c = 0 are domain errors.
double g_closed_form(double a, double c, long k);

/// Feasibility + embedding: if G is PSD within tol_psd (relative to the top
/// eigenvalue) and its numerical rank is <= d, returns unit vectors in R^d
/// reproducing G; the embedding uses the smallest sufficient dimension and
/// zero-pads up to d.
Code factor_gram(const GramMatrix& G, int d, const ProjectionConfig& cfg = {});

/// Eigenvalues of a symmetric matrix in increasing order (deterministic solver).
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m);

/// Numerical rank: eigenvalues exceeding tol_psd * lambda_max.
int numerical_rank(const Eigen::VectorXd& eigenvalues, double tol_psd);

}  // namespace spherecode

#endif
