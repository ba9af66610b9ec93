#ifndef SPHERECODE_TYPES_HPP
#define SPHERECODE_TYPES_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "spherecode/errors.hpp"

namespace spherecode {

/// Tolerance set shared by the geometric operations.
///
/// tol_psd is interpreted relative to the largest eigenvalue of the matrix
/// under test; the other three are absolute. All must lie in (0, 1e-3].
struct ProjectionConfig {
    double tol_unit = 1e-9;
    double tol_sym = 1e-9;
    double tol_psd = 1e-8;
    double tol_match = 1e-9;

    void validate() const;

    /// All four tolerances set to the same value (env/CLI override hook).
    static ProjectionConfig uniform(double tol);
};

/// A set of unit vectors in R^d, stored as the rows of an n x d matrix.
class Code {
public:
    Code(int dim, Eigen::MatrixXd vectors);

    /// Convenience constructor from row vectors.
    static Code from_rows(int dim, const std::vector<Eigen::VectorXd>& rows);

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(vectors_.rows()); }
    const Eigen::MatrixXd& rows() const { return vectors_; }
    Eigen::VectorXd vector(int i) const { return vectors_.row(i); }

    /// Index of the first row whose norm deviates from 1 by more than tol,
    /// or nullopt when all rows are unit.
    std::optional<int> first_non_unit(double tol) const;

    /// Throws NonUnitVectorError if any row is off the sphere.
    void require_unit(double tol) const;

    /// Sub-code formed by the given row indices (order preserved).
    Code subset(const std::vector<int>& indices) const;

private:
    int dim_;
    Eigen::MatrixXd vectors_;  // n x dim
};

/// Symmetric unit-diagonal matrix of pairwise inner products.
class GramMatrix {
public:
    explicit GramMatrix(Eigen::MatrixXd entries);

    int size() const { return static_cast<int>(m_.rows()); }
    double operator()(int i, int j) const { return m_(i, j); }
    const Eigen::MatrixXd& matrix() const { return m_; }

    bool is_symmetric(double tol) const;
    bool has_unit_diagonal(double tol) const;

    /// Throws Error if symmetry or the unit diagonal fail at the given tolerances.
    void require_shape(double tol_sym, double tol_unit) const;

private:
    Eigen::MatrixXd m_;
};

/// The admissible-product set L = [-1, -beta] union {a_1 < ... < a_k}.
///
/// Angle values <= -beta already belong to the interval; the strict
/// constructor rejects them, with_interval_absorbed drops them silently
/// (used for projected systems whose formal angle images may fall into
/// the new interval).
class AngleSystem {
public:
    AngleSystem(double beta, std::vector<double> angles);

    static AngleSystem with_interval_absorbed(double beta, const std::vector<double>& angles);

    double beta() const { return beta_; }
    const std::vector<double>& angles() const { return angles_; }
    int k() const { return static_cast<int>(angles_.size()); }

private:
    AngleSystem() = default;
    double beta_ = 0.5;
    std::vector<double> angles_;
};

}  // namespace spherecode

#endif
