#ifndef SPHERECODE_ERRORS_HPP
#define SPHERECODE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spherecode {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A vector whose Euclidean norm deviates from 1 beyond tol_unit.
struct NonUnitVectorError : Error {
    NonUnitVectorError(int index_, double norm_, const std::string& what_)
        : Error(what_), index(index_), norm(norm_) {}
    int index;
    double norm;
};

/// Projection attempted with |x.y| too close to 1.
struct SingularProjectionError : Error {
    SingularProjectionError(int step_, double c_, const std::string& what_)
        : Error(what_), step(step_), c(c_) {}
    int step;  // chain step at which the projection degenerated (0 = single-pivot call)
    double c;
};

/// Basis passed to project_complement is linearly dependent (Gram determinant ~ 0).
struct DependentBasisError : Error {
    DependentBasisError(double det_, const std::string& what_) : Error(what_), det(det_) {}
    double det;
};

/// Input outside an operation's numeric domain (g at c=0 with k>0, pole 1+kc=0, ...).
struct DomainError : Error {
    using Error::Error;
};

/// Matrix has an eigenvalue below the PSD tolerance.
struct NotPsdError : Error {
    NotPsdError(double eigenvalue_, const std::string& what_)
        : Error(what_), eigenvalue(eigenvalue_) {}
    double eigenvalue;
};

/// Matrix rank exceeds the requested embedding dimension.
struct RankExcessError : Error {
    RankExcessError(int rank_, int target_, const std::string& what_)
        : Error(what_), rank(rank_), target(target_) {}
    int rank;
    int target;
};

/// Malformed or schema-violating input file.
struct FileFormatError : Error {
    FileFormatError(std::string field_, const std::string& what_)
        : Error(what_), field(std::move(field_)) {}
    std::string field;  // JSON pointer-ish location of the offending field
};

}  // namespace spherecode

#endif
