#include "spherecode/types.hpp"

#include <cmath>
#include <sstream>

namespace spherecode {

void ProjectionConfig::validate() const {
    const double tols[4] = {tol_unit, tol_sym, tol_psd, tol_match};
    const char* names[4] = {"tol_unit", "tol_sym", "tol_psd", "tol_match"};
    for (int i = 0; i < 4; ++i) {
        if (!(tols[i] > 0.0) || !(tols[i] <= 1e-3)) {
            std::ostringstream os;
            os << names[i] << " = " << tols[i] << " outside (0, 1e-3]";
            throw Error(os.str());
        }
    }
}

ProjectionConfig ProjectionConfig::uniform(double tol) {
    ProjectionConfig cfg;
    cfg.tol_unit = cfg.tol_sym = cfg.tol_psd = cfg.tol_match = tol;
    cfg.validate();
    return cfg;
}

Code::Code(int dim, Eigen::MatrixXd vectors) : dim_(dim), vectors_(std::move(vectors)) {
    if (dim_ < 1) throw Error("Code: dimension must be positive");
    if (vectors_.size() > 0 && vectors_.cols() != dim_) {
        std::ostringstream os;
        os << "Code: vectors have " << vectors_.cols() << " coordinates, expected " << dim_;
        throw Error(os.str());
    }
    if (vectors_.rows() == 0) vectors_.resize(0, dim_);
}

Code Code::from_rows(int dim, const std::vector<Eigen::VectorXd>& rows) {
    Eigen::MatrixXd m(static_cast<int>(rows.size()), dim);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        if (rows[i].size() != dim) throw Error("Code::from_rows: inconsistent vector length");
        m.row(i) = rows[i];
    }
    return Code(dim, std::move(m));
}

std::optional<int> Code::first_non_unit(double tol) const {
    for (int i = 0; i < size(); ++i) {
        if (std::abs(vectors_.row(i).norm() - 1.0) > tol) return i;
    }
    return std::nullopt;
}

void Code::require_unit(double tol) const {
    if (auto bad = first_non_unit(tol)) {
        std::ostringstream os;
        const double norm = vectors_.row(*bad).norm();
        os << "vector " << *bad << " has norm " << norm << " (unit tolerance " << tol << ")";
        throw NonUnitVectorError(*bad, norm, os.str());
    }
}

Code Code::subset(const std::vector<int>& indices) const {
    Eigen::MatrixXd m(static_cast<int>(indices.size()), dim_);
    for (int r = 0; r < static_cast<int>(indices.size()); ++r) {
        const int i = indices[r];
        if (i < 0 || i >= size()) throw Error("Code::subset: index out of range");
        m.row(r) = vectors_.row(i);
    }
    return Code(dim_, std::move(m));
}

GramMatrix::GramMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols()) throw Error("GramMatrix: matrix must be square");
}

bool GramMatrix::is_symmetric(double tol) const {
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j)
            if (std::abs(m_(i, j) - m_(j, i)) > tol) return false;
    return true;
}

bool GramMatrix::has_unit_diagonal(double tol) const {
    for (int i = 0; i < size(); ++i)
        if (std::abs(m_(i, i) - 1.0) > tol) return false;
    return true;
}

void GramMatrix::require_shape(double tol_sym, double tol_unit) const {
    if (!is_symmetric(tol_sym)) throw Error("GramMatrix: not symmetric within tolerance");
    if (!has_unit_diagonal(tol_unit)) throw Error("GramMatrix: diagonal deviates from 1");
}

namespace {

void check_angle_range(double beta) {
    if (!(beta > 0.0) || !(beta < 1.0)) {
        std::ostringstream os;
        os << "AngleSystem: beta = " << beta << " outside (0,1)";
        throw Error(os.str());
    }
}

}  // namespace

AngleSystem::AngleSystem(double beta, std::vector<double> angles)
    : beta_(beta), angles_(std::move(angles)) {
    check_angle_range(beta_);
    for (std::size_t i = 0; i < angles_.size(); ++i) {
        const double a = angles_[i];
        std::ostringstream os;
        if (!(a > -1.0) || !(a < 1.0)) {
            os << "AngleSystem: a_" << i + 1 << " = " << a << " outside (-1,1)";
            throw Error(os.str());
        }
        if (a <= -beta_) {
            os << "AngleSystem: a_" << i + 1 << " = " << a
               << " lies in the interval [-1,-beta], beta = " << beta_;
            throw Error(os.str());
        }
        if (i > 0 && !(angles_[i - 1] < a)) {
            os << "AngleSystem: angles not strictly increasing at position " << i + 1;
            throw Error(os.str());
        }
    }
}

AngleSystem AngleSystem::with_interval_absorbed(double beta, const std::vector<double>& angles) {
    check_angle_range(beta);
    std::vector<double> kept;
    for (double a : angles) {
        if (a > -beta && a < 1.0) kept.push_back(a);
    }
    return AngleSystem(beta, std::move(kept));
}

}  // namespace spherecode
