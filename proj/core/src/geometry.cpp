#include "spherecode/geometry.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace spherecode {

GramMatrix gram_of(const Code& code, const ProjectionConfig& cfg) {
    code.require_unit(cfg.tol_unit);
    const int n = code.size();
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = code.rows().row(i).dot(code.rows().row(j));
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return GramMatrix(std::move(g));
}

PairClass classify_product(double value, const AngleSystem& L, const ProjectionConfig& cfg) {
    PairClass pc;
    pc.product = value;

    const auto& a = L.angles();
    int nearest = -1;
    double nearest_dist = std::numeric_limits<double>::infinity();
    int within_wide = 0;  // angles within 2*tol_match of the value
    for (int l = 0; l < static_cast<int>(a.size()); ++l) {
        const double dist = std::abs(value - a[l]);
        if (dist <= 2.0 * cfg.tol_match) ++within_wide;
        if (dist < nearest_dist) {
            nearest_dist = dist;
            nearest = l;
        }
    }
    if (within_wide >= 2) {
        pc.kind = PairKind::ambiguous;
        return pc;
    }
    if (nearest >= 0 && nearest_dist <= cfg.tol_match) {
        pc.kind = PairKind::angle;
        pc.color = nearest + 1;
        return pc;
    }
    if (value <= -L.beta() + cfg.tol_match && value >= -1.0 - cfg.tol_match) {
        pc.kind = PairKind::interval;
        pc.color = 0;
        return pc;
    }
    pc.kind = PairKind::violation;
    return pc;
}

ValidationReport validate_code(const Code& code, const AngleSystem& L,
                               const ProjectionConfig& cfg) {
    return validate_gram(gram_of(code, cfg), L, cfg);
}

ValidationReport validate_gram(const GramMatrix& G, const AngleSystem& L,
                               const ProjectionConfig& cfg) {
    G.require_shape(cfg.tol_sym, cfg.tol_unit);
    ValidationReport report;
    const int n = G.size();
    report.pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            PairClass pc = classify_product(G(i, j), L, cfg);
            pc.i = i;
            pc.j = j;
            if (pc.kind != PairKind::interval && pc.kind != PairKind::angle) {
                report.valid = false;
                if (!report.first_offender) report.first_offender = pc;
            }
            report.pairs.push_back(pc);
        }
    }
    return report;
}

Eigen::VectorXd project_normalized(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                   const ProjectionConfig& cfg) {
    const double c = x.dot(y);
    if (std::abs(c) >= 1.0 - cfg.tol_match) {
        std::ostringstream os;
        os << "project_normalized: |x.y| = " << std::abs(c) << " too close to 1";
        throw SingularProjectionError(0, c, os.str());
    }
    return (x - c * y) / std::sqrt(1.0 - c * c);
}

Eigen::VectorXd project_complement(const Eigen::VectorXd& x,
                                   const std::vector<Eigen::VectorXd>& basis,
                                   const ProjectionConfig& cfg) {
    const int k = static_cast<int>(basis.size());
    if (k == 0) return x;

    Eigen::MatrixXd g(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) g(i, j) = basis[i].dot(basis[j]);
    const double det = g.determinant();
    if (!(det > cfg.tol_match)) {
        std::ostringstream os;
        os << "project_complement: basis Gram determinant " << det << " not above tolerance";
        throw DependentBasisError(det, os.str());
    }

    // Chain order matters for testability: pivot out basis[0] first, then the
    // image of basis[1], and so on; x rides along as the last column.
    std::vector<Eigen::VectorXd> work(basis);
    work.push_back(x);
    for (int i = 0; i < k; ++i) {
        const Eigen::VectorXd pivot = work[i];
        for (int j = i + 1; j <= k; ++j) {
            try {
                work[j] = project_normalized(work[j], pivot, cfg);
            } catch (const SingularProjectionError& e) {
                std::ostringstream os;
                os << "project_complement: chain step " << i + 1 << " degenerate on column "
                   << j << " (c = " << e.c << ")";
                throw SingularProjectionError(i + 1, e.c, os.str());
            }
        }
    }
    return work[k];
}

double g_closed_form(double a, double c, long k) {
    if (!(c > -1.0) || !(c < 1.0)) throw DomainError("g_closed_form: c outside (-1,1)");
    if (k < 0) throw DomainError("g_closed_form: k must be non-negative");
    if (k == 0) return a;
    if (c == 0.0)
        throw DomainError("g_closed_form: c = 0 with k > 0 (c^{-1} undefined)");
    const double denom = 1.0 + static_cast<double>(k) * c;
    if (std::abs(denom) <= 1e-12)
        throw DomainError("g_closed_form: pole 1 + k c = 0");
    const double q = c / denom;  // (c^{-1} + k)^{-1}
    return 1.0 - (1.0 - q) * (1.0 - a) / (1.0 - c);
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

int numerical_rank(const Eigen::VectorXd& eigenvalues, double tol_psd) {
    if (eigenvalues.size() == 0) return 0;
    const double lambda_max = eigenvalues(eigenvalues.size() - 1);
    if (!(lambda_max > 0.0)) return 0;
    int rank = 0;
    for (int i = 0; i < eigenvalues.size(); ++i)
        if (eigenvalues(i) > tol_psd * lambda_max) ++rank;
    return rank;
}

Code factor_gram(const GramMatrix& G, int d, const ProjectionConfig& cfg) {
    G.require_shape(cfg.tol_sym, cfg.tol_unit);
    const int n = G.size();
    if (d < 1) throw Error("factor_gram: dimension must be positive");
    if (n == 0) return Code(d, Eigen::MatrixXd(0, d));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(G.matrix());
    const Eigen::VectorXd& ev = solver.eigenvalues();  // increasing
    const double lambda_max = ev(n - 1);
    const double floor = -cfg.tol_psd * std::max(lambda_max, 1.0);
    if (ev(0) < floor) {
        std::ostringstream os;
        os << "factor_gram: eigenvalue " << ev(0) << " below PSD tolerance " << floor;
        throw NotPsdError(ev(0), os.str());
    }
    const int rank = numerical_rank(ev, cfg.tol_psd);
    if (rank > d) {
        std::ostringstream os;
        os << "factor_gram: numerical rank " << rank << " exceeds target dimension " << d;
        throw RankExcessError(rank, d, os.str());
    }

    // Embed into the top `rank` eigendirections, zero-pad to d columns.
    Eigen::MatrixXd vectors = Eigen::MatrixXd::Zero(n, d);
    for (int r = 0; r < rank; ++r) {
        const int idx = n - 1 - r;  // largest eigenvalues first
        const double scale = std::sqrt(std::max(ev(idx), 0.0));
        vectors.col(r) = solver.eigenvectors().col(idx) * scale;
    }
    // Rows reproduce the diagonal up to the dropped (near-zero) eigenvalues;
    // renormalize so the result is a valid unit-vector code.
    for (int i = 0; i < n; ++i) {
        const double norm = vectors.row(i).norm();
        if (!(norm > 0.0)) throw Error("factor_gram: zero row in factorization");
        vectors.row(i) /= norm;
    }
    return Code(d, std::move(vectors));
}

}  // namespace spherecode
