#include "spherecode/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace spherecode {

mpz_class dgs_bound(unsigned long d, unsigned long k) {
    mpz_class result;
    mpz_bin_uiui(result.get_mpz_t(), d + k, k);
    return result;
}

LogValue dgs_bound_log(double d, double k) {
    if (k <= 0.0) return LogValue::one();
    const double l =
        (std::lgamma(d + k + 1.0) - std::lgamma(k + 1.0) - std::lgamma(d + 1.0)) /
        std::numbers::ln2;
    return LogValue::from_log2(l);
}

KoornwinderReport koornwinder_certificate(const Code& code, const std::vector<double>& A,
                                          const ProjectionConfig& cfg) {
    const GramMatrix G = gram_of(code, cfg);
    const int n = G.size();

    KoornwinderReport report;
    double target = 1.0;
    for (double a : A) target *= (1.0 - a);
    report.diag_target = target;
    report.size_bound = dgs_bound(static_cast<unsigned long>(code.dim()),
                                  static_cast<unsigned long>(A.size()));

    // Precondition: every pairwise product sits on some a in A. Interval
    // values (or anything else off the list) disqualify the certificate.
    for (int i = 0; i < n && report.products_matched; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double best = std::numeric_limits<double>::infinity();
            for (double a : A) best = std::min(best, std::abs(G(i, j) - a));
            if (!(best <= cfg.tol_match)) {
                report.products_matched = false;
                report.offending_pair = {i, j};
                std::ostringstream os;
                os << "pair (" << i << "," << j << ") product " << G(i, j)
                   << " matches no element of A within " << cfg.tol_match;
                report.detail = os.str();
                break;
            }
        }
    }

    const double offdiag_cap = 1e-8 * std::abs(target);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double m = 1.0;
            for (double a : A) m *= (G(i, j) - a);
            if (i == j) {
                const double rel = std::abs(target) > 0.0
                                       ? std::abs(m - target) / std::abs(target)
                                       : std::abs(m - target);
                report.max_diag_rel_error = std::max(report.max_diag_rel_error, rel);
            } else {
                report.max_offdiag_residue = std::max(report.max_offdiag_residue, std::abs(m));
            }
        }
    }

    report.passed = report.products_matched &&
                    report.max_offdiag_residue <= offdiag_cap &&
                    report.max_diag_rel_error <= 1e-8;
    if (report.passed && report.detail.empty()) {
        std::ostringstream os;
        os << "M = " << target << " * I certified; |C| = " << n << " <= "
           << report.size_bound.get_str();
        report.detail = os.str();
    }
    return report;
}

long neg_bound(double beta) {
    if (!(beta > 0.0) || !(beta < 1.0)) throw DomainError("neg_bound: beta outside (0,1)");
    return static_cast<long>(std::floor(1.0 / beta + 1.0 + 1e-12));
}

NegSumReport neg_sum_check(const Code& code, const ProjectionConfig& cfg) {
    code.require_unit(cfg.tol_unit);
    NegSumReport report;
    report.n = code.size();
    if (report.n == 0) return report;

    Eigen::VectorXd v = Eigen::VectorXd::Zero(code.dim());
    for (int i = 0; i < report.n; ++i) v += code.rows().row(i);
    report.norm_sq = v.squaredNorm();
    report.ok = report.norm_sq >= -cfg.tol_unit;

    if (report.n >= 2) {
        const GramMatrix G = gram_of(code, cfg);
        double max_off = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < report.n; ++i)
            for (int j = i + 1; j < report.n; ++j) max_off = std::max(max_off, G(i, j));
        const double beta_eff = -max_off;
        report.beta_eff = beta_eff;
        report.proof_rhs = report.n * (1.0 - (report.n - 1) * beta_eff);
        report.negative_regime = beta_eff > 0.0;
        if (report.negative_regime) {
            // beta_eff = 1 (antipodal) caps the code at 1/1 + 1 = 2
            report.size_bound = beta_eff < 1.0 ? neg_bound(beta_eff) : 2;
            report.ok = report.ok && report.n <= *report.size_bound;
        }
    }
    return report;
}

LogValue beta_prime(double beta, int k) {
    if (!(beta > 0.0) || !(beta < 1.0)) throw DomainError("beta_prime: beta outside (0,1)");
    if (k < 1) throw DomainError("beta_prime: k must be >= 1");
    return LogValue::from_log2(std::exp2(static_cast<double>(k)) * std::log2(beta / 2.0));
}

LogValue d_zero(double beta, int k) {
    if (!(beta > 0.0)) throw DomainError("d_zero: beta must be positive");
    if (k < 1) throw DomainError("d_zero: k must be >= 1");
    return LogValue::from_log2(2.0 * k / beta * std::log2(2.0 * k));
}

std::optional<long> ramsey_t(double beta, int k) {
    const LogValue bp = beta_prime(beta, k);
    if (bp.log2() < -60.0) return std::nullopt;
    const double inv = std::exp2(-bp.log2());
    // Relative guard so that exactly integral 1/beta' is not bumped upward.
    return static_cast<long>(std::ceil(inv * (1.0 - 1e-12)));
}

LogValue ramsey_t_log(double beta, int k) {
    if (auto t = ramsey_t(beta, k)) return LogValue::from_value(static_cast<double>(*t));
    return LogValue::from_log2(-beta_prime(beta, k).log2());  // ceiling is negligible here
}

LogValue ramsey_tower(double beta, int k) {
    const LogValue t = ramsey_t_log(beta, k);
    const double exponent = (k + 1) * t.value();
    return LogValue::from_log2(exponent * std::log2(static_cast<double>(k + 1)));
}

namespace {

struct FkEvaluator {
    const FkPolicy& policy;
    std::map<std::pair<int, double>, LogValue> memo;

    LogValue eval(double beta, int k) {
        if (!(beta > 0.0) || !(beta < 1.0)) throw DomainError("f_k: beta outside (0,1)");
        if (k < 0) throw DomainError("f_k: k must be >= 0");
        if (k == 0) return LogValue::from_value(1.0 / beta + 1.0);
        const auto key = std::make_pair(k, beta);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        if (k > 24) throw DomainError("f_k: k > 24 not supported by the evaluator");

        const LogValue small_ak = LogValue::from_value(4.0 / (beta * beta) + 4.0);
        const LogValue tower = ramsey_tower(beta, k);
        const double bprime = beta_prime(beta, k).value();

        LogValue best = LogValue::zero();
        if (policy.small_ak) best = max(best, small_ak);
        if (policy.ramsey_small) best = max(best, tower * small_ak);
        if ((policy.gap || policy.ramsey_gap) && k >= 2) {
            // beta' underflows fast; clamp at the smallest positive double so the
            // recursive threshold stays meaningful (monotone in the true value).
            const double bp = bprime > 0.0 ? bprime : std::numeric_limits<double>::min();
            for (int l = 2; l <= k; ++l) {
                const LogValue recursive = LogValue::from_value(2.0 * k) *
                                           eval(beta, l - 1) * eval(bp, k - l + 1);
                if (policy.gap) best = max(best, recursive);
                if (policy.ramsey_gap) best = max(best, tower * recursive);
            }
        }

        LogValue result = log_add(LogValue::one(), best);
        if (policy.d0_inflation) result = d_zero(beta, k).pow(k) * result;
        memo.emplace(key, result);
        return result;
    }
};

}  // namespace

LogValue f_k(double beta, int k, const FkPolicy& policy) {
    FkEvaluator ev{policy, {}};
    return ev.eval(beta, k);
}

}  // namespace spherecode
