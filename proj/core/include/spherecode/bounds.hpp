#ifndef SPHERECODE_BOUNDS_HPP
#define SPHERECODE_BOUNDS_HPP

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "spherecode/geometry.hpp"
#include "spherecode/log_value.hpp"
#include "spherecode/types.hpp"

namespace spherecode {

/// |C| <= binomial(d + k, k) for codes with k admissible products. Exact.
mpz_class dgs_bound(unsigned long d, unsigned long k);

/// Same bound in log space (lgamma-based), for inputs too large to materialize.
LogValue dgs_bound_log(double d, double k);

struct KoornwinderReport {
    bool passed = false;
    bool products_matched = true;            // every pair within tol of some a in A
    std::optional<std::pair<int, int>> offending_pair;
    double max_offdiag_residue = 0.0;        // max |M_ij|, i != j
    double max_diag_rel_error = 0.0;         // max |M_ii - target| / |target|
    double diag_target = 1.0;                // prod_{a in A} (1 - a)
    mpz_class size_bound;                    // binomial(d + |A|, |A|)
    std::string detail;
};

/// Forms M_ij = prod_{a in A} (G_ij - a) and checks M = prod(1-a) * Identity.
/// Success certifies |C| <= dgs_bound(d, |A|). Pairs whose product matches no
/// element of A fail the report (they would also break the diagonal shape).
KoornwinderReport koornwinder_certificate(const Code& code, const std::vector<double>& A,
                                          const ProjectionConfig& cfg = {});

/// |C| <= floor(beta^{-1} + 1) for codes with all products in [-1, -beta].
/// A 1e-12 guard absorbs floating error at exactly representable reciprocals.
long neg_bound(double beta);

struct NegSumReport {
    int n = 0;
    double norm_sq = 0.0;                    // ||sum of vectors||^2
    std::optional<double> beta_eff;          // -max off-diagonal product, if n >= 2
    std::optional<double> proof_rhs;         // n (1 - (n-1) beta_eff)
    bool negative_regime = false;            // all off-diagonals < 0
    std::optional<long> size_bound;          // floor(beta_eff^{-1} + 1) in that regime
    bool ok = true;                          // norm_sq >= 0 and n <= size_bound when applicable
};

/// Diagnostic re-run of the sum-of-vectors argument on a concrete code.
NegSumReport neg_sum_check(const Code& code, const ProjectionConfig& cfg = {});

/// beta' = (beta/2)^(2^k). Returned in log space; .value() materializes
/// (exact for dyadic beta, 0 on underflow).
LogValue beta_prime(double beta, int k);

/// d_0 = (2k)^(2 k / beta); log2 = 2 k beta^{-1} log2(2k).
LogValue d_zero(double beta, int k);

/// t = ceil(1 / beta') as used by the Ramsey case. Integer when it fits;
/// nullopt when beta' is too small for t to be representable.
std::optional<long> ramsey_t(double beta, int k);

/// t as a real magnitude in log space (ceiling folded in when materializable).
LogValue ramsey_t_log(double beta, int k);

/// (k+1)^((k+1) t): the Ramsey shrink factor, never materialized.
LogValue ramsey_tower(double beta, int k);

/// Threshold selection for the f_k evaluator. The four case thresholds are
/// all enabled by default; d0_inflation multiplies the result by d_0^k so a
/// single constant covers dimensions below d_0 as well.
struct FkPolicy {
    bool small_ak = true;        // 4 beta^{-2} + 4
    bool gap = true;             // 2 k f_{l-1}(beta) f_{k-l+1}(beta')
    bool ramsey_small = true;    // (k+1)^{(k+1)t} (4 beta^{-2} + 4)
    bool ramsey_gap = true;      // (k+1)^{(k+1)t} 2 k f_{l-1}(beta) f_{k-l+1}(beta')
    bool d0_inflation = true;
};

/// Instance-independent f_k(beta):
///   f_0 = beta^{-1} + 1,
///   f_k = d_0^k * (1 + max over enabled thresholds), maximizing over l in 2..k
/// inside the recursive thresholds. Any value above the maximum satisfies the
/// strict inequalities the proof requires; "+1" is the slack chosen here.
LogValue f_k(double beta, int k, const FkPolicy& policy = {});

}  // namespace spherecode

#endif
