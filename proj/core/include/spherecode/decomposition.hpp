#ifndef SPHERECODE_DECOMPOSITION_HPP
#define SPHERECODE_DECOMPOSITION_HPP

#include <optional>
#include <string>
#include <vector>

#include "spherecode/bounds.hpp"
#include "spherecode/combinatorics.hpp"
#include "spherecode/geometry.hpp"
#include "spherecode/log_value.hpp"
#include "spherecode/types.hpp"

namespace spherecode {

enum class CaseId { base_k0, small_ak, gap_ell, ramsey, size_trivial };

std::string to_string(CaseId id);
CaseId case_id_from_string(const std::string& s);

/// Case selection for k >= 1:
///   SMALL_AK  when a_k < beta^2/2,
///   GAP_ELL   when some l >= 2 has a_{l-1} < a_l^2/2 (the maximum such l),
///   RAMSEY    otherwise (which forces a_1 > 0).
struct CaseChoice {
    CaseId id = CaseId::ramsey;
    int ell = 0;  // set for GAP_ELL
};
CaseChoice classify_case(const AngleSystem& L);

struct SmallAkData {
    int max_degree_g0 = 0;
    double degree_cap = 0.0;         // 2 beta^{-2} + 1
    double proj_product_max = -1.0;  // largest projected pair product over all neighborhoods
    std::vector<int> independent_set;
    KoornwinderReport certificate;
};

struct GapData {
    int ell = 0;
    int pivot = -1;  // vertex y of maximum degree in H (pairs coloured >= ell)
    int color_s = 0;
    int delta_h = 0;
    std::vector<int> neighborhood;      // J: H-neighbours of the pivot
    std::vector<int> projected_set;     // J': the pigeonholed colour class, projected child
    std::vector<int> independent_set;   // S_H: greedy independent set in H, prefix child
    double beta_prime_value = 0.0;
    std::vector<double> formal_angles;  // (a_i - a_s^2)/(1 - a_s^2) for i = ell..k
};

struct RamseyData {
    long t = 0;
    bool t_forced = false;
    LogValue tower;  // (k+1)^{(k+1)t}
    int color_r = -1;
    std::vector<int> T;
    std::vector<int> M;
    std::vector<PivotStep> pivots;
    long m_requested = 0;
    std::vector<double> formal_angles;  // g^{a_r}_t(a_i) for i = 1..k
};

/// One node of the decomposition tree. Children hold the actual sub-codes
/// (original vectors for the GAP_ELL prefix, projected vectors otherwise), so
/// a verifier can recompute every claimed quantity from stored data.
struct CaseRecord {
    CaseId case_id = CaseId::size_trivial;
    Code code;
    AngleSystem system;
    LogValue bound;      // claimed bound on the node's code size
    LogValue threshold;  // f_k threshold expression this node invokes
    std::optional<SmallAkData> small_ak;
    std::optional<GapData> gap;
    std::optional<RamseyData> ramsey;
    std::string note;  // diagnostics (SIZE_TRIVIAL reason, fallback info)
    std::vector<CaseRecord> children;

    CaseRecord(Code c, AngleSystem s) : code(std::move(c)), system(std::move(s)) {}
};

struct DecompositionTrace {
    CaseRecord root;
    LogValue claimed_bound;
    bool verified = false;
};

struct DecomposeOptions {
    /// Test hook: force the Ramsey-case t instead of ceil(1/beta'). The
    /// derived value is astronomical at desk scale, so every untweaked
    /// RAMSEY node collapses to a SIZE_TRIVIAL leaf.
    std::optional<long> ramsey_t_override;
};

/// Result of projecting one colour class through a pivot (the GAP_ELL step).
struct GapProjection {
    std::vector<int> projected_set;                 // J'
    Code code{1, Eigen::MatrixXd(0, 1)};            // p_{x_y}(x_j), j in J'
    AngleSystem system{0.5, {}};  // [-1, -beta'] with surviving projected angles
    std::vector<double> formal_angles;    // all images of a_ell..a_k, kept or not
    std::vector<std::string> violations;  // projected pairs landing outside L'
};

/// Projects every j with x_y . x_j = a_s through x_y and classifies the
/// images against L' = [-1,-beta'] union {a'_ell..a'_k}. s must be >= ell.
GapProjection case_gap_project(const Code& code, const AngleSystem& L, int ell, int pivot,
                               int s, const ProjectionConfig& cfg = {});

/// Result of the Ramsey projection step: either a SIZE_TRIVIAL marker (the
/// hypothesis cannot hold at this size, or the greedy run failed) or the
/// monochromatic pair with the projected sub-code.
struct RamseyProjection {
    bool size_trivial = false;
    std::string reason;
    std::optional<RamseyData> data;
    std::optional<Code> projected;
    std::optional<AngleSystem> system;
};

RamseyProjection case_ramsey_project(const Code& code, const AngleSystem& L,
                                     const ProjectionConfig& cfg = {},
                                     std::optional<long> t_override = std::nullopt);

/// The SMALL_AK leaf: degree check of G_0 through the projection inequality,
/// greedy independent set, Koornwinder certificate of the A-code.
/// Throws Error when an assertion fails on input that validated (tolerance breach).
CaseRecord case_small_ak(const Code& code, const AngleSystem& L,
                         const ProjectionConfig& cfg = {});

/// Full recursive decomposition. The trace records, per node, the applied
/// case, the data needed to re-derive it, and a bound composed from the
/// children; decompose self-verifies before returning.
DecompositionTrace decompose(const Code& code, const AngleSystem& L,
                             const ProjectionConfig& cfg = {},
                             const DecomposeOptions& options = {});

struct NodeReport {
    std::string path;  // "root", "root.0", "root.0.1", ...
    CaseId case_id = CaseId::size_trivial;
    bool ok = true;
    std::vector<std::string> issues;
};

struct VerifyReport {
    bool ok = true;
    std::vector<NodeReport> nodes;
    std::string summary;
    const NodeReport* first_failure() const;
};

/// Independent re-check of a trace: case conditions, projections recomputed
/// from stored vectors, set recomputation, bound composition, and the final
/// bound <= f_k(beta) d^k inequality. Stored intermediates are not trusted.
VerifyReport verify_trace(const DecompositionTrace& trace, const ProjectionConfig& cfg = {});

}  // namespace spherecode

#endif
