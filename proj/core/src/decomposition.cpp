#include "spherecode/decomposition.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <sstream>

namespace spherecode {

std::string to_string(CaseId id) {
    switch (id) {
        case CaseId::base_k0: return "BASE_K0";
        case CaseId::small_ak: return "SMALL_AK";
        case CaseId::gap_ell: return "GAP_ELL";
        case CaseId::ramsey: return "RAMSEY";
        case CaseId::size_trivial: return "SIZE_TRIVIAL";
    }
    return "UNKNOWN";
}

CaseId case_id_from_string(const std::string& s) {
    if (s == "BASE_K0") return CaseId::base_k0;
    if (s == "SMALL_AK") return CaseId::small_ak;
    if (s == "GAP_ELL") return CaseId::gap_ell;
    if (s == "RAMSEY") return CaseId::ramsey;
    if (s == "SIZE_TRIVIAL") return CaseId::size_trivial;
    throw Error("unknown case id: " + s);
}

CaseChoice classify_case(const AngleSystem& L) {
    const auto& a = L.angles();
    const int k = L.k();
    if (k < 1) throw Error("classify_case: requires k >= 1");
    const double beta = L.beta();
    if (a[k - 1] < beta * beta / 2.0) return {CaseId::small_ak, 0};
    for (int ell = k; ell >= 2; --ell) {
        if (a[ell - 2] < a[ell - 1] * a[ell - 1] / 2.0) return {CaseId::gap_ell, ell};
    }
    return {CaseId::ramsey, 0};
}

namespace {

LogValue log_of_mpz(const mpz_class& v) {
    if (v == 0) return LogValue::zero();
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
    return LogValue::from_log2(std::log2(mant) + static_cast<double>(exp));
}

double beta_prime_clamped(double beta, int k) {
    // The exact value may underflow for deep k; the interval with a smaller
    // beta' is a superset, so clamping up to the smallest normal double only
    // moves the cut far below every representable product.
    const double bp = beta_prime(beta, k).value();
    return bp > DBL_MIN ? bp : DBL_MIN;
}

std::vector<int> g0_neighbors(const Graph& g0, int y) {
    std::vector<int> out;
    for (int j = 0; j < g0.size(); ++j)
        if (j != y && g0.adjacent(y, j)) out.push_back(j);
    return out;
}

}  // namespace

CaseRecord case_small_ak(const Code& code, const AngleSystem& L, const ProjectionConfig& cfg) {
    const double beta = L.beta();
    const int k = L.k();
    const CaseChoice choice = classify_case(L);
    if (choice.id != CaseId::small_ak)
        throw Error("case_small_ak: a_k < beta^2/2 does not hold");

    const EdgeColoring coloring = color_graph(code, L, cfg);
    const Graph g0 = coloring.color_class(0);

    SmallAkData data;
    data.max_degree_g0 = max_degree(g0);
    data.degree_cap = 2.0 / (beta * beta) + 1.0;
    if (static_cast<double>(data.max_degree_g0) > data.degree_cap) {
        std::ostringstream os;
        os << "case_small_ak: G_0 degree " << data.max_degree_g0 << " exceeds 2/beta^2+1 = "
           << data.degree_cap << " on validated input";
        throw Error(os.str());
    }

    // Degree certificate: each interval neighbourhood, projected through its
    // centre, must again be an interval code at the level beta^2/2.
    const double cap = -beta * beta / 2.0;
    for (int y = 0; y < code.size(); ++y) {
        const std::vector<int> J = g0_neighbors(g0, y);
        if (J.size() < 2) continue;
        const Eigen::VectorXd xy = code.vector(y);
        std::vector<Eigen::VectorXd> projected;
        projected.reserve(J.size());
        for (int j : J) projected.push_back(project_normalized(code.vector(j), xy, cfg));
        for (std::size_t p = 0; p < J.size(); ++p) {
            for (std::size_t q = p + 1; q < J.size(); ++q) {
                const double prod = projected[p].dot(projected[q]);
                data.proj_product_max = std::max(data.proj_product_max, prod);
                if (!(prod < cap + cfg.tol_match)) {
                    std::ostringstream os;
                    os << "case_small_ak: projected product " << prod << " of pair ("
                       << J[p] << "," << J[q] << ") around " << y
                       << " not below -beta^2/2 = " << cap;
                    throw Error(os.str());
                }
            }
        }
    }

    data.independent_set = greedy_independent(g0);
    const Code sub = code.subset(data.independent_set);
    data.certificate = koornwinder_certificate(sub, L.angles(), cfg);
    if (!data.certificate.passed)
        throw Error("case_small_ak: Koornwinder certificate failed on the independent set: " +
                    data.certificate.detail);
    if (mpz_class(static_cast<long>(data.independent_set.size())) > data.certificate.size_bound)
        throw Error("case_small_ak: independent set exceeds the certified bound");

    CaseRecord record(code, L);
    record.case_id = CaseId::small_ak;
    record.small_ak = std::move(data);
    const mpz_class dgs = dgs_bound(static_cast<unsigned long>(code.dim()),
                                    static_cast<unsigned long>(k));
    const mpz_class bound_int = (record.small_ak->max_degree_g0 + 1) * dgs;
    if (mpz_class(code.size()) > bound_int)
        throw Error("case_small_ak: code size exceeds (max_degree+1) * dgs_bound");
    record.bound = log_of_mpz(bound_int);
    record.threshold = LogValue::from_value(4.0 / (beta * beta) + 4.0);
    return record;
}

GapProjection case_gap_project(const Code& code, const AngleSystem& L, int ell, int pivot,
                               int s, const ProjectionConfig& cfg) {
    const int k = L.k();
    if (ell < 2 || ell > k) throw Error("case_gap_project: ell out of range");
    if (s < ell || s > k) throw Error("case_gap_project: need ell <= s <= k");
    if (pivot < 0 || pivot >= code.size()) throw Error("case_gap_project: bad pivot");

    const double beta = L.beta();
    const double a_s = L.angles()[s - 1];
    const double a_ell = L.angles()[ell - 1];
    const double bprime = beta_prime_clamped(beta, k);
    const GramMatrix G = gram_of(code, cfg);

    GapProjection out;
    for (int j = 0; j < code.size(); ++j) {
        if (j == pivot) continue;
        if (std::abs(G(pivot, j) - a_s) <= cfg.tol_match) out.projected_set.push_back(j);
    }

    const double denom = 1.0 - a_s * a_s;
    for (int i = ell - 1; i < k; ++i)
        out.formal_angles.push_back((L.angles()[i] - a_s * a_s) / denom);
    out.system = AngleSystem::with_interval_absorbed(bprime, out.formal_angles);

    const Eigen::VectorXd xy = code.vector(pivot);
    Eigen::MatrixXd rows(static_cast<int>(out.projected_set.size()), code.dim());
    for (std::size_t r = 0; r < out.projected_set.size(); ++r)
        rows.row(static_cast<int>(r)) =
            project_normalized(code.vector(out.projected_set[r]), xy, cfg);
    out.code = Code(code.dim(), std::move(rows));

    // Projected placement: each image must land in L', and pairs coloured
    // below ell in the parent must fall strictly under -a_ell^2/2.
    const ValidationReport placement = validate_code(out.code, out.system, cfg);
    if (!placement.valid) {
        for (const PairClass& pc : placement.pairs) {
            if (pc.kind == PairKind::interval || pc.kind == PairKind::angle) continue;
            std::ostringstream os;
            os << "projected pair (" << out.projected_set[pc.i] << ","
               << out.projected_set[pc.j] << ") product " << pc.product << " outside L'";
            out.violations.push_back(os.str());
        }
    }
    for (std::size_t p = 0; p < out.projected_set.size(); ++p) {
        for (std::size_t q = p + 1; q < out.projected_set.size(); ++q) {
            const double parent = G(out.projected_set[p], out.projected_set[q]);
            const PairClass pc = classify_product(parent, L, cfg);
            if (pc.color >= 0 && pc.color < ell) {
                const double projected =
                    out.code.rows().row(static_cast<int>(p)).dot(
                        out.code.rows().row(static_cast<int>(q)));
                if (!(projected < -a_ell * a_ell / 2.0 + cfg.tol_match)) {
                    std::ostringstream os;
                    os << "low-colour pair (" << out.projected_set[p] << ","
                       << out.projected_set[q] << ") projects to " << projected
                       << ", not below -a_ell^2/2";
                    out.violations.push_back(os.str());
                }
            }
        }
    }
    return out;
}

RamseyProjection case_ramsey_project(const Code& code, const AngleSystem& L,
                                     const ProjectionConfig& cfg,
                                     std::optional<long> t_override) {
    const int k = L.k();
    const double beta = L.beta();
    const CaseChoice choice = classify_case(L);
    if (choice.id != CaseId::ramsey)
        throw Error("case_ramsey_project: angle system is not in the Ramsey case");
    if (!(L.angles()[0] > 0.0))
        throw Error("case_ramsey_project: a_1 > 0 must hold in the Ramsey case");

    const long n = code.size();
    RamseyProjection out;

    std::optional<long> t = t_override;
    if (t_override) {
        if (*t_override < 1) throw Error("case_ramsey_project: forced t must be >= 1");
    } else {
        t = ramsey_t(beta, k);
    }
    if (!t) {
        std::ostringstream os;
        os << "t = ceil(1/beta') with beta' = (beta/2)^(2^k) exceeds 2^60; "
           << "Ramsey hypothesis unreachable at n = " << n;
        out.size_trivial = true;
        out.reason = os.str();
        return out;
    }

    // Hypothesis gate: n must clear (k+1)^{(k+1)t} + (k+1)t before the greedy
    // run can be guaranteed a non-empty monochromatic pair. The tower is only
    // materialized when it fits comfortably below any representable n.
    const double log2_tower =
        static_cast<double>(k + 1) * static_cast<double>(*t) * std::log2(k + 1.0);
    if (log2_tower > 62.0) {
        std::ostringstream os;
        os << "(k+1)^((k+1)t) with t = " << *t << " dwarfs n = " << n
           << "; size is already below the certified threshold";
        out.size_trivial = true;
        out.reason = os.str();
        return out;
    }
    mpz_class tower_int;
    mpz_ui_pow_ui(tower_int.get_mpz_t(), static_cast<unsigned long>(k + 1),
                  static_cast<unsigned long>((k + 1) * *t));
    const mpz_class gate = tower_int + mpz_class(static_cast<long>(k + 1) * *t);
    if (mpz_class(n) <= gate) {
        std::ostringstream os;
        os << "n = " << n << " <= (k+1)^((k+1)t) + (k+1)t with t = " << *t
           << "; size is already below the certified threshold";
        out.size_trivial = true;
        out.reason = os.str();
        return out;
    }

    // m = ceil((n - (Q-1)/k) / Q): the size the pivot chain provably sustains.
    const mpz_class numerator = mpz_class(n) * k - tower_int + 1;
    const mpz_class denominator = tower_int * k;
    mpz_class m_mpz = (numerator + denominator - 1) / denominator;
    if (m_mpz < 1) m_mpz = 1;
    const long m = static_cast<long>(m_mpz.get_si());

    const EdgeColoring coloring = color_graph(code, L, cfg);
    const RamseyResult rr = ramsey_pair(view_of(coloring), k + 1, static_cast<int>(*t), m,
                                        /*force=*/true);
    if (!rr.ok()) {
        std::ostringstream os;
        os << "ramsey_pair failed at step " << rr.fail_step << ": " << rr.message;
        out.size_trivial = true;
        out.reason = os.str();
        return out;
    }
    const MonoPair& pair = *rr.pair;
    if (pair.color == 0) {
        if (!t_override)
            throw Error("case_ramsey_project: monochromatic colour 0, impossible for "
                        "t > beta^{-1}+1 on a validated code");
        out.size_trivial = true;
        out.reason = "forced t produced a colour-0 pair; projection hypothesis unavailable";
        return out;
    }

    RamseyData data;
    data.t = *t;
    data.t_forced = t_override.has_value();
    data.tower = log_of_mpz(tower_int);
    data.color_r = pair.color;
    data.T = pair.X;
    data.M = pair.Y;
    data.pivots = pair.log;
    data.m_requested = m;

    const double a_r = L.angles()[pair.color - 1];
    for (double a : L.angles()) data.formal_angles.push_back(g_closed_form(a, a_r, *t));

    std::vector<Eigen::VectorXd> basis;
    basis.reserve(data.T.size());
    for (int i : data.T) basis.push_back(code.vector(i));
    Eigen::MatrixXd rows(static_cast<int>(data.M.size()), code.dim());
    for (std::size_t r = 0; r < data.M.size(); ++r)
        rows.row(static_cast<int>(r)) =
            project_complement(code.vector(data.M[r]), basis, cfg);

    out.projected = Code(code.dim(), std::move(rows));
    out.system = AngleSystem::with_interval_absorbed(beta, data.formal_angles);
    out.data = std::move(data);
    return out;
}

namespace {

struct Builder {
    const ProjectionConfig& cfg;
    const DecomposeOptions& options;

    CaseRecord build(const Code& code, const AngleSystem& L) {
        const int n = code.size();
        if (n == 0) {
            CaseRecord record(code, L);
            record.case_id = CaseId::size_trivial;
            record.bound = LogValue::zero();
            record.threshold = LogValue::zero();
            record.note = "empty code";
            return record;
        }

        const ValidationReport validation = validate_code(code, L, cfg);
        if (!validation.valid) {
            const auto& off = *validation.first_offender;
            std::ostringstream os;
            os << "decompose: pair (" << off.i << "," << off.j << ") with product "
               << off.product << " does not classify against L";
            throw Error(os.str());
        }

        if (L.k() == 0) return build_base(code, L);
        const CaseChoice choice = classify_case(L);
        switch (choice.id) {
            case CaseId::small_ak: return case_small_ak(code, L, cfg);
            case CaseId::gap_ell: return build_gap(code, L, choice.ell);
            default: return build_ramsey(code, L);
        }
    }

    CaseRecord build_base(const Code& code, const AngleSystem& L) {
        CaseRecord record(code, L);
        record.case_id = CaseId::base_k0;
        const long bound = neg_bound(L.beta());
        if (code.size() > bound) {
            std::ostringstream os;
            os << "decompose: interval code of size " << code.size()
               << " exceeds neg_bound = " << bound << " (tolerance breach)";
            throw Error(os.str());
        }
        record.bound = LogValue::from_value(static_cast<double>(bound));
        record.threshold = LogValue::from_value(1.0 / L.beta() + 1.0);
        return record;
    }

    CaseRecord build_gap(const Code& code, const AngleSystem& L, int ell) {
        const int k = L.k();
        const double beta = L.beta();
        CaseRecord record(code, L);
        record.case_id = CaseId::gap_ell;

        const EdgeColoring coloring = color_graph(code, L, cfg);
        const Graph h = coloring.color_at_least(ell);

        GapData data;
        data.ell = ell;
        data.delta_h = max_degree(h);
        data.beta_prime_value = beta_prime_clamped(beta, k);
        for (int v = 0; v < h.size(); ++v) {
            if (h.degree(v) == data.delta_h) {
                data.pivot = v;
                break;
            }
        }
        data.independent_set = greedy_independent(h);

        // Turan on H: n <= (delta_h + 1) |S_H| must hold for the greedy set.
        if (static_cast<long>(code.size()) >
            static_cast<long>(data.delta_h + 1) *
                static_cast<long>(data.independent_set.size()))
            throw Error("decompose: greedy independent set smaller than the Turan guarantee");

        const std::vector<double> prefix_angles(L.angles().begin(),
                                                L.angles().begin() + (ell - 1));
        const AngleSystem prefix_system(beta, prefix_angles);
        const Code prefix_code = code.subset(data.independent_set);

        LogValue suffix_bound = LogValue::zero();
        std::optional<CaseRecord> suffix_child;
        if (data.delta_h >= 1) {
            data.neighborhood = g0_neighbors(h, data.pivot);
            // Pigeonhole: smallest colour s >= ell whose class covers |J|/k.
            const long j_size = static_cast<long>(data.neighborhood.size());
            int s = -1;
            for (int c = ell; c <= k && s < 0; ++c) {
                long count = 0;
                for (int j : data.neighborhood)
                    if (coloring.color(data.pivot, j) == c) ++count;
                if (count * static_cast<long>(k) >= j_size) s = c;
            }
            if (s < 0) throw Error("decompose: pigeonhole found no colour class of size |J|/k");
            data.color_s = s;

            GapProjection projection = case_gap_project(code, L, ell, data.pivot, s, cfg);
            data.projected_set = projection.projected_set;
            data.formal_angles = projection.formal_angles;
            if (!projection.violations.empty()) {
                std::ostringstream os;
                os << "decompose: gap projection invalidated: " << projection.violations.front();
                throw Error(os.str());
            }
            if (static_cast<long>(data.delta_h) >
                static_cast<long>(k) * static_cast<long>(data.projected_set.size()))
                throw Error("decompose: pigeonhole class below delta_h / k");

            suffix_child = build(projection.code, projection.system);
            suffix_bound = suffix_child->bound;
        } else {
            data.formal_angles.clear();
        }

        CaseRecord prefix_child = build(prefix_code, prefix_system);
        const LogValue prefix_bound = prefix_child.bound;

        // n <= (delta_h + 1) |S_H| <= (k B_suffix + 1) B_prefix
        record.bound =
            log_add(LogValue::from_value(static_cast<double>(k)) * suffix_bound,
                    LogValue::one()) *
            prefix_bound;
        record.threshold = LogValue::from_value(2.0 * k) * f_k(beta, ell - 1) *
                           f_k(data.beta_prime_value, k - ell + 1);
        record.gap = std::move(data);
        record.children.push_back(std::move(prefix_child));
        if (suffix_child) record.children.push_back(std::move(*suffix_child));
        return record;
    }

    CaseRecord build_ramsey(const Code& code, const AngleSystem& L) {
        const int k = L.k();
        CaseRecord record(code, L);
        RamseyProjection projection =
            case_ramsey_project(code, L, cfg, options.ramsey_t_override);
        if (projection.size_trivial) {
            record.case_id = CaseId::size_trivial;
            record.bound = LogValue::from_value(static_cast<double>(code.size()));
            record.threshold = record.bound;
            record.note = projection.reason;
            return record;
        }

        record.case_id = CaseId::ramsey;
        CaseRecord child = build(*projection.projected, *projection.system);

        const LogValue tower = projection.data->tower;
        const double spill = (tower.value() - 1.0) / static_cast<double>(k);
        record.bound = log_add(tower * child.bound, LogValue::from_value(spill));
        record.threshold = tower * child.threshold;
        record.ramsey = std::move(projection.data);
        record.children.push_back(std::move(child));
        return record;
    }
};

}  // namespace

DecompositionTrace decompose(const Code& code, const AngleSystem& L,
                             const ProjectionConfig& cfg, const DecomposeOptions& options) {
    Builder builder{cfg, options};
    CaseRecord root = builder.build(code, L);
    DecompositionTrace trace{std::move(root), LogValue::zero(), false};
    trace.claimed_bound = trace.root.bound;
    trace.verified = verify_trace(trace, cfg).ok;
    return trace;
}

// ---------------------------------------------------------------------------
// verification

namespace {

struct Verifier {
    const ProjectionConfig& cfg;
    VerifyReport& report;

    static bool log_close(const LogValue& a, const LogValue& b) {
        if (a.log2() == b.log2()) return true;  // covers both-zero and both-saturated
        if (a.is_zero() || b.is_zero()) return false;
        const double scale = std::max({1.0, std::abs(a.log2()), std::abs(b.log2())});
        return std::abs(a.log2() - b.log2()) <= 1e-9 * scale;
    }

    static bool same_system(const AngleSystem& a, const AngleSystem& b) {
        if (a.k() != b.k() || std::abs(a.beta() - b.beta()) > 1e-15) return false;
        for (int i = 0; i < a.k(); ++i)
            if (std::abs(a.angles()[i] - b.angles()[i]) > 1e-12) return false;
        return true;
    }

    NodeReport& open(const std::string& path, CaseId id) {
        report.nodes.push_back(NodeReport{path, id, true, {}});
        return report.nodes.back();
    }

    void issue(NodeReport& node, const std::string& msg) {
        node.ok = false;
        report.ok = false;
        node.issues.push_back(msg);
    }

    void verify_node(const CaseRecord& rec, const std::string& path) {
        {
            // check_node must finish before recursion: children reallocate
            // report.nodes and would invalidate this reference.
            NodeReport& node = open(path, rec.case_id);
            try {
                check_node(rec, node);
            } catch (const std::exception& e) {
                issue(node, std::string("exception while checking: ") + e.what());
            }
        }
        for (std::size_t c = 0; c < rec.children.size(); ++c) {
            std::ostringstream os;
            os << path << "." << c;
            verify_node(rec.children[c], os.str());
        }
    }

    void check_node(const CaseRecord& rec, NodeReport& node) {
        const Code& code = rec.code;
        const AngleSystem& L = rec.system;
        const int n = code.size();
        const int k = L.k();
        const double beta = L.beta();

        code.require_unit(cfg.tol_unit);
        if (n > 0) {
            const ValidationReport validation = validate_code(code, L, cfg);
            if (!validation.valid)
                issue(node, "stored code does not validate against its angle system");
        }

        // payloads present iff the case calls for them
        if (rec.small_ak.has_value() != (rec.case_id == CaseId::small_ak))
            issue(node, "SMALL_AK payload presence does not match the case id");
        if (rec.gap.has_value() != (rec.case_id == CaseId::gap_ell))
            issue(node, "GAP_ELL payload presence does not match the case id");
        if (rec.ramsey.has_value() != (rec.case_id == CaseId::ramsey))
            issue(node, "RAMSEY payload presence does not match the case id");

        // the claimed bound must cover the node's own code
        if (n > 0 &&
            LogValue::from_value(static_cast<double>(n)).log2() > rec.bound.log2() + 1e-9)
            issue(node, "node bound does not cover its code size");

        switch (rec.case_id) {
            case CaseId::size_trivial: {
                if (n == 0) {
                    if (!rec.bound.is_zero()) issue(node, "empty code must carry bound 0");
                    break;
                }
                if (k >= 1 && classify_case(L).id != CaseId::ramsey)
                    issue(node, "SIZE_TRIVIAL leaf outside the Ramsey case");
                if (!log_close(rec.bound, LogValue::from_value(static_cast<double>(n))))
                    issue(node, "SIZE_TRIVIAL bound must equal n");
                if (!rec.children.empty()) issue(node, "leaf with children");
                break;
            }
            case CaseId::base_k0: {
                if (k != 0) issue(node, "BASE_K0 with non-empty angle list");
                const long bound = neg_bound(beta);
                if (n > bound) issue(node, "code exceeds neg_bound");
                if (!log_close(rec.bound, LogValue::from_value(static_cast<double>(bound))))
                    issue(node, "BASE_K0 bound differs from neg_bound");
                if (!rec.children.empty()) issue(node, "leaf with children");
                break;
            }
            case CaseId::small_ak: check_small_ak(rec, node); break;
            case CaseId::gap_ell: check_gap(rec, node); break;
            case CaseId::ramsey: check_ramsey(rec, node); break;
        }
    }

    void check_small_ak(const CaseRecord& rec, NodeReport& node) {
        const Code& code = rec.code;
        const AngleSystem& L = rec.system;
        const double beta = L.beta();
        if (L.k() < 1 || classify_case(L).id != CaseId::small_ak) {
            issue(node, "SMALL_AK case condition a_k < beta^2/2 fails");
            return;
        }
        if (!rec.small_ak) {
            issue(node, "missing SMALL_AK payload");
            return;
        }
        const SmallAkData& data = *rec.small_ak;
        const EdgeColoring coloring = color_graph(code, L, cfg);
        const Graph g0 = coloring.color_class(0);
        const int delta = max_degree(g0);
        if (delta != data.max_degree_g0) issue(node, "stored G_0 max degree is wrong");
        if (static_cast<double>(delta) > 2.0 / (beta * beta) + 1.0)
            issue(node, "G_0 max degree above 2/beta^2+1");

        const double cap = -beta * beta / 2.0;
        for (int y = 0; y < code.size(); ++y) {
            const std::vector<int> J = g0_neighbors(g0, y);
            if (J.size() < 2) continue;
            std::vector<Eigen::VectorXd> projected;
            for (int j : J)
                projected.push_back(project_normalized(code.vector(j), code.vector(y), cfg));
            for (std::size_t p = 0; p < J.size(); ++p)
                for (std::size_t q = p + 1; q < J.size(); ++q)
                    if (!(projected[p].dot(projected[q]) < cap + cfg.tol_match)) {
                        issue(node, "projected neighbourhood product not below -beta^2/2");
                        break;
                    }
        }

        if (greedy_independent(g0) != data.independent_set)
            issue(node, "independent set is not the greedy set of G_0");
        for (std::size_t p = 0; p < data.independent_set.size(); ++p)
            for (std::size_t q = p + 1; q < data.independent_set.size(); ++q)
                if (g0.adjacent(data.independent_set[p], data.independent_set[q]))
                    issue(node, "stored set is not independent in G_0");

        const KoornwinderReport cert =
            koornwinder_certificate(code.subset(data.independent_set), L.angles(), cfg);
        if (!cert.passed) issue(node, "Koornwinder certificate fails on re-run");

        const mpz_class dgs = dgs_bound(static_cast<unsigned long>(code.dim()),
                                        static_cast<unsigned long>(L.k()));
        if (mpz_class(static_cast<long>(data.independent_set.size())) > dgs)
            issue(node, "independent set exceeds dgs_bound");
        const mpz_class bound_int = (delta + 1) * dgs;
        if (mpz_class(code.size()) > bound_int) issue(node, "n exceeds (delta+1) * dgs_bound");
        if (!log_close(rec.bound, log_of_mpz(bound_int)))
            issue(node, "SMALL_AK bound differs from (delta+1) * dgs_bound");
        if (!log_close(rec.threshold, LogValue::from_value(4.0 / (beta * beta) + 4.0)))
            issue(node, "SMALL_AK threshold differs from 4/beta^2+4");
        if (!rec.children.empty()) issue(node, "leaf with children");
    }

    void check_gap(const CaseRecord& rec, NodeReport& node) {
        const Code& code = rec.code;
        const AngleSystem& L = rec.system;
        const int k = L.k();
        const double beta = L.beta();
        const CaseChoice choice = k >= 1 ? classify_case(L) : CaseChoice{CaseId::base_k0, 0};
        if (choice.id != CaseId::gap_ell) {
            issue(node, "GAP_ELL case condition fails");
            return;
        }
        if (!rec.gap) {
            issue(node, "missing GAP_ELL payload");
            return;
        }
        const GapData& data = *rec.gap;
        if (data.ell != choice.ell) issue(node, "stored ell is not the maximal gap index");

        const double a_ell = L.angles()[choice.ell - 1];
        const double bprime = beta_prime_clamped(beta, k);
        if (std::abs(data.beta_prime_value - bprime) > 1e-12 * std::max(1.0, bprime))
            issue(node, "stored beta' differs from (beta/2)^(2^k)");
        if (!(a_ell * a_ell / 2.0 >= bprime - cfg.tol_match))
            issue(node, "cascade inequality a_ell^2/2 >= beta' fails");

        const EdgeColoring coloring = color_graph(code, L, cfg);
        const Graph h = coloring.color_at_least(data.ell);
        const int delta = max_degree(h);
        if (delta != data.delta_h) issue(node, "stored delta_h is wrong");
        int expected_pivot = -1;
        for (int v = 0; v < h.size() && expected_pivot < 0; ++v)
            if (h.degree(v) == delta) expected_pivot = v;
        if (data.pivot != expected_pivot) issue(node, "pivot is not the first max-degree vertex");

        const std::vector<int> s_h = greedy_independent(h);
        if (s_h != data.independent_set) issue(node, "S_H is not the greedy set of H");
        if (static_cast<long>(code.size()) >
            static_cast<long>(delta + 1) * static_cast<long>(s_h.size()))
            issue(node, "Turan inequality n <= (delta_h+1)|S_H| fails");

        if (rec.children.empty()) {
            issue(node, "GAP_ELL node without children");
            return;
        }

        // prefix child: original vectors on S_H against the truncated system
        const CaseRecord& prefix = rec.children.front();
        const Code expected_prefix = code.subset(data.independent_set);
        if (prefix.code.size() != expected_prefix.size() ||
            (prefix.code.size() > 0 &&
             (prefix.code.rows() - expected_prefix.rows()).cwiseAbs().maxCoeff() >
                 cfg.tol_unit))
            issue(node, "prefix child vectors are not the S_H originals");
        const AngleSystem expected_prefix_system(
            beta, std::vector<double>(L.angles().begin(), L.angles().begin() + data.ell - 1));
        if (!same_system(prefix.system, expected_prefix_system))
            issue(node, "prefix child system is not (beta, a_1..a_{ell-1})");

        LogValue suffix_bound = LogValue::zero();
        if (delta >= 1) {
            if (rec.children.size() != 2) {
                issue(node, "GAP_ELL with positive delta_h needs prefix and suffix children");
                return;
            }
            const CaseRecord& suffix = rec.children[1];
            check_gap_suffix(rec, suffix, node);
            suffix_bound = suffix.bound;
        } else if (rec.children.size() != 1) {
            issue(node, "GAP_ELL with empty H must have exactly the prefix child");
        }

        const LogValue expected_bound =
            log_add(LogValue::from_value(static_cast<double>(k)) * suffix_bound,
                    LogValue::one()) *
            prefix.bound;
        if (!log_close(rec.bound, expected_bound))
            issue(node, "GAP_ELL bound is not (k B_suffix + 1) B_prefix");
        const LogValue expected_threshold =
            LogValue::from_value(2.0 * k) * f_k(beta, data.ell - 1) *
            f_k(data.beta_prime_value, k - data.ell + 1);
        if (!log_close(rec.threshold, expected_threshold))
            issue(node, "GAP_ELL threshold differs from 2k f_{l-1}(beta) f_{k-l+1}(beta')");
    }

    void check_gap_suffix(const CaseRecord& rec, const CaseRecord& suffix, NodeReport& node) {
        const Code& code = rec.code;
        const AngleSystem& L = rec.system;
        const GapData& data = *rec.gap;
        const int k = L.k();
        const GramMatrix G = gram_of(code, cfg);

        // pigeonhole class: smallest qualifying colour, then its members
        const EdgeColoring coloring = color_graph(code, L, cfg);
        const std::vector<int> J = g0_neighbors(coloring.color_at_least(data.ell), data.pivot);
        if (J != data.neighborhood) issue(node, "stored J is not the pivot's H-neighbourhood");
        int s = -1;
        for (int c = data.ell; c <= k && s < 0; ++c) {
            long count = 0;
            for (int j : J)
                if (coloring.color(data.pivot, j) == c) ++count;
            if (count * static_cast<long>(k) >= static_cast<long>(J.size())) s = c;
        }
        if (s != data.color_s) issue(node, "stored colour s is not the smallest qualifying one");
        std::vector<int> expected_jprime;
        for (int j : J)
            if (coloring.color(data.pivot, j) == data.color_s) expected_jprime.push_back(j);
        if (expected_jprime != data.projected_set)
            issue(node, "stored J' is not the colour-s class");
        if (static_cast<long>(data.delta_h) >
            static_cast<long>(k) * static_cast<long>(expected_jprime.size()))
            issue(node, "pigeonhole inequality delta_h <= k |J'| fails");

        const double a_s = L.angles()[data.color_s - 1];
        const double denom = 1.0 - a_s * a_s;
        for (int i = 0; i <= k - data.ell; ++i) {
            const double expected = (L.angles()[data.ell - 1 + i] - a_s * a_s) / denom;
            if (i >= static_cast<int>(data.formal_angles.size()) ||
                std::abs(data.formal_angles[i] - expected) > 1e-12)
                issue(node, "formal projected angle differs from (a_i - a_s^2)/(1 - a_s^2)");
        }
        for (std::size_t i = 1; i < data.formal_angles.size(); ++i)
            if (!(data.formal_angles[i - 1] < data.formal_angles[i]))
                issue(node, "projected angle list not strictly increasing");

        // child vectors and products recomputed from the parent
        if (suffix.code.size() != static_cast<int>(data.projected_set.size())) {
            issue(node, "suffix child size differs from |J'|");
            return;
        }
        for (std::size_t r = 0; r < data.projected_set.size(); ++r) {
            const Eigen::VectorXd expected = project_normalized(
                code.vector(data.projected_set[r]), code.vector(data.pivot), cfg);
            if ((suffix.code.vector(static_cast<int>(r)) - expected).cwiseAbs().maxCoeff() >
                10 * cfg.tol_unit)
                issue(node, "suffix child vector differs from the recomputed projection");
        }
        for (std::size_t p = 0; p < data.projected_set.size(); ++p) {
            for (std::size_t q = p + 1; q < data.projected_set.size(); ++q) {
                const double parent = G(data.projected_set[p], data.projected_set[q]);
                const double expected = (parent - a_s * a_s) / denom;
                const double actual = suffix.code.rows()
                                          .row(static_cast<int>(p))
                                          .dot(suffix.code.rows().row(static_cast<int>(q)));
                if (std::abs(actual - expected) > 1e-9)
                    issue(node, "projected product differs from the projection formula");
            }
        }
        const AngleSystem expected_system =
            AngleSystem::with_interval_absorbed(data.beta_prime_value, data.formal_angles);
        if (!same_system(suffix.system, expected_system))
            issue(node, "suffix child system differs from [-1,-beta'] with projected angles");
    }

    void check_ramsey(const CaseRecord& rec, NodeReport& node) {
        const Code& code = rec.code;
        const AngleSystem& L = rec.system;
        const int k = L.k();
        const double beta = L.beta();
        if (k < 1 || classify_case(L).id != CaseId::ramsey) {
            issue(node, "RAMSEY case condition fails");
            return;
        }
        if (!(L.angles()[0] > 0.0)) issue(node, "a_1 > 0 fails in the Ramsey case");
        if (!rec.ramsey) {
            issue(node, "missing RAMSEY payload");
            return;
        }
        const RamseyData& data = *rec.ramsey;
        if (!data.t_forced) {
            const auto t = ramsey_t(beta, k);
            if (!t || *t != data.t) issue(node, "stored t differs from ceil(1/beta')");
        }
        if (data.t < 1 ||
            static_cast<double>(k + 1) * static_cast<double>(data.t) * std::log2(k + 1.0) >
                62.0) {
            issue(node, "stored t is outside the range a materialized RAMSEY node allows");
            return;
        }
        mpz_class tower_int;
        mpz_ui_pow_ui(tower_int.get_mpz_t(), static_cast<unsigned long>(k + 1),
                      static_cast<unsigned long>((k + 1) * data.t));
        if (!log_close(data.tower, log_of_mpz(tower_int)))
            issue(node, "stored tower differs from (k+1)^((k+1)t)");
        if (mpz_class(code.size()) <= tower_int + mpz_class(static_cast<long>(k + 1) * data.t))
            issue(node, "n is below the hypothesis gate; node should be SIZE_TRIVIAL");

        const mpz_class numerator = mpz_class(code.size()) * k - tower_int + 1;
        const mpz_class denominator = tower_int * k;
        mpz_class m_mpz = (numerator + denominator - 1) / denominator;
        if (m_mpz < 1) m_mpz = 1;
        if (m_mpz != data.m_requested) issue(node, "stored m differs from the chain guarantee");

        const EdgeColoring coloring = color_graph(code, L, cfg);
        const RamseyResult rr = ramsey_pair(view_of(coloring), k + 1,
                                            static_cast<int>(data.t), data.m_requested, true);
        if (!rr.ok()) {
            issue(node, "ramsey_pair fails on re-run: " + rr.message);
            return;
        }
        if (rr.pair->X != data.T || rr.pair->Y != data.M || rr.pair->color != data.color_r)
            issue(node, "re-run monochromatic pair differs from the stored one");
        if (data.color_r < 1) issue(node, "colour r must be positive");
        std::string why;
        if (!check_mono_pair(view_of(coloring), *rr.pair, &why))
            issue(node, "MonoPair invariant fails: " + why);

        if (rec.children.size() != 1) {
            issue(node, "RAMSEY node needs exactly one child");
            return;
        }
        const CaseRecord& child = rec.children.front();
        const double a_r = L.angles()[data.color_r - 1];

        for (int i = 0; i < k; ++i) {
            const double expected = g_closed_form(L.angles()[i], a_r, data.t);
            if (i >= static_cast<int>(data.formal_angles.size()) ||
                std::abs(data.formal_angles[i] - expected) > 1e-12)
                issue(node, "formal angle differs from g^{a_r}_t(a_i)");
        }
        if (!(g_closed_form(-beta, a_r, data.t) <= -beta + cfg.tol_match))
            issue(node, "interval image g(-beta) <= -beta fails");

        std::vector<Eigen::VectorXd> basis;
        for (int i : data.T) basis.push_back(code.vector(i));
        if (child.code.size() != static_cast<int>(data.M.size())) {
            issue(node, "child size differs from |M|");
            return;
        }
        const GramMatrix G = gram_of(code, cfg);
        for (std::size_t r = 0; r < data.M.size(); ++r) {
            const Eigen::VectorXd expected =
                project_complement(code.vector(data.M[r]), basis, cfg);
            if ((child.code.vector(static_cast<int>(r)) - expected).cwiseAbs().maxCoeff() >
                10 * cfg.tol_unit)
                issue(node, "child vector differs from the recomputed projection");
        }
        for (std::size_t p = 0; p < data.M.size(); ++p) {
            for (std::size_t q = p + 1; q < data.M.size(); ++q) {
                const double expected = g_closed_form(G(data.M[p], data.M[q]), a_r, data.t);
                const double actual = child.code.rows()
                                          .row(static_cast<int>(p))
                                          .dot(child.code.rows().row(static_cast<int>(q)));
                if (std::abs(actual - expected) > 1e-9)
                    issue(node, "projected product differs from g_closed_form");
            }
        }

        const AngleSystem expected_system =
            AngleSystem::with_interval_absorbed(beta, data.formal_angles);
        if (!same_system(child.system, expected_system))
            issue(node, "child system differs from [-1,-beta] with g-angles");

        const double spill = (data.tower.value() - 1.0) / static_cast<double>(k);
        const LogValue expected_bound =
            log_add(data.tower * child.bound, LogValue::from_value(spill));
        if (!log_close(rec.bound, expected_bound))
            issue(node, "RAMSEY bound is not Q B_child + (Q-1)/k");
        if (!log_close(rec.threshold, data.tower * child.threshold))
            issue(node, "RAMSEY threshold is not Q times the child threshold");
    }
};

}  // namespace

const NodeReport* VerifyReport::first_failure() const {
    for (const NodeReport& node : nodes)
        if (!node.ok) return &node;
    return nullptr;
}

VerifyReport verify_trace(const DecompositionTrace& trace, const ProjectionConfig& cfg) {
    VerifyReport report;
    Verifier verifier{cfg, report};
    verifier.verify_node(trace.root, "root");

    // Final inequality: the composed bound stays below f_k(beta) d^k.
    NodeReport& root_node = report.nodes.front();
    if (trace.claimed_bound.log2() != trace.root.bound.log2())
        verifier.issue(root_node, "claimed trace bound differs from the root bound");
    try {
        const LogValue cap =
            f_k(trace.root.system.beta(), trace.root.system.k()) *
            LogValue::from_value(static_cast<double>(trace.root.code.dim()))
                .pow(static_cast<double>(trace.root.system.k()));
        if (!(trace.root.bound <= cap))
            verifier.issue(root_node, "trace bound exceeds f_k(beta) d^k");
    } catch (const std::exception& e) {
        verifier.issue(root_node, std::string("f_k evaluation failed: ") + e.what());
    }

    std::ostringstream os;
    os << (report.ok ? "verified" : "FAILED") << ": " << report.nodes.size() << " nodes";
    if (const NodeReport* f = report.first_failure())
        os << ", first failure at " << f->path << " (" << f->issues.front() << ")";
    report.summary = os.str();
    return report;
}

}  // namespace spherecode
