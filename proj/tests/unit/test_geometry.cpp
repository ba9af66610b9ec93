#include <doctest.h>

#include <cmath>
#include <random>

#include "spherecode/geometry.hpp"
#include "spherecode/search.hpp"
#include "test_helpers.hpp"

using namespace spherecode;
using spherecode::testing::random_unit_vector;
using spherecode::testing::sample_common_angle;

namespace {

Code orthonormal(int d) {
    return Code(d, Eigen::MatrixXd::Identity(d, d));
}

}  // namespace

TEST_CASE("gram_of on an orthonormal basis is the identity") {
    const GramMatrix g = gram_of(orthonormal(3));
    CHECK((g.matrix() - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gram_of on the regular simplex gives -1/d off the diagonal") {
    // oracle: build the simplex Gram directly, factor it, and round-trip
    Eigen::MatrixXd expected = Eigen::MatrixXd::Constant(4, 4, -1.0 / 3.0);
    for (int i = 0; i < 4; ++i) expected(i, i) = 1.0;
    const Code code = factor_gram(GramMatrix(expected), 3);
    const GramMatrix g = gram_of(code);
    CHECK((g.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gram_of on a single vector is the 1x1 identity") {
    Eigen::MatrixXd one(1, 3);
    one << 1, 0, 0;
    const GramMatrix g = gram_of(Code(3, one));
    CHECK(g.size() == 1);
    CHECK(g(0, 0) == 1.0);
}

TEST_CASE("gram_of rejects a non-unit vector with its index") {
    Eigen::MatrixXd m(2, 2);
    m << 1, 0, 0, 1.5;
    try {
        gram_of(Code(2, m));
        FAIL("expected NonUnitVectorError");
    } catch (const NonUnitVectorError& e) {
        CHECK(e.index == 1);
        CHECK(e.norm == doctest::Approx(1.5));
    }
}

TEST_CASE("validate_code classifies an orthonormal basis with A={0}") {
    const AngleSystem L(0.5, {0.0});
    const ValidationReport r = validate_code(orthonormal(3), L);
    CHECK(r.valid);
    for (const PairClass& pc : r.pairs) {
        CHECK(pc.kind == PairKind::angle);
        CHECK(pc.color == 1);
    }
}

TEST_CASE("validate_code classifies the d=4 simplex as all-interval") {
    const Code simplex = simplex_code(4);  // 5 vectors, pairwise -1/4
    const AngleSystem L(0.25, {});
    const ValidationReport r = validate_code(simplex, L);
    CHECK(r.valid);
    for (const PairClass& pc : r.pairs) CHECK(pc.color == 0);
}

TEST_CASE("validate_code sends an antipodal pair to the interval") {
    Eigen::MatrixXd m(2, 2);
    m << 1, 0, -1, 0;
    const ValidationReport r = validate_code(Code(2, m), AngleSystem(0.5, {1.0 / 3.0}));
    CHECK(r.valid);
    CHECK(r.pairs[0].color == 0);
}

TEST_CASE("validate_code flags a violation") {
    Eigen::MatrixXd m(2, 3);
    m << 1, 0, 0, std::sqrt(0.5), std::sqrt(0.5), 0;
    const ValidationReport r = validate_code(Code(3, m), AngleSystem(0.5, {0.0}));
    CHECK(!r.valid);
    REQUIRE(r.first_offender.has_value());
    CHECK(r.first_offender->kind == PairKind::violation);
}

TEST_CASE("validate_code reports ambiguity instead of guessing") {
    const ProjectionConfig cfg;
    // two angles 1.5 tolerances apart, value halfway between them
    const double a = 0.3;
    const double b = a + 1.5 * cfg.tol_match;
    const double value = a + 0.75 * cfg.tol_match;
    const PairClass pc = classify_product(value, AngleSystem(0.5, {a, b}), cfg);
    CHECK(pc.kind == PairKind::ambiguous);
}

TEST_CASE("classification at the interval boundary") {
    const ProjectionConfig cfg;
    const AngleSystem L(0.5, {0.0});
    // just inside the tolerance collar around -beta
    CHECK(classify_product(-0.5 + 0.5 * cfg.tol_match, L, cfg).kind == PairKind::interval);
    // outside the collar and matching no angle
    CHECK(classify_product(-0.5 + 3.0 * cfg.tol_match, L, cfg).kind == PairKind::violation);
    // the nearest angle wins before the interval
    const AngleSystem tight(0.5, {-0.4999999995});
    const PairClass pc = classify_product(-0.4999999995, tight, cfg);
    CHECK(pc.kind == PairKind::angle);
    CHECK(pc.color == 1);
    // slightly below -1 is still the interval (floating collar)
    CHECK(classify_product(-1.0 - 0.5 * cfg.tol_match, L, cfg).kind == PairKind::interval);
}

TEST_CASE("project_normalized forced example") {
    Eigen::VectorXd x(3), y(3);
    x << 0.8, 0, 0.6;
    y << 0, 0, 1;
    const Eigen::VectorXd p = project_normalized(x, y);
    CHECK(p(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(p(1)) < 1e-15);
    CHECK(std::abs(p(2)) < 1e-15);
}

TEST_CASE("project_normalized leaves an orthogonal vector unchanged") {
    Eigen::VectorXd x(3), y(3);
    x << 0, 1, 0;
    y << 1, 0, 0;
    CHECK((project_normalized(x, y) - x).norm() == 0.0);
}

TEST_CASE("projected product at the common angle c = 1/3 is 1/4") {
    // three vectors with all pairwise products 1/3: p_y(x1) . p_y(x2) = (c^{-1}+1)^{-1}
    Eigen::MatrixXd g = Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0);
    for (int i = 0; i < 3; ++i) g(i, i) = 1.0;
    const Code code = factor_gram(GramMatrix(g), 3);
    const Eigen::VectorXd p1 = project_normalized(code.vector(0), code.vector(2));
    const Eigen::VectorXd p2 = project_normalized(code.vector(1), code.vector(2));
    CHECK(p1.dot(p2) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("project_normalized refuses collinear input") {
    Eigen::VectorXd x(2), y(2);
    x << 1, 0;
    y << 1, 0;
    CHECK_THROWS_AS(project_normalized(x, y), SingularProjectionError);
}

TEST_CASE("projection identity holds on random triples") {
    std::mt19937_64 rng(20240817);
    for (int trial = 0; trial < 300; ++trial) {
        const Eigen::VectorXd x1 = random_unit_vector(rng, 4);
        const Eigen::VectorXd x2 = random_unit_vector(rng, 4);
        const Eigen::VectorXd y = random_unit_vector(rng, 4);
        const double c1 = x1.dot(y), c2 = x2.dot(y);
        if (std::abs(c1) > 0.99 || std::abs(c2) > 0.99) continue;
        const Eigen::VectorXd p1 = project_normalized(x1, y);
        const Eigen::VectorXd p2 = project_normalized(x2, y);
        CHECK(std::abs(p1.norm() - 1.0) < 1e-9);
        CHECK(std::abs(p1.dot(y)) < 1e-9);
        const double lhs = p1.dot(p2);
        const double rhs =
            (x1.dot(x2) - c1 * c2) / std::sqrt((1 - c1 * c1) * (1 - c2 * c2));
        CHECK(std::abs(lhs - rhs) < 1e-9);
    }
}

TEST_CASE("project_complement reduces to project_normalized for one pivot") {
    Eigen::VectorXd x(3), e1(3);
    x << 0.8, 0, 0.6;
    e1 << 1, 0, 0;
    const Eigen::VectorXd p = project_complement(x, {e1});
    CHECK(p(2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("project_complement of the diagonal against e1,e2 is e3") {
    Eigen::VectorXd x(3), e1(3), e2(3);
    x << 1, 1, 1;
    x /= std::sqrt(3.0);
    e1 << 1, 0, 0;
    e2 << 0, 1, 0;
    const Eigen::VectorXd p = project_complement(x, {e1, e2});
    CHECK(p(2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(p(0)) < 1e-12);
    CHECK(std::abs(p(1)) < 1e-12);
}

TEST_CASE("project_complement detects a dependent basis") {
    Eigen::VectorXd e1(3), e1b(3), x(3);
    e1 << 1, 0, 0;
    e1b << 1, 1e-14, 0;
    e1b /= e1b.norm();
    x << 0, 0, 1;
    CHECK_THROWS_AS(project_complement(x, {e1, e1b}), DependentBasisError);
}

TEST_CASE("chained projection agrees with the closed form, c = 0.3, k = 3") {
    std::mt19937_64 rng(411);
    int accepted = 0;
    while (accepted < 40) {
        auto config = sample_common_angle(rng, 0.3, 3);
        if (!config) continue;
        ++accepted;
        std::vector<Eigen::VectorXd> basis;
        for (int i = 0; i < 3; ++i) basis.push_back(config->code.vector(i));
        const Eigen::VectorXd px = project_complement(config->code.vector(3), basis);
        const Eigen::VectorXd py = project_complement(config->code.vector(4), basis);
        CHECK(std::abs(px.dot(py) - g_closed_form(config->a, 0.3, 3)) < 1e-9);
    }
}

TEST_CASE("g_closed_form identities") {
    CHECK(g_closed_form(0.37, 0.8, 0) == 0.37);        // k = 0 is the identity map
    CHECK(g_closed_form(-0.9, 0.0, 0) == -0.9);        // c = 0 fine when k = 0
    CHECK(g_closed_form(1.0 / 3, 1.0 / 3, 2) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(g_closed_form(0.0, 0.5, 1) == doctest::Approx(-1.0 / 3).epsilon(1e-14));
}

TEST_CASE("g at c = 0 with k = 1 via explicitly constructed vectors") {
    // y = e1; x, x' at product 1/2 with y and 0 with each other
    Eigen::VectorXd y(3), x(3), xp(3);
    y << 1, 0, 0;
    const double s = std::sqrt(0.75);
    x << 0.5, s, 0;
    xp << 0.5, -s / 3.0, s * std::sqrt(8.0) / 3.0;
    CHECK(x.dot(xp) == doctest::Approx(0.0).epsilon(1e-15));
    const double chained = project_complement(x, {y}).dot(project_complement(xp, {y}));
    CHECK(chained == doctest::Approx(g_closed_form(0.0, 0.5, 1)).epsilon(1e-12));
}

TEST_CASE("g_closed_form domain errors") {
    CHECK_THROWS_AS(g_closed_form(0.1, 0.0, 1), DomainError);
    CHECK_THROWS_AS(g_closed_form(0.1, -0.5, 2), DomainError);  // pole 1 + kc = 0
    CHECK_THROWS_AS(g_closed_form(0.1, 1.5, 1), DomainError);
}

TEST_CASE("g is strictly decreasing in k and tends to (a-c)/(1-c)") {
    const double a = 0.2, c = 0.4;
    double previous = g_closed_form(a, c, 0);
    for (long k = 1; k <= 20; ++k) {
        const double current = g_closed_form(a, c, k);
        CHECK(current < previous);
        previous = current;
    }
    CHECK(std::abs(g_closed_form(a, c, 1000000) - (a - c) / (1 - c)) < 1e-5);
}

TEST_CASE("factor_gram embeds the identity as an orthonormal set") {
    const Code code = factor_gram(GramMatrix(Eigen::MatrixXd::Identity(3, 3)), 3);
    CHECK(code.size() == 3);
    const GramMatrix g = gram_of(code);
    CHECK((g.matrix() - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("factor_gram on the simplex Gram: eigenvalues force rank 3") {
    Eigen::MatrixXd g = Eigen::MatrixXd::Constant(4, 4, -1.0 / 3.0);
    for (int i = 0; i < 4; ++i) g(i, i) = 1.0;
    // oracle: spectrum is {0, 4/3, 4/3, 4/3}
    const Eigen::VectorXd ev = symmetric_eigenvalues(g);
    CHECK(std::abs(ev(0)) < 1e-12);
    for (int i = 1; i < 4; ++i) CHECK(ev(i) == doctest::Approx(4.0 / 3).epsilon(1e-12));

    const Code code = factor_gram(GramMatrix(g), 3);
    const GramMatrix back = gram_of(code);
    CHECK((back.matrix() - g).cwiseAbs().maxCoeff() < 1e-10);

    CHECK_THROWS_AS(factor_gram(GramMatrix(g), 2), RankExcessError);
}

TEST_CASE("factor_gram rejects an indefinite matrix") {
    Eigen::MatrixXd g(2, 2);
    g << 1, 1.5, 1.5, 1;
    CHECK_THROWS_AS(factor_gram(GramMatrix(g), 2), NotPsdError);
}

TEST_CASE("factor_gram . gram_of is the identity on random codes") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::MatrixXd m(5, 4);
        for (int i = 0; i < 5; ++i) m.row(i) = random_unit_vector(rng, 4);
        const GramMatrix g = gram_of(Code(4, m));
        const Code back = factor_gram(g, 4);
        const GramMatrix g2 = gram_of(back);
        CHECK((g2.matrix() - g.matrix()).cwiseAbs().maxCoeff() < 1e-7);
    }
}
