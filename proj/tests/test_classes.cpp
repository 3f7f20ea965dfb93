#include <gtest/gtest.h>

#include <random>

#include "qbi/classes.hpp"
#include "support/oracles.hpp"

using namespace qbi;
using namespace qbi::testing;

namespace {

Series one(std::size_t order) { return Series::constant(1.0, order); }

double diff(const Series& a, const Series& b) { return max_abs_diff(to_vector(a), to_vector(b)); }

}  // namespace

TEST(Classes, WeightOutOfRangeRejected) {
    EXPECT_THROW(ClassSpec(Family::M, 1.5, QParams(0.5, 0), starlike_order(0)), std::domain_error);
    EXPECT_THROW(ClassSpec(Family::F, -0.1, QParams(0.5, 0), starlike_order(0)), std::domain_error);
}

TEST(Classes, IdentityGivesConstantOne) {
    const auto f = NormalizedFunction::identity(8);
    for (auto rule : {StepRule::Ordinary, StepRule::Jackson}) {
        EXPECT_EQ(to_vector(m_expression(f, 0.4, QParams(0.5, 2), rule)), to_vector(one(7)));
        EXPECT_EQ(to_vector(f_expression(f, 0.4, QParams(0.5, 2), rule)), to_vector(one(7)));
        const ClassSpec spec(Family::M, 0.4, QParams(0.5, 2), starlike_order(0), rule);
        EXPECT_EQ(to_vector(g_expression(f, spec)), to_vector(one(7)));
    }
}

TEST(Classes, ExpressionNeedsOrderThree) {
    EXPECT_THROW(m_expression(NormalizedFunction::identity(2), 0.0, QParams(0.5, 0)), std::invalid_argument);
}

TEST(Classes, MExpressionPublishedCoefficients) {
    std::mt19937_64 rng(31);
    const double lambda = 0.5, q = 0.5;
    const QParams qp(q, 1);
    const double b2 = 1.5, b3 = 1.75;  // [2]_0.5, [3]_0.5
    for (int t = 0; t < 50; ++t) {
        const auto f = random_normalized(rng, 8);
        const Series e = m_expression(f, lambda, qp);
        const cplx a2 = f.a(2), a3 = f.a(3);
        EXPECT_NEAR(std::abs(e[1] - (1 + lambda) * b2 * a2), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(e[2] - (2 * (1 + 2 * lambda) * b3 * a3 - (1 + 3 * lambda) * b2 * b2 * a2 * a2)), 0.0, 1e-12);
    }
}

TEST(Classes, MExpressionJacksonCoefficients) {
    // Literal q-steps: c1 = q(1 + l q)[2]^k a2,
    // c2 = (q + q^2)(1 + l(q + q^2))[3]^k a3 - q(1 + l(2q + q^2))[2]^{2k} a2^2.
    std::mt19937_64 rng(32);
    const double l = 0.5, q = 0.5;
    const QParams qp(q, 1);
    const double b2 = 1.5, b3 = 1.75;
    for (int t = 0; t < 50; ++t) {
        const auto f = random_normalized(rng, 8);
        const Series e = m_expression(f, l, qp, StepRule::Jackson);
        const cplx a2 = f.a(2), a3 = f.a(3);
        EXPECT_NEAR(std::abs(e[1] - q * (1 + l * q) * b2 * a2), 0.0, 1e-12);
        const cplx c2 = (q + q * q) * (1 + l * (q + q * q)) * b3 * a3 - q * (1 + l * (2 * q + q * q)) * b2 * b2 * a2 * a2;
        EXPECT_NEAR(std::abs(e[2] - c2), 0.0, 1e-12);
    }
}

TEST(Classes, RelationCoefficientsMatchSeriesEngine) {
    std::mt19937_64 rng(33);
    for (auto family : {Family::M, Family::F})
        for (auto rule : {StepRule::Ordinary, StepRule::Jackson})
            for (unsigned k : {0u, 1u, 3u}) {
                const ClassSpec spec(family, 0.7, QParams(0.45, k), starlike_order(0.2), rule);
                const auto c = relation_coefficients(spec);
                const auto f = random_normalized(rng, 6);
                const cplx a2 = f.a(2), a3 = f.a(3);
                const Series ef = class_expression(f, spec), eg = g_expression(f, spec);
                EXPECT_NEAR(std::abs(ef[1] - c.lead * a2), 0.0, 1e-12);
                EXPECT_NEAR(std::abs(ef[2] - (c.cubic * a3 - c.square * a2 * a2)), 0.0, 1e-12);
                EXPECT_NEAR(std::abs(eg[1] + c.lead * a2), 0.0, 1e-12);
                EXPECT_NEAR(std::abs(eg[2] - ((2 * c.cubic - c.square) * a2 * a2 - c.cubic * a3)), 0.0, 1e-12);
            }
}

TEST(Classes, MLambdaZeroIsFirstRatio) {
    std::mt19937_64 rng(34);
    const QParams qp(0.6, 2);
    const auto f = random_normalized(rng, 10);
    const Series dk = salagean_q(f, qp);
    // Ordinary steps: z (D^k f)' / D^k f.
    const Series ordinary = divide(ordinary_derivative(dk), shift_down(dk));
    EXPECT_LT(diff(m_expression(f, 0.0, qp), ordinary), 1e-13);
    // Jackson steps: D_q^{k+1} f / D_q^k f.
    const Series jackson = divide(shift_down(salagean_q(f, QParams(0.6, 3))), shift_down(dk));
    double scale = 1.0;
    for (const cplx& c : jackson.coeffs()) scale = std::max(scale, std::abs(c));
    EXPECT_LT(diff(m_expression(f, 0.0, qp, StepRule::Jackson), jackson), 1e-13 * scale);
}

TEST(Classes, MLambdaOneIsSecondRatio) {
    std::mt19937_64 rng(35);
    const auto f = random_normalized(rng, 10);
    const Series d3 = salagean_q(f, QParams(0.6, 3)), d4 = salagean_q(f, QParams(0.6, 4));
    EXPECT_LT(diff(m_expression(f, 1.0, QParams(0.6, 2), StepRule::Jackson), divide(shift_down(d4), shift_down(d3))),
              1e-13);
}

TEST(Classes, MOrderZeroJacksonMatchesDirectForm) {
    // (1 - l) z D_q f / f + l D_q(z D_q f) / D_q f
    std::mt19937_64 rng(36);
    const double q = 0.7, l = 0.3;
    for (int t = 0; t < 20; ++t) {
        const auto f = random_normalized(rng, 10);
        const Series dq = jackson_derivative(f.series(), q);
        const Series first = divide(dq, shift_down(f.series()));
        const Series second = divide(jackson_derivative(shift_up(dq), q), dq);
        const Series direct = (1 - l) * first.truncated(8) + cplx(l) * second;
        EXPECT_LT(diff(m_expression(f, l, QParams(q, 0), StepRule::Jackson), direct), 1e-13);
    }
}

TEST(Classes, FExpressionEndpoints) {
    std::mt19937_64 rng(37);
    const QParams qp(0.7, 2);
    const auto f = random_normalized(rng, 10);
    const Series dk = salagean_q(f, qp);
    EXPECT_LT(diff(f_expression(f, 0.0, qp), shift_down(dk)), 1e-15);
    EXPECT_LT(diff(f_expression(f, 1.0, qp), ordinary_derivative(dk)), 1e-15);
    EXPECT_LT(diff(f_expression(f, 1.0, qp, StepRule::Jackson), jackson_derivative(dk, 0.7)), 1e-15);
}

TEST(Classes, FExpressionClosedForms) {
    std::mt19937_64 rng(38);
    const double mu = 0.3, q = 0.7;
    const double b2 = 1 + q, b3 = 1 + q + q * q;
    for (int t = 0; t < 50; ++t) {
        const auto f = random_normalized(rng, 8);
        const Series e = f_expression(f, mu, QParams(q, 2));
        EXPECT_NEAR(std::abs(e[1] - (1 + mu) * b2 * b2 * f.a(2)), 0.0, 1e-13);
        EXPECT_NEAR(std::abs(e[2] - (1 + 2 * mu) * b3 * b3 * f.a(3)), 0.0, 1e-13);
    }
}

TEST(Classes, GExpressionSignFlip) {
    const double l = 0.25, q = 0.4;
    const cplx a2(0.3, -0.1);
    const auto f = NormalizedFunction::from_tail({a2}, 8);
    const ClassSpec spec(Family::M, l, QParams(q, 2), starlike_order(0));
    EXPECT_NEAR(std::abs(g_expression(f, spec)[1] + (1 + l) * std::pow(1 + q, 2) * a2), 0.0, 1e-14);
}

TEST(Classes, ConstantTermIsExactlyOne) {
    std::mt19937_64 rng(39);
    for (int t = 0; t < 100; ++t) {
        const auto f = random_normalized(rng, 8);
        for (auto family : {Family::M, Family::F}) {
            const ClassSpec spec(family, 0.5, QParams(0.3, t % 3), strongly_starlike(0.5));
            EXPECT_EQ(class_expression(f, spec)[0], cplx(1.0));
            EXPECT_EQ(g_expression(f, spec)[0], cplx(1.0));
        }
    }
}

TEST(Subordination, ConstantOnePasses) {
    for (const auto& t : {strongly_starlike(0.5), strongly_starlike(1.0), starlike_order(0.0), starlike_order(0.25)})
        EXPECT_TRUE(subordination_check(one(8), t).pass);
}

TEST(Subordination, TargetItselfPasses) {
    // Long expansions keep the truncation error below the distance to the boundary at r = 0.95.
    for (const auto& t : {strongly_starlike(0.5, 600), strongly_starlike(1.0, 600), starlike_order(0.0, 600),
                          starlike_order(0.25, 600)}) {
        const auto v = subordination_check(t.series(), t);
        EXPECT_TRUE(v.pass) << to_string(t.kind()) << "=" << t.parameter() << " margin " << v.worst_margin;
    }
}

TEST(Subordination, ShortExpansionLeavesHalfPlane) {
    // At order 16 the partial sum of (1+z)/(1-z) drops below Re = 0 near |z| = 0.95.
    const auto t = starlike_order(0.0, 16);
    EXPECT_FALSE(subordination_check(t.series(), t).pass);
}

TEST(Subordination, LinearCounterexample) {
    const Series expr{1.0, 4.0};
    const auto v = subordination_check(expr, starlike_order(0.5), SamplingPlan{{0.9}, 64});
    EXPECT_FALSE(v.pass);
    EXPECT_NEAR(std::abs(v.witness_z - cplx(-0.9, 0.0)), 0.0, 1e-12);
    EXPECT_NEAR(v.witness_value.real(), -2.6, 1e-12);
    EXPECT_NEAR(v.worst_margin, -3.1, 1e-12);
}

TEST(Subordination, CustomTargetHasNoOracle) {
    EXPECT_THROW(subordination_check(one(4), custom_target(Series{1.0, 1.0})), NoRegionOracle);
}

TEST(Membership, IdentityPassesEverywhere) {
    const auto f = NormalizedFunction::identity(16);
    for (auto family : {Family::M, Family::F})
        for (double w : {0.0, 0.5, 1.0})
            for (const auto& t : {strongly_starlike(0.5), strongly_starlike(1.0), starlike_order(0.0), starlike_order(0.25)}) {
                const auto v = membership(f, ClassSpec(family, w, QParams(0.6, 1), t));
                EXPECT_TRUE(v.pass());
                EXPECT_EQ(v.samples_used(), 2u * 6u * 64u);
            }
}

TEST(Membership, LargeSecondCoefficientFails) {
    const ClassSpec spec(Family::M, 0.0, QParams(0.9, 0), starlike_order(0.0));
    const auto v = membership(NormalizedFunction::from_tail({0.9}, 16), spec);
    EXPECT_FALSE(v.pass());
    EXPECT_FALSE(v.f_side.pass);
    EXPECT_LT(v.f_side.worst_margin, 0.0);
    EXPECT_LT(v.f_side.witness_z.real(), 0.0);
    EXPECT_NEAR(v.f_side.witness_z.imag(), 0.0, 1e-9);
}

TEST(Membership, SmallPerturbationPasses) {
    const ClassSpec spec(Family::M, 0.0, QParams(0.9, 0), starlike_order(0.0));
    const auto v = membership(NormalizedFunction::from_tail({0.01}, 16), spec);
    EXPECT_TRUE(v.pass());
    EXPECT_GT(v.worst_margin(), 0.0);
}

TEST(Membership, Deterministic) {
    const ClassSpec spec(Family::F, 0.3, QParams(0.5, 1), strongly_starlike(0.5));
    const auto f = NormalizedFunction::from_tail({cplx(0.2, 0.1), 0.05}, 16);
    const auto a = membership(f, spec), b = membership(f, spec);
    EXPECT_EQ(a.pass(), b.pass());
    EXPECT_EQ(a.worst_margin(), b.worst_margin());
    EXPECT_EQ(a.f_side.witness_z, b.f_side.witness_z);
}
