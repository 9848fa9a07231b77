#include <gtest/gtest.h>

#include <random>

#include "ergorate/drift.hpp"
#include "ergorate/rwmodel.hpp"
#include "support.hpp"

using namespace ergorate;

namespace {

bool has_message(const std::vector<std::string>& v, const std::string& needle)
{
    return std::any_of(v.begin(), v.end(),
                       [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST(GeneralizedPower, MatchesDefinition)
{
    const cplx z{0.7, -0.4};
    EXPECT_NEAR(std::abs(generalized_power(z, 1, 5) - std::pow(z, 5)), 0.0, 1e-14);
    // z^{(3)}(n) = n (n-1) z^{n-2}
    EXPECT_NEAR(std::abs(generalized_power(z, 3, 6) - 30.0 * std::pow(z, 4)), 0.0, 1e-13);
    EXPECT_EQ(generalized_power(z, 3, 1), cplx(0.0));
}

TEST(ApplyP, ConstantFunctionIsFixed)
{
    const RandomWalkModel m = support::two_neighbour(0.3, 0.6);
    for (long i = 0; i < 20; ++i)
        EXPECT_NEAR(std::abs(apply_P(m, [](long) { return cplx(1.0); }, i) - 1.0), 0.0, 1e-15);
}

TEST(ApplyP, BirthDeathBoundaryRow)
{
    const double a = 0.35;
    const RandomWalkModel m = RandomWalkModel::birth_death(0.6, 0.1, 0.3, a);
    const cplx z{0.4, 0.9};
    const SequenceAnsatz f{{{z, 1, 1.0}}};
    EXPECT_NEAR(std::abs(apply_P(m, f, 0) - (a + (1.0 - a) * z)), 0.0, 1e-15);
}

TEST(ApplyP, InteriorRowsActAsPhi)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    for (int t = 0; t < 30; ++t) {
        const RandomWalkModel m = support::random_model(rng);
        const cplx z{U(rng), U(rng)};
        if (std::abs(z) < 0.2)
            continue;
        const SequenceAnsatz f{{{z, 1, 1.0}}};
        for (long i = m.g(); i < m.g() + 10; ++i) {
            const cplx want = phi_eval(m.law, z) * std::pow(z, static_cast<double>(i));
            EXPECT_LE(std::abs(apply_P(m, f, i) - want), 1e-12 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST(ApplyP, Linearity)
{
    const RandomWalkModel m = support::two_neighbour(0.1, 0.1);
    const SequenceAnsatz f{{{cplx(0.5, 0.2), 1, 1.0}, {cplx(-0.3, 0.1), 2, 2.0}}};
    const SequenceAnsatz g{{{cplx(1.2, -0.4), 1, 1.0}}};
    const cplx al{0.3, -2.0}, be{1.5, 0.5};
    SequenceAnsatz comb;
    for (auto t : f.terms)
        comb.terms.push_back({t.z, t.k, al * t.alpha});
    for (auto t : g.terms)
        comb.terms.push_back({t.z, t.k, be * t.alpha});
    for (long i = 0; i < 10; ++i) {
        const cplx lhs = apply_P(m, comb, i);
        const cplx rhs = al * apply_P(m, f, i) + be * apply_P(m, g, i);
        EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-13);
    }
}

TEST(ApplyP, Errors)
{
    const RandomWalkModel m = support::two_neighbour(0.5, 0.5);
    EXPECT_THROW(apply_P(m, [](long) { return cplx(1.0); }, -1), Error);
    const std::vector<cplx> shortseq(3, 1.0);
    EXPECT_THROW(apply_P(m, std::span<const cplx>(shortseq), 4), Error);
}

TEST(Validate, TwoNeighbourExampleIsValid)
{
    EXPECT_TRUE(validate(support::two_neighbour(0.5, 0.5)).empty());
}

TEST(Validate, ReportsViolations)
{
    RandomWalkModel m = support::two_neighbour(0.5, 0.5);
    m.law.a = {0.5, 0.5, 0.0, 0.0};
    EXPECT_TRUE(has_message(validate(m), "a_d must be positive"));

    RandomWalkModel r = support::two_neighbour(0.5, 0.5);
    r.boundary.rows[0] = {0.4, 0.5, 0.0};
    EXPECT_TRUE(has_message(validate(r), "row 0 sums to 0.9"));

    RandomWalkModel up = RandomWalkModel::birth_death(0.3, 0.2, 0.5, 0.5);
    EXPECT_FALSE(validate(up).empty());
}

TEST(Validate, DetectsPeriodicChain)
{
    // increments +-1 only and a boundary row that jumps to state 1: period 2
    RandomWalkModel m = RandomWalkModel::birth_death(0.7, 0.0, 0.3, 0.0);
    m.boundary.rows = {{0.0, 1.0}};
    const ChainStructure s = chain_structure(m);
    EXPECT_TRUE(s.irreducible);
    EXPECT_EQ(s.period, 2);
    EXPECT_FALSE(validate(m).empty());
}

TEST(Validate, DetectsReducibleChain)
{
    // state 0 absorbing
    RandomWalkModel m = RandomWalkModel::birth_death(0.7, 0.0, 0.3, 1.0);
    m.boundary.rows = {{1.0, 0.0}};
    EXPECT_FALSE(chain_structure(m).irreducible);
}
