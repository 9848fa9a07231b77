#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ergorate/polycalc.hpp"
#include "oracle_values.hpp"

using namespace ergorate;

namespace {

cplx naive_eval(const ComplexPoly& p, cplx z)
{
    cplx s = 0.0;
    for (int k = 0; k <= p.degree(); ++k)
        s += p.coeff(k) * std::pow(z, k);
    return s;
}

ComplexPoly random_poly(std::mt19937_64& rng, int deg)
{
    std::normal_distribution<double> N(0.0, 1.0);
    std::vector<cplx> c(static_cast<std::size_t>(deg + 1));
    for (auto& x : c)
        x = {N(rng), N(rng)};
    return ComplexPoly(c);
}

}  // namespace

TEST(ComplexPoly, TrailingZerosAreStripped)
{
    ComplexPoly p({1.0, 2.0, 0.0, 0.0});
    EXPECT_EQ(p.degree(), 1);
    EXPECT_TRUE(ComplexPoly({0.0, 0.0}).is_zero());
}

TEST(ComplexPoly, HornerMatchesPowerSum)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    for (int t = 0; t < 50; ++t) {
        const ComplexPoly p = random_poly(rng, 1 + t % 9);
        const cplx z{U(rng), U(rng)};
        EXPECT_LE(std::abs(p(z) - naive_eval(p, z)), 1e-12 * (1.0 + std::abs(naive_eval(p, z))));
    }
}

TEST(ComplexPoly, ArithmeticAndDerivative)
{
    const ComplexPoly p({1.0, -3.0, 2.0});  // 2z^2 - 3z + 1
    const ComplexPoly q({-1.0, 1.0});       // z - 1
    const ComplexPoly pq = p * q;
    EXPECT_EQ(pq.degree(), 3);
    EXPECT_NEAR(std::abs(pq(2.0) - p(2.0) * q(2.0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(p.derivative()(0.5) - cplx(-1.0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs((p - p)(3.0)), 0.0, 0.0);
    const auto t = p.taylor_at(1.0);  // 2(z-1)^2 + (z-1)
    EXPECT_NEAR(std::abs(t[0]), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(t[1] - cplx(1.0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(t[2] - cplx(2.0)), 0.0, 1e-14);
}

TEST(FindRoots, SimpleFactorization)
{
    const RootSet rs = find_roots(ComplexPoly({-1.0, 0.0, 1.0}));
    ASSERT_EQ(rs.roots.size(), 2u);
    std::vector<double> re;
    for (const auto& r : rs.roots) {
        EXPECT_EQ(r.multiplicity, 1);
        re.push_back(r.value.real());
    }
    std::sort(re.begin(), re.end());
    EXPECT_NEAR(re[0], -1.0, 1e-12);
    EXPECT_NEAR(re[1], 1.0, 1e-12);
}

TEST(FindRoots, DoubleRootIsClustered)
{
    const RootSet rs = find_roots(ComplexPoly({4.0, -4.0, 1.0}));
    ASSERT_EQ(rs.roots.size(), 1u);
    EXPECT_EQ(rs.roots[0].multiplicity, 2);
    EXPECT_NEAR(std::abs(rs.roots[0].value - cplx(2.0)), 0.0, 1e-7);
}

TEST(FindRoots, TwoNeighbourCharacteristicPolynomialAtPointEight)
{
    const ComplexPoly E({0.5, 1.0 / 3.0, -0.8, 1.0 / 6.0});
    const RootSet rs = find_roots(E);
    ASSERT_EQ(rs.total_multiplicity(), 3);
    std::vector<cplx> got = rs.expanded();
    std::sort(got.begin(), got.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    for (int i = 0; i < 3; ++i)
        EXPECT_NEAR(std::abs(got[static_cast<std::size_t>(i)] - oracle::e08_roots[i]), 0.0, 1e-12);
    const auto inside = std::count_if(got.begin(), got.end(), [](cplx z) { return std::abs(z) < 2.18; });
    EXPECT_EQ(inside, 2);
}

TEST(FindRoots, ErrorsOnConstants)
{
    EXPECT_THROW(find_roots(ComplexPoly({3.0})), Error);
    try {
        find_roots(ComplexPoly({3.0}));
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegreeZero);
    }
    try {
        find_roots(ComplexPoly());
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroPolynomial);
    }
}

TEST(FindRoots, MultiplicitiesSumToDegreeAndResidualsSmall)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int t = 0; t < 40; ++t) {
        // mix random roots with repeated ones
        std::vector<cplx> roots;
        const int n = 2 + t % 5;
        for (int i = 0; i < n; ++i)
            roots.push_back({U(rng), U(rng)});
        if (t % 3 == 0)
            roots.push_back(roots.front());
        const ComplexPoly p = ComplexPoly::from_roots(roots);
        const RootSet rs = find_roots(p);
        EXPECT_EQ(rs.total_multiplicity(), p.degree());
        for (const Root& r : rs.roots) {
            const double scale =
                p.max_abs_coeff() * std::pow(std::max(1.0, std::abs(r.value)), p.degree());
            EXPECT_LE(std::abs(p(r.value)), 1e-10 * scale);
        }
    }
}

TEST(Resultant, LinearFactors)
{
    const cplx a{0.3, -1.0}, b{2.0, 0.5};
    EXPECT_NEAR(std::abs(resultant(ComplexPoly({-a, 1.0}), ComplexPoly({-b, 1.0})) - (a - b)), 0.0,
                1e-14);
}

TEST(Resultant, ProductFormula)
{
    EXPECT_NEAR(std::abs(resultant(ComplexPoly({-1.0, 0.0, 1.0}), ComplexPoly({0.0, 1.0})) + 1.0), 0.0,
                1e-14);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        const ComplexPoly p = random_poly(rng, 1 + t % 5), q = random_poly(rng, 1 + (t / 5) % 4);
        cplx prod = std::pow(p.leading(), q.degree());
        for (cplx alpha : find_roots(p).expanded())
            prod *= q(alpha);
        EXPECT_LE(std::abs(resultant(p, q) - prod), 1e-9 * std::max(1.0, std::abs(prod)));
    }
}

TEST(Resultant, VanishesOnCommonRoot)
{
    EXPECT_NEAR(std::abs(resultant(ComplexPoly({-1.0, 0.0, 1.0}), ComplexPoly({-1.0, 1.0}))), 0.0,
                1e-14);
    EXPECT_THROW(resultant(ComplexPoly(), ComplexPoly({1.0, 1.0})), Error);
}

TEST(Interpolation, RecoversPolynomialAndDetectsLowBound)
{
    const ComplexPoly p({1.0, cplx(0, 2), -3.0, 0.5, cplx(0.25, -1)});
    const ComplexPoly r = interpolate_on_circle([&](cplx z) { return p(z); }, 6);
    for (int k = 0; k <= 6; ++k)
        EXPECT_NEAR(std::abs(r.coeff(k) - p.coeff(k)), 0.0, 1e-13);
    EXPECT_THROW(interpolate_on_circle([&](cplx z) { return p(z); }, 2), Error);
}

TEST(LambdaPoly, SpecializationMatchesCoefficientwiseEvaluation)
{
    // F(lambda, z) = (1 + lambda) z^2 - lambda^2 z + 3
    auto F = [](cplx l, cplx z) { return (1.0 + l) * z * z - l * l * z + 3.0; };
    const LambdaPoly P = LambdaPoly::interpolate(F, 3, 3);
    EXPECT_EQ(P.z_degree(), 2);
    EXPECT_EQ(P.lambda_degree(), 2);
    for (cplx l : {cplx(0.3, 0.1), cplx(-1.2, 0.0), cplx(0.0, 2.0)}) {
        const ComplexPoly s = P.at(l);
        EXPECT_NEAR(std::abs(s.coeff(2) - (1.0 + l)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(s.coeff(1) + l * l), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(s.coeff(0) - 3.0), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(P(l, cplx(0.5, 0.5)) - F(l, cplx(0.5, 0.5))), 0.0, 1e-12);
    }
}

TEST(ResultantInLambda, BirthDeathPairAgainstDirectResultants)
{
    // p(lambda, z) = a + (1-a) z - lambda and E = q z^2 + (r - lambda) z + p
    const double P = 0.6, Q = 0.25, R = 0.15, A = 0.3;
    auto f = [&](cplx l, cplx z) { return A + (1.0 - A) * z - l; };
    auto e = [&](cplx l, cplx z) { return Q * z * z + (R - l) * z + P; };
    const LambdaPoly lp = LambdaPoly::interpolate(f, 2, 2), le = LambdaPoly::interpolate(e, 2, 3);
    const ComplexPoly res = resultant_in_lambda(lp, le, 3);
    for (cplx l : {cplx(0.2, 0.3), cplx(-0.7, 0.0), cplx(1.5, -0.5)}) {
        const cplx direct = resultant(lp.at(l), le.at(l));
        EXPECT_NEAR(std::abs(res(l) - direct), 0.0, 1e-11 * std::max(1.0, std::abs(direct)));
    }
}
