#ifndef ERGORATE_TESTS_SUPPORT_HPP
#define ERGORATE_TESTS_SUPPORT_HPP

// Model builders and random generators shared by the tests and the acceptance run.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ergorate/ergorate.hpp"

namespace support {

using namespace ergorate;

inline IncrementLaw two_neighbour_law() { return IncrementLaw(2, 1, {0.5, 1.0 / 3.0, 0.0, 1.0 / 6.0}); }

inline RandomWalkModel two_neighbour(double a, double b)
{
    return RandomWalkModel::two_step(two_neighbour_law(), a, b);
}

inline std::string model_path(const std::string& name)
{
    return std::string(ERGORATE_MODEL_DIR) + "/" + name;
}

/// A random NERI law with the given g, d; a_{-g}, a_d > 0, about 30% of the
/// interior weights zero.
inline IncrementLaw random_neri_law(std::mt19937_64& rng, int g, int d)
{
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (;;) {
        std::vector<double> a(static_cast<std::size_t>(g + d + 1));
        for (double& x : a)
            x = U(rng) < 0.3 ? 0.0 : U(rng);
        a.front() += 0.1;
        a.back() += 0.05;
        double s = 0.0;
        for (double x : a)
            s += x;
        for (double& x : a)
            x /= s;
        IncrementLaw law(g, d, a);
        // keep a clear margin from the critical case mean = 0
        if (law.mean_increment() < -0.05)
            return law;
    }
}

inline BoundaryRows random_boundary(std::mt19937_64& rng, int g, int c)
{
    std::uniform_real_distribution<double> U(0.05, 1.0);
    BoundaryRows br{c, {}};
    for (int i = 0; i < g; ++i) {
        std::vector<double> row(static_cast<std::size_t>(c + 1));
        double s = 0.0;
        for (double& x : row)
            s += (x = U(rng));
        for (double& x : row)
            x /= s;
        br.rows.push_back(row);
    }
    return br;
}

/// A random valid model with g, d <= max_gd and c <= 3.
inline RandomWalkModel random_model(std::mt19937_64& rng, int max_gd = 3)
{
    std::uniform_int_distribution<int> G(1, max_gd), C(1, 3);
    for (;;) {
        const int g = G(rng), d = G(rng);
        RandomWalkModel m{random_neri_law(rng, g, d), random_boundary(rng, g, C(rng))};
        if (validate(m).empty())
            return m;
    }
}

/// Random valid birth-death parameters; r = 0 exactly when zero_r is set.
inline BirthDeathParams random_bd(std::mt19937_64& rng, bool zero_r = false)
{
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (;;) {
        const double r = zero_r ? 0.0 : 0.6 * U(rng);
        const double rest = 1.0 - r;
        const double p = rest * (0.5 + 0.5 * U(rng));
        const double q = rest - p;
        const double a = 0.01 + 0.98 * U(rng);
        BirthDeathParams b{p, q, r, a};
        if (q > 1e-3 && p - q > 1e-3)
            return b;
    }
}

/// Random birth-death parameters forced into the given branch of the closed form.
inline BirthDeathParams random_bd_in(std::mt19937_64& rng, BdBranch want)
{
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        BirthDeathParams b = random_bd(rng, U(rng) < 0.3);
        const double a0 = b.a0(), a1 = b.a1();
        switch (want) {
        case BdBranch::AboveA0: b.a = a0 + (1.0 - a0) * (0.02 + 0.96 * U(rng)); break;
        case BdBranch::SmallP:
        case BdBranch::BelowA1: b.a = a0 * (0.02 + 0.96 * U(rng)); break;
        case BdBranch::BetweenA1A0: b.a = a1 + (a0 - a1) * (0.02 + 0.96 * U(rng)); break;
        }
        if (!(b.a > 0.0 && b.a < 1.0))
            continue;
        const BdRate r = bd_rate_detail(b);
        if (r.branch == want && !r.tie)
            return b;
    }
    throw Error(ErrorCode::ParamsInvalid, "could not sample the requested branch");
}

inline std::vector<std::complex<double>> lambdas(const std::vector<CandidateEigenvalue>& c)
{
    std::vector<std::complex<double>> out;
    for (const auto& x : c)
        out.push_back(x.lambda);
    return out;
}

/// Every element of want lies within tol (per coordinate) of some element of got, and vice versa.
inline bool same_points(const std::vector<std::complex<double>>& got,
                        const std::vector<std::complex<double>>& want, double tol)
{
    auto near = [tol](std::complex<double> x, std::complex<double> y) {
        return std::abs(x.real() - y.real()) <= tol && std::abs(x.imag() - y.imag()) <= tol;
    };
    auto covered = [&](const auto& xs, const auto& ys) {
        return std::all_of(xs.begin(), xs.end(), [&](auto x) {
            return std::any_of(ys.begin(), ys.end(), [&](auto y) { return near(x, y); });
        });
    };
    return covered(got, want) && covered(want, got);
}

inline const PatternResult* find_pattern(const RateReport& r, const MultiplicityPattern& mu)
{
    for (const auto& p : r.resultant.per_pattern)
        if (p.pattern == mu)
            return &p;
    return nullptr;
}

}  // namespace support

#endif  // ERGORATE_TESTS_SUPPORT_HPP
