#ifndef ERGORATE_SPECTRUM_HPP
#define ERGORATE_SPECTRUM_HPP

// The characteristic polynomial E_lambda(z) = z^g (phi(z) - lambda) over the
// annulus delta < |lambda| < 1: counting its roots inside |z| < gamma, the
// constancy of that count, the tau-refined count and the growth envelope of
// generalized eigenfunctions.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "drift.hpp"
#include "error.hpp"
#include "polycalc.hpp"
#include "rwmodel.hpp"

namespace ergorate {

/// Seed for every quasi-random scan: ERGORATE_SEED if set, else 0.
inline std::uint64_t default_seed()
{
    if (const char* s = std::getenv("ERGORATE_SEED"))
        return std::strtoull(s, nullptr, 10);
    return 0;
}

inline ComplexPoly char_poly(const IncrementLaw& law, cplx lambda)
{
    std::vector<cplx> c(static_cast<std::size_t>(law.g + law.d + 1));
    for (int k = -law.g; k <= law.d; ++k)
        c[static_cast<std::size_t>(k + law.g)] = law.at(k);
    c[static_cast<std::size_t>(law.g)] -= lambda;
    return ComplexPoly(std::move(c));
}

inline ComplexPoly char_poly(const RandomWalkModel& model, cplx lambda)
{
    return char_poly(model.law, lambda);
}

/// E_lambda as a polynomial in z with coefficients polynomial in lambda.
inline LambdaPoly char_poly_lambda(const IncrementLaw& law)
{
    std::vector<ComplexPoly> rows;
    for (int k = -law.g; k <= law.d; ++k) {
        if (k == 0)
            rows.push_back(ComplexPoly{law.at(k), -1.0});
        else
            rows.push_back(ComplexPoly{law.at(k)});
    }
    return LambdaPoly(std::move(rows));
}

struct Annulus {
    double inner = 0.0;
    double outer = 1.0;
    double margin = 1e-6;

    bool contains(cplx lambda) const noexcept
    {
        const double r = std::abs(lambda);
        return r > inner + margin && r < outer - margin;
    }
};

inline Annulus annulus(const DriftProfile& profile, double margin = 1e-6)
{
    return {profile.delta, 1.0, margin};
}

/// n points of the annulus from a randomly shifted Halton sequence in
/// (log-radius, angle).
inline std::vector<cplx> sample_annulus(const Annulus& ann, int n, std::uint64_t seed)
{
    auto radical_inverse = [](unsigned long i, unsigned base) {
        double f = 1.0, r = 0.0;
        while (i > 0) {
            f /= base;
            r += f * static_cast<double>(i % base);
            i /= base;
        }
        return r;
    };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double s1 = u(rng), s2 = u(rng);
    const double lo = std::log(ann.inner + ann.margin);
    const double hi = std::log(ann.outer - ann.margin);
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = std::fmod(radical_inverse(static_cast<unsigned long>(i + 1), 2) + s1, 1.0);
        const double y = std::fmod(radical_inverse(static_cast<unsigned long>(i + 1), 3) + s2, 1.0);
        out.push_back(std::polar(std::exp(lo + x * (hi - lo)), 2.0 * std::numbers::pi * y));
    }
    return out;
}

struct InsideRootReport {
    cplx lambda;
    RootSet roots_inside;
    RootSet roots_outside;
    int N = 0;
    double min_circle_gap = 0.0;
};

/// Splits the roots of E_lambda by |z| < gamma (the working weight).
inline InsideRootReport count_inside(const RandomWalkModel& model, const DriftProfile& profile,
                                     cplx lambda)
{
    const RootSet all = find_roots(char_poly(model, lambda));
    InsideRootReport rep;
    rep.lambda = lambda;
    rep.roots_inside.cluster_tol = all.cluster_tol;
    rep.roots_outside.cluster_tol = all.cluster_tol;
    rep.min_circle_gap = std::numeric_limits<double>::infinity();
    const double g = profile.gamma;
    for (const Root& r : all.roots) {
        const double gap = std::abs(std::abs(r.value) - g);
        rep.min_circle_gap = std::min(rep.min_circle_gap, gap);
        if (gap < 1e-8 * g)
            throw Error(ErrorCode::RootOnCircle,
                        "root of modulus " + detail::fmt_num(std::abs(r.value))
                            + " on the circle |z| = " + detail::fmt_num(g));
        if (std::abs(r.value) < g) {
            rep.roots_inside.roots.push_back(r);
            rep.N += r.multiplicity;
        } else {
            rep.roots_outside.roots.push_back(r);
        }
    }
    return rep;
}

/// The common value of N(lambda) over `samples` annulus points.
inline int eta(const RandomWalkModel& model, const DriftProfile& profile, int samples = 64,
               std::uint64_t seed = default_seed())
{
    int value = -1;
    for (cplx lam : sample_annulus(annulus(profile), samples, seed)) {
        const int n = count_inside(model, profile, lam).N;
        if (value < 0)
            value = n;
        else if (n != value)
            throw Error(ErrorCode::InconsistentCount,
                        "N(lambda) = " + std::to_string(n) + " differs from " + std::to_string(value));
    }
    return value;
}

/// tau(lambda) = ln|lambda| / ln delta.
inline double tau(cplx lambda, const DriftProfile& profile)
{
    return std::log(std::abs(lambda)) / std::log(profile.delta);
}

struct PsiNegaReport {
    bool holds = false;
    // max over the grid of phi(t) - t^{ln delta / ln gamma}; negative when the condition holds
    double max_margin = 0.0;
};

/// Checks phi(t) < t^{ln delta / ln gamma} on a 1000-point interior grid of (1, gamma).
inline PsiNegaReport check_psi_nega(const IncrementLaw& law, const DriftProfile& profile,
                                    int grid = 1000)
{
    const double e = std::log(profile.delta) / std::log(profile.gamma);
    PsiNegaReport rep;
    rep.max_margin = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= grid; ++i) {
        const double t = 1.0 + (profile.gamma - 1.0) * i / (grid + 1.0);
        rep.max_margin = std::max(rep.max_margin, phi_eval(law, t) - std::pow(t, e));
    }
    rep.holds = rep.max_margin < 0.0;
    return rep;
}

inline PsiNegaReport check_psi_nega(const RandomWalkModel& model, const DriftProfile& profile)
{
    return check_psi_nega(model.law, profile);
}

/// N'(lambda): roots of E_lambda with |z| < gamma^tau(lambda), with multiplicity.
inline int count_inside_tau(const RandomWalkModel& model, const DriftProfile& profile,
                            cplx lambda)
{
    const double radius = std::pow(profile.gamma, tau(lambda, profile));
    int n = 0;
    for (const Root& r : find_roots(char_poly(model, lambda)).roots) {
        if (std::abs(std::abs(r.value) - radius) < 1e-8 * radius)
            throw Error(ErrorCode::RootOnTauCircle,
                        "root of modulus " + detail::fmt_num(std::abs(r.value))
                            + " on the circle |z| = gamma^tau");
        if (std::abs(r.value) < radius)
            n += r.multiplicity;
    }
    return n;
}

struct GrowthBound {
    double exponent = 0.0;
    double log_power = 0.0;
};

/// |f| <= c V^{exponent} (1 + ln V)^{log_power} for a generalized eigenfunction
/// of order p_order at lambda.
inline GrowthBound growth_bound(cplx lambda, int p_order, double delta)
{
    const double r = std::abs(lambda);
    if (!(r >= delta && r <= 1.0) || !(delta > 0.0 && delta < 1.0))
        throw Error(ErrorCode::LambdaOutOfRange,
                    "|lambda| = " + detail::fmt_num(r) + " outside [delta, 1]");
    if (p_order < 1)
        throw Error(ErrorCode::NonPositiveArgument, "order must be positive");
    return {std::log(r) / std::log(delta), p_order * (p_order - 1) / 2.0};
}

}  // namespace ergorate

#endif  // ERGORATE_SPECTRUM_HPP
