#ifndef ERGORATE_DRIFT_HPP
#define ERGORATE_DRIFT_HPP

// Drift profile of an increment law: phi(t) = sum a_k t^k, its second
// crossing gamma0 of the level 1, its minimizer gamma_hat on (1, inf) and the
// minimum delta_hat = phi(gamma_hat), which is the essential spectral radius
// of the walk on the weighted space with weight gamma_hat^n.

#include <cmath>
#include <string>
#include <vector>

#include "error.hpp"
#include "rwmodel.hpp"

namespace ergorate {

struct DriftProfile {
    double gamma0 = 0.0;
    double gamma_hat = 0.0;
    double delta_hat = 0.0;
    IncrementLaw law;
    // Weight actually used for the analysis and the matching radius phi(gamma).
    // Both equal gamma_hat / delta_hat unless overridden.
    double gamma = 0.0;
    double delta = 0.0;
};

inline double phi_eval(const IncrementLaw& law, double t)
{
    if (!(t > 0.0))
        throw Error(ErrorCode::NonPositiveArgument, "phi evaluated at t = " + detail::fmt_num(t));
    double s = 0.0;
    for (int k = -law.g; k <= law.d; ++k)
        s += law.at(k) * std::pow(t, k);
    return s;
}

inline double phi_derivative(const IncrementLaw& law, double t)
{
    if (!(t > 0.0))
        throw Error(ErrorCode::NonPositiveArgument, "phi' evaluated at t = " + detail::fmt_num(t));
    double s = 0.0;
    for (int k = -law.g; k <= law.d; ++k)
        if (k != 0)
            s += k * law.at(k) * std::pow(t, k - 1);
    return s;
}

inline double phi_second_derivative(const IncrementLaw& law, double t)
{
    double s = 0.0;
    for (int k = -law.g; k <= law.d; ++k)
        if (k != 0 && k != 1)
            s += k * (k - 1) * law.at(k) * std::pow(t, k - 2);
    return s;
}

/// phi evaluated at a complex point.
inline cplx phi_eval(const IncrementLaw& law, cplx z)
{
    cplx s = 0.0;
    for (int k = -law.g; k <= law.d; ++k)
        s += law.at(k) * std::pow(z, k);
    return s;
}

inline bool check_neri(const IncrementLaw& law) { return law.mean_increment() < 0.0; }

namespace detail {

// Bisection for a sign change of f on [lo, hi], to absolute width tol.
template <class F>
double bisect(F&& f, double lo, double hi, double tol = 1e-14)
{
    double flo = f(lo);
    for (int it = 0; it < 400 && hi - lo > tol * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// gamma0, gamma_hat and delta_hat. gamma_hat is the zero of phi' on (1, inf)
/// (phi is strictly convex there with phi'(1) = mean increment < 0); gamma0 is
/// the crossing of phi = 1 beyond gamma_hat.
inline DriftProfile compute_profile(const IncrementLaw& law)
{
    if (!check_neri(law))
        throw Error(ErrorCode::NeriViolated,
                    "mean increment " + detail::fmt_num(law.mean_increment())
                        + " is not negative: not geometrically contracting under V_gamma for "
                          "any gamma > 1 via this criterion");
    if (!(law.at(law.d) > 0.0) || !(law.at(-law.g) > 0.0))
        throw Error(ErrorCode::InvalidModel, "a_{-g} and a_d must be positive");

    double hi = 2.0;
    while (phi_derivative(law, hi) <= 0.0) {
        hi *= 2.0;
        if (hi > 1e150)
            throw Error(ErrorCode::NonConvergence, "phi' has no sign change on (1, inf)");
    }
    double gh = detail::bisect([&](double t) { return phi_derivative(law, t); }, 1.0, hi);
    for (int it = 0; it < 3; ++it) {
        const double h2 = phi_second_derivative(law, gh);
        if (h2 > 0.0)
            gh -= phi_derivative(law, gh) / h2;
    }

    double top = 2.0 * gh;
    while (phi_eval(law, top) <= 1.0) {
        top *= 2.0;
        if (top > 1e150)
            throw Error(ErrorCode::NonConvergence, "phi never exceeds 1 on (1, inf)");
    }
    double g0 = detail::bisect([&](double t) { return phi_eval(law, t) - 1.0; }, gh, top);
    for (int it = 0; it < 3; ++it) {
        const double d1 = phi_derivative(law, g0);
        if (d1 > 0.0)
            g0 -= (phi_eval(law, g0) - 1.0) / d1;
    }

    DriftProfile p;
    p.gamma0 = g0;
    p.gamma_hat = gh;
    p.delta_hat = phi_eval(law, gh);
    p.law = law;
    p.gamma = gh;
    p.delta = p.delta_hat;
    return p;
}

/// Profile whose working weight is gamma in (1, gamma0) instead of gamma_hat.
inline DriftProfile profile_at(const IncrementLaw& law, double gamma)
{
    DriftProfile p = compute_profile(law);
    if (!(gamma > 1.0 && gamma < p.gamma0))
        throw Error(ErrorCode::GammaOutOfRange, "gamma must lie in (1, gamma0 = "
                                                    + detail::fmt_num(p.gamma0) + ")");
    p.gamma = gamma;
    p.delta = phi_eval(law, gamma);
    return p;
}

/// Essential spectral radius on the space weighted by gamma^n of a walk whose
/// (possibly state-dependent) increment laws converge to limit_law. The limit
/// law may put no mass on upward jumps.
inline double ress_limit(const IncrementLaw& limit_law, double gamma)
{
    if (!(gamma > 1.0))
        throw Error(ErrorCode::GammaOutOfRange, "gamma must exceed 1");
    const double v = phi_eval(limit_law, gamma);
    if (!(v < 1.0))
        throw Error(ErrorCode::PhiNotContracting,
                    "phi(gamma) = " + detail::fmt_num(v) + " is not below 1");
    return v;
}

}  // namespace ergorate

#endif  // ERGORATE_DRIFT_HPP
