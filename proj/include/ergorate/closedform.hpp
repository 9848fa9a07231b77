#ifndef ERGORATE_CLOSEDFORM_HPP
#define ERGORATE_CLOSEDFORM_HPP

// Closed-form rate of the birth-death walk on N: increments -1, 0, +1 with
// probabilities p, r, q (p > q > 0) and P(0,0) = a, P(0,1) = 1 - a.

#include <cmath>
#include <string>

#include "error.hpp"
#include "rwmodel.hpp"

namespace ergorate {

struct BirthDeathParams {
    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
    double a = 0.0;

    double sqrt_pq() const { return std::sqrt(p * q); }
    double delta_hat() const { return r + 2.0 * sqrt_pq(); }
    double gamma_hat() const { return std::sqrt(p / q); }
    double a0() const { return 1.0 - q - sqrt_pq(); }
    double a1() const { return p - sqrt_pq() - std::sqrt(r * (r + 2.0 * sqrt_pq())); }

    RandomWalkModel model() const { return RandomWalkModel::birth_death(p, r, q, a); }
};

inline void check_params(const BirthDeathParams& b)
{
    const bool ok = std::isfinite(b.p) && std::isfinite(b.q) && std::isfinite(b.r)
                    && std::isfinite(b.a) && b.r >= 0.0 && b.q > 0.0 && b.p > b.q
                    && std::abs(b.p + b.q + b.r - 1.0) <= 1e-12 && b.a > 0.0 && b.a < 1.0;
    if (!ok)
        throw Error(ErrorCode::ParamsInvalid,
                    "need p + q + r = 1, p > q > 0, r >= 0 and a in (0,1); got p = "
                        + detail::fmt_num(b.p) + ", q = " + detail::fmt_num(b.q) + ", r = "
                        + detail::fmt_num(b.r) + ", a = " + detail::fmt_num(b.a));
}

enum class BdBranch {
    AboveA0,         // a in (a0, 1)
    SmallP,          // a in (0, a0] and 2p <= (1 - q + sqrt(pq))^2
    BelowA1,         // a in (0, a1]: the boundary eigenvalue lambda(a) dominates
    BetweenA1A0,     // a in [a1, a0)
};

inline std::string to_string(BdBranch b)
{
    switch (b) {
    case BdBranch::AboveA0: return "a in (a0,1)";
    case BdBranch::SmallP: return "a in (0,a0], 2p <= (1-q+sqrt(pq))^2";
    case BdBranch::BelowA1: return "a in (0,a1]";
    case BdBranch::BetweenA1A0: return "a in [a1,a0)";
    }
    return "";
}

struct BdRate {
    double value = 0.0;
    BdBranch branch = BdBranch::AboveA0;
    // a lies within 1e-12 of a0 or a1, or 2p within 1e-12 of (1-q+sqrt(pq))^2
    bool tie = false;
};

/// lambda(a) = a + p(1-a)/(a-1+q), the only candidate eigenvalue besides 1.
inline double bd_lambda(const BirthDeathParams& b)
{
    return b.a + b.p * (1.0 - b.a) / (b.a - 1.0 + b.q);
}

inline BdRate bd_rate_detail(const BirthDeathParams& b)
{
    check_params(b);
    const double a0 = b.a0(), a1 = b.a1();
    const double ess = b.delta_hat();
    const double s = 1.0 - b.q + b.sqrt_pq();
    BdRate out;
    out.tie = std::abs(b.a - a0) <= 1e-12 || std::abs(b.a - a1) <= 1e-12
              || std::abs(2.0 * b.p - s * s) <= 1e-12;
    if (b.a > a0) {
        out.branch = BdBranch::AboveA0;
        out.value = ess;
    } else if (2.0 * b.p <= s * s) {
        out.branch = BdBranch::SmallP;
        out.value = ess;
    } else if (b.a <= a1) {
        out.branch = BdBranch::BelowA1;
        out.value = std::abs(bd_lambda(b));
    } else {
        out.branch = BdBranch::BetweenA1A0;
        out.value = ess;
    }
    return out;
}

inline double bd_rate(const BirthDeathParams& b) { return bd_rate_detail(b).value; }

struct BdLambdaZ {
    double lambda_a = 0.0;
    double z_a = 0.0;
    // |z(a)| <= gamma_hat, equivalently |a - 1 + q| >= sqrt(pq)
    bool z_within_gamma_hat = false;
    // |a - 1 + q| within 1e-12 of sqrt(pq): |z(a)| = gamma_hat up to rounding
    bool on_boundary = false;
};

/// lambda(a) and the root z(a) = p/(a+q-1) of E_lambda(a) carrying its eigenfunction.
inline BdLambdaZ bd_lambda_z(const BirthDeathParams& b)
{
    check_params(b);
    const double den = b.a - 1.0 + b.q;
    if (std::abs(den) <= 1e-15)
        throw Error(ErrorCode::DegenerateA,
                    "a = 1 - q: the only solution of the boundary equation is lambda = 1");
    BdLambdaZ out;
    out.lambda_a = bd_lambda(b);
    out.z_a = b.p / den;
    out.z_within_gamma_hat = std::abs(den) >= b.sqrt_pq();
    out.on_boundary = std::abs(std::abs(den) - b.sqrt_pq()) <= 1e-12;
    return out;
}

}  // namespace ergorate

#endif  // ERGORATE_CLOSEDFORM_HPP
