#ifndef ERGORATE_SPECIALMODELS_HPP
#define ERGORATE_SPECIALMODELS_HPP

// Two walks with unbounded increments handled in closed form.
//
//  * Speksma-type walk: P(0,n) = q_n (n >= 1), P(n,0) = p, P(n,n+1) = q = 1-p.
//    rho_{V_gamma} <= max(q gamma, p) for gamma in (1, 1/q) with a finite
//    gamma-moment of q_n; -p is an eigenvalue with eigenvector (1,-p,-p,...).
//  * Rosen-type walk: P(0,n) = pi_n, P(n,0) = pi_0, P(n,n) = 1 - pi_0.
//    rho_V <= 1 - pi_0 and the only eigenvalues are 0 and 1.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "rwmodel.hpp"

namespace ergorate {

/// A probability law on n >= 1, either a finite list (weights[0] = mass at 1)
/// or geometric: mass (1 - theta) theta^{n-1} at n.
struct TailFamily {
    enum class Kind { Finite, Geometric };
    Kind kind = Kind::Geometric;
    std::vector<double> weights;
    double theta = 0.5;

    static TailFamily finite(std::vector<double> w) { return {Kind::Finite, std::move(w), 0.0}; }
    static TailFamily geometric(double theta) { return {Kind::Geometric, {}, theta}; }

    double mass(long n) const
    {
        if (n < 1)
            return 0.0;
        if (kind == Kind::Finite)
            return n <= static_cast<long>(weights.size()) ? weights[static_cast<std::size_t>(n - 1)]
                                                          : 0.0;
        return (1.0 - theta) * std::pow(theta, static_cast<double>(n - 1));
    }

    /// sum_n mass(n) gamma^n, in closed form for the geometric family.
    double moment(double gamma) const
    {
        if (kind == Kind::Finite) {
            double s = 0.0;
            for (std::size_t i = 0; i < weights.size(); ++i)
                s += weights[i] * std::pow(gamma, static_cast<double>(i + 1));
            return s;
        }
        if (!(theta * gamma < 1.0))
            throw Error(ErrorCode::MomentDiverges,
                        "geometric tail with theta * gamma = " + detail::fmt_num(theta * gamma)
                            + " >= 1");
        return (1.0 - theta) * gamma / (1.0 - theta * gamma);
    }

    void check() const
    {
        if (kind == Kind::Finite) {
            double s = 0.0;
            for (double w : weights) {
                if (!(w >= 0.0 && w <= 1.0))
                    throw Error(ErrorCode::InvalidModel, "tail weight outside [0,1]");
                s += w;
            }
            if (weights.empty() || std::abs(s - 1.0) > 1e-12)
                throw Error(ErrorCode::InvalidModel, "tail weights sum to " + detail::fmt_num(s));
        } else if (!(theta >= 0.0 && theta < 1.0)) {
            throw Error(ErrorCode::InvalidModel, "geometric tail needs theta in [0,1)");
        }
    }
};

struct SpeksmaModel {
    double p = 0.5;
    TailFamily boundary_row = TailFamily::geometric(0.5);

    double q() const { return 1.0 - p; }

    void check() const
    {
        if (!(p > 0.0 && p < 1.0))
            throw Error(ErrorCode::InvalidModel, "p must lie in (0,1)");
        boundary_row.check();
    }

    double prob(long i, long j) const
    {
        if (i < 0 || j < 0)
            throw Error(ErrorCode::IndexError, "negative state index");
        if (i == 0)
            return boundary_row.mass(j);
        return j == 0 ? p : (j == i + 1 ? q() : 0.0);
    }

    /// Leading N x N block of P.
    Eigen::MatrixXd truncation(int N) const
    {
        Eigen::MatrixXd P = Eigen::MatrixXd::Zero(N, N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                P(i, j) = prob(i, j);
        return P;
    }
};

struct SpeksmaBound {
    double bound = 0.0;       // max(q gamma, p)
    double ress_bound = 0.0;  // q gamma
};

inline SpeksmaBound speksma_bound(const SpeksmaModel& m, double gamma)
{
    m.check();
    if (!(gamma > 1.0 && gamma < 1.0 / m.q()))
        throw Error(ErrorCode::GammaOutOfRange,
                    "gamma must lie in (1, 1/q) = (1, " + detail::fmt_num(1.0 / m.q()) + ")");
    (void)m.boundary_row.moment(gamma);
    return {std::max(m.q() * gamma, m.p), m.q() * gamma};
}

/// (P V_gamma)(n), V_gamma(n) = gamma^n; equals q gamma^{n+1} + p for n >= 1.
inline double speksma_PV(const SpeksmaModel& m, double gamma, long n)
{
    if (n == 0)
        return m.boundary_row.moment(gamma);
    return m.p + m.q() * std::pow(gamma, static_cast<double>(n + 1));
}

/// max over rows 0..rows-1 of |(P f_p)(i) + p f_p(i)| with f_p = (1, -p, -p, ...).
inline double speksma_eigencheck(const SpeksmaModel& m, int rows = 201)
{
    m.check();
    auto f = [&](long n) { return n == 0 ? 1.0 : -m.p; };
    double worst = 0.0;
    for (long i = 0; i < rows; ++i) {
        double Pf;
        if (i == 0) {
            // f is constant (= -p) on the support n >= 1 of row 0
            double mass = 1.0;
            if (m.boundary_row.kind == TailFamily::Kind::Finite) {
                mass = 0.0;
                for (double w : m.boundary_row.weights)
                    mass += w;
            }
            Pf = -m.p * mass;
        } else {
            Pf = m.p * f(0) + m.q() * f(i + 1);
        }
        worst = std::max(worst, std::abs(Pf + m.p * f(i)));
    }
    return worst;
}

struct RosenModel {
    double pi0 = 0.5;
    // law of n >= 1 given n >= 1; pi_n = (1 - pi0) * tail.mass(n)
    TailFamily tail = TailFamily::geometric(0.5);

    /// The instance with pi0 = 1/2 and w_n = pi_n geometric.
    static RosenModel rosenthal(double theta = 0.5) { return {0.5, TailFamily::geometric(theta)}; }

    void check() const
    {
        if (!(pi0 > 0.0 && pi0 < 1.0))
            throw Error(ErrorCode::InvalidModel, "pi_0 must lie in (0,1)");
        tail.check();
    }

    double pi(long n) const { return n == 0 ? pi0 : (1.0 - pi0) * tail.mass(n); }

    double prob(long i, long j) const
    {
        if (i < 0 || j < 0)
            throw Error(ErrorCode::IndexError, "negative state index");
        if (i == 0)
            return pi(j);
        return j == 0 ? pi0 : (j == i ? 1.0 - pi0 : 0.0);
    }

    Eigen::MatrixXd truncation(int N) const
    {
        Eigen::MatrixXd P = Eigen::MatrixXd::Zero(N, N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                P(i, j) = prob(i, j);
        return P;
    }

    /// pi(V_gamma) = sum pi_n gamma^n.
    double pi_V(double gamma) const { return pi0 + (1.0 - pi0) * tail.moment(gamma); }
};

struct RosenRate {
    double bound = 0.0;
    std::vector<double> eigenvalues;  // point spectrum: {0, 1}
};

/// rho_V <= 1 - pi0 for V = V_gamma, provided pi(V_gamma) is finite.
inline RosenRate rosen_rate(const RosenModel& m, double gamma)
{
    m.check();
    if (!(gamma > 1.0))
        throw Error(ErrorCode::GammaOutOfRange, "gamma must exceed 1");
    (void)m.pi_V(gamma);
    return {1.0 - m.pi0, {0.0, 1.0}};
}

/// (P V_gamma)(n): pi(V) at 0, pi0 + (1 - pi0) gamma^n for n >= 1.
inline double rosen_PV(const RosenModel& m, double gamma, long n)
{
    if (n == 0)
        return m.pi_V(gamma);
    return m.pi0 + (1.0 - m.pi0) * std::pow(gamma, static_cast<double>(n));
}

/// Residual of P f = lambda f over rows 0..rows-1 for f(0) = 1 and
/// f(n) = pi0 / (lambda - 1 + pi0), n >= 1.
inline double rosen_eigen_residual(const RosenModel& m, double lambda, int rows = 201)
{
    m.check();
    const double fn = m.pi0 / (lambda - 1.0 + m.pi0);
    // row 0: pi0 f(0) + (1 - pi0) f(n)
    double worst = std::abs(m.pi0 + (1.0 - m.pi0) * fn - lambda);
    for (int i = 1; i < rows; ++i)
        worst = std::max(worst, std::abs(m.pi0 + (1.0 - m.pi0) * fn - lambda * fn));
    return worst;
}

}  // namespace ergorate

#endif  // ERGORATE_SPECIALMODELS_HPP
