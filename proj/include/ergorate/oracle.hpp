#ifndef ERGORATE_ORACLE_HPP
#define ERGORATE_ORACLE_HPP

// Finite-section cross-checks: the leading N x N block of P conjugated by the
// weight gamma^n (W(i,j) = gamma^{j-i} P(i,j), the matrix of P in the basis
// normalized by V_gamma), its sub-dominant spectrum, and the stationary law
// of the row-renormalized block. Mass leaving the block is dropped, never
// reflected, so the boundary rows are reproduced exactly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "drift.hpp"
#include "error.hpp"
#include "rwmodel.hpp"

namespace ergorate {

struct WeightedTruncation {
    int N = 0;
    double gamma = 1.0;
    Eigen::MatrixXd W;
    // max over rows of the discarded gamma-weighted mass
    double clipped_mass = 0.0;
};

namespace detail {

template <class Prob>
WeightedTruncation weighted_block(int N, double gamma, Prob&& prob, long reach)
{
    WeightedTruncation t;
    t.N = N;
    t.gamma = gamma;
    t.W = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const double pr = prob(i, j);
            if (pr != 0.0)
                t.W(i, j) = std::pow(gamma, j - i) * pr;
        }
        double clipped = 0.0;
        for (long j = N; j < N + reach; ++j) {
            const double pr = prob(i, j);
            if (pr != 0.0)
                clipped += std::pow(gamma, static_cast<double>(j - i)) * pr;
        }
        t.clipped_mass = std::max(t.clipped_mass, clipped);
    }
    return t;
}

}  // namespace detail

inline WeightedTruncation truncate(const RandomWalkModel& model, int N, double gamma)
{
    if (N <= model.g() + model.d() + model.c())
        throw Error(ErrorCode::SizeTooSmall,
                    "truncation size must exceed g + d + c = "
                        + std::to_string(model.g() + model.d() + model.c()));
    return detail::weighted_block(
        N, gamma, [&](long i, long j) { return model.prob(i, j); }, model.d() + model.c() + 1);
}

/// Weighted block of an explicitly given finite section P_N of a kernel.
inline WeightedTruncation truncate(const Eigen::MatrixXd& block, double gamma)
{
    if (block.rows() != block.cols() || block.rows() < 2)
        throw Error(ErrorCode::SizeTooSmall, "truncation block must be square with size >= 2");
    const int N = static_cast<int>(block.rows());
    WeightedTruncation t = detail::weighted_block(
        N, gamma, [&](long i, long j) { return j < N ? block(i, j) : 0.0; }, 0);
    for (int i = 0; i < N; ++i)
        t.clipped_mass = std::max(t.clipped_mass, 1.0 - block.row(i).sum());
    return t;
}

/// Eigenvalues of W sorted by decreasing modulus.
inline std::vector<std::complex<double>> truncated_spectrum(const WeightedTruncation& t)
{
    Eigen::EigenSolver<Eigen::MatrixXd> es(t.W, false);
    if (es.info() != Eigen::Success)
        throw Error(ErrorCode::NonConvergence, "eigenvalue iteration on the truncation failed");
    std::vector<std::complex<double>> ev(es.eigenvalues().data(),
                                         es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), [](auto a, auto b) { return std::abs(a) > std::abs(b); });
    return ev;
}

/// Second-largest eigenvalue modulus of the truncation after removing the
/// Perron root. A biased finite-size estimate of the V-geometric rate.
inline double empirical_rate(const WeightedTruncation& t)
{
    const auto ev = truncated_spectrum(t);
    if (ev.size() < 2)
        throw Error(ErrorCode::SizeTooSmall, "truncation has fewer than two eigenvalues");
    return std::abs(ev[1]);
}

inline double empirical_rate(const RandomWalkModel& model, int N, double gamma)
{
    return empirical_rate(truncate(model, N, gamma));
}

/// Same, with gamma = gamma_hat of the model's increment law.
inline double empirical_rate(const RandomWalkModel& model, int N)
{
    return empirical_rate(model, N, compute_profile(model.law).gamma_hat);
}

/// Stationary law of the row-renormalized finite section P_N.
inline std::vector<double> stationary(const Eigen::MatrixXd& block)
{
    const int N = static_cast<int>(block.rows());
    Eigen::MatrixXd P = block;
    for (int i = 0; i < N; ++i) {
        const double s = P.row(i).sum();
        if (!(s > 0.0))
            throw Error(ErrorCode::NonConvergence, "row " + std::to_string(i) + " has no mass");
        P.row(i) /= s;
    }
    // pi (P - I) = 0 with the last equation replaced by sum pi = 1
    Eigen::MatrixXd A = (P - Eigen::MatrixXd::Identity(N, N)).transpose();
    A.row(N - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
    rhs(N - 1) = 1.0;
    const Eigen::VectorXd pi = A.fullPivLu().solve(rhs);
    const double res = (pi.transpose() * P - pi.transpose()).lpNorm<1>();
    if (!(res <= 1e-10))
        throw Error(ErrorCode::NonConvergence,
                    "stationary residual " + detail::fmt_num(res) + " above 1e-10");
    std::vector<double> out(pi.data(), pi.data() + N);
    for (double& x : out)
        x = std::max(x, 0.0);
    return out;
}

inline std::vector<double> stationary(const RandomWalkModel& model, int N)
{
    if (N <= model.g() + model.d() + model.c())
        throw Error(ErrorCode::SizeTooSmall, "truncation size too small");
    Eigen::MatrixXd P(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            P(i, j) = model.prob(i, j);
    return stationary(P);
}

}  // namespace ergorate

#endif  // ERGORATE_ORACLE_HPP
