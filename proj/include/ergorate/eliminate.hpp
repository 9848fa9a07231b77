#ifndef ERGORATE_ELIMINATE_HPP
#define ERGORATE_ELIMINATE_HPP

// Eigenvalues of the walk in the annulus delta < |lambda| < 1 and the
// resulting convergence rate rho = max(delta, max |lambda|).
//
// A lambda in the annulus is an eigenvalue iff the boundary equations
// lambda f(i) = (Pf)(i), i < g, admit a nonzero solution f in the span of the
// generalized powers z^{(k)} attached to the roots of E_lambda inside
// |z| < gamma. Two independent routes search for such lambda:
//
//  * resultant route: for each multiplicity pattern the boundary determinant,
//    written in the divided-difference basis (which already removes the
//    confluent Vandermonde factor), is a polynomial P0(lambda, z_1..z_s); the
//    z-variables are eliminated against E_lambda by successive resultants,
//    leaving a univariate polynomial in lambda whose roots are the candidates.
//  * detector route: h(lambda) = det of the divided-difference boundary matrix
//    of the inside roots is analytic on the annulus and vanishes exactly at
//    the eigenvalues; a grid scan of its normalized smallest singular value
//    seeds damped Newton, and the argument principle certifies the count.
//
// Every candidate from either route is accepted only after the boundary
// system is shown to be singular and the reconstructed eigenfunction
// satisfies the full eigen-equation on a window of states.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "drift.hpp"
#include "error.hpp"
#include "polycalc.hpp"
#include "rwmodel.hpp"
#include "spectrum.hpp"

namespace ergorate {

/// Nondecreasing parts summing to eta.
using MultiplicityPattern = std::vector<int>;

inline std::string to_string(const MultiplicityPattern& mu)
{
    std::string s = "(";
    for (std::size_t i = 0; i < mu.size(); ++i)
        s += (i ? "," : "") + std::to_string(mu[i]);
    return s + ")";
}

/// All partitions of eta with parts in nondecreasing order, most parts first.
inline std::vector<MultiplicityPattern> patterns(int eta)
{
    std::vector<MultiplicityPattern> out;
    if (eta < 1)
        return out;
    MultiplicityPattern cur;
    auto rec = [&](auto&& self, int remaining, int min_part) -> void {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = min_part; p <= remaining; ++p) {
            cur.push_back(p);
            self(self, remaining - p, p);
            cur.pop_back();
        }
    };
    rec(rec, eta, 1);
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return out;
}

inline MultiplicityPattern pattern_of(const RootSet& roots)
{
    MultiplicityPattern mu;
    for (const Root& r : roots.roots)
        mu.push_back(r.multiplicity);
    std::sort(mu.begin(), mu.end());
    return mu;
}

inline bool all_simple(const MultiplicityPattern& mu)
{
    return std::all_of(mu.begin(), mu.end(), [](int m) { return m == 1; });
}

/// Boundary system in the generalized-power basis: entry (i, (z,k)) is
/// (P z^{(k)})(i) - lambda z^{(k)}(i) for i < g; columns follow the order of
/// the roots, k = 1..m_z within each root.
inline Eigen::MatrixXcd boundary_matrix(const RandomWalkModel& model, cplx lambda,
                                        const RootSet& inside_roots)
{
    if (inside_roots.total_multiplicity() == 0)
        throw Error(ErrorCode::PatternMismatch, "no inside roots to build the boundary system");
    const int g = model.g();
    Eigen::MatrixXcd B(g, inside_roots.total_multiplicity());
    int col = 0;
    for (const Root& r : inside_roots.roots)
        for (int k = 1; k <= r.multiplicity; ++k, ++col)
            for (int i = 0; i < g; ++i) {
                const auto zk = [&](long n) { return generalized_power(r.value, k, n); };
                B(i, col) = apply_P(model, zk, i) - lambda * zk(i);
            }
    return B;
}

namespace detail {

// Magnitude scale of each boundary column: norm over rows of
// sum_j P(i,j)|z^{(k)}(j)| + |lambda| |z^{(k)}(i)|.
inline Eigen::VectorXd boundary_column_scale(const RandomWalkModel& model, cplx lambda,
                                             const RootSet& inside_roots)
{
    const int g = model.g();
    Eigen::VectorXd s(inside_roots.total_multiplicity());
    int col = 0;
    for (const Root& r : inside_roots.roots)
        for (int k = 1; k <= r.multiplicity; ++k, ++col) {
            double sq = 0.0;
            for (int i = 0; i < g; ++i) {
                double m = std::abs(lambda) * std::abs(generalized_power(r.value, k, i));
                for (const auto& [j, pr] : model.row(i))
                    m += pr * std::abs(generalized_power(r.value, k, j));
                sq += m * m;
            }
            s(col) = std::sqrt(sq);
        }
    return s;
}

// Coefficients of c_i(z) = sum_j P(i,j) z^j - lambda z^i, i < g.
inline std::vector<std::vector<cplx>> boundary_polys(const RandomWalkModel& model, cplx lambda)
{
    const int g = model.g();
    const int deg = std::max(model.c(), g - 1);
    std::vector<std::vector<cplx>> c(static_cast<std::size_t>(g),
                                     std::vector<cplx>(static_cast<std::size_t>(deg + 1), 0.0));
    for (int i = 0; i < g; ++i) {
        for (const auto& [j, pr] : model.row(i))
            c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += pr;
        c[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] -= lambda;
    }
    return c;
}

// H[j][m] = complete homogeneous symmetric polynomial h_m(x_1..x_j).
template <class T>
std::vector<std::vector<T>> complete_homogeneous(const std::vector<T>& x, int maxdeg)
{
    const std::size_t J = x.size();
    std::vector<std::vector<T>> H(J + 1, std::vector<T>(static_cast<std::size_t>(maxdeg + 1), T(0)));
    H[0][0] = T(1);
    for (std::size_t j = 1; j <= J; ++j) {
        H[j][0] = T(1);
        for (int m = 1; m <= maxdeg; ++m)
            H[j][static_cast<std::size_t>(m)] =
                H[j - 1][static_cast<std::size_t>(m)] + x[j - 1] * H[j][static_cast<std::size_t>(m - 1)];
    }
    return H;
}

}  // namespace detail

/// Boundary system in the divided-difference basis: column j is the divided
/// difference of c_i over nodes x_1..x_j. Repeated nodes give derivatives, so
/// the matrix stays well conditioned when inside roots coalesce; its
/// determinant equals det(c_i(x_j)) divided by the (confluent) Vandermonde.
inline Eigen::MatrixXcd dd_boundary_matrix(const RandomWalkModel& model, cplx lambda,
                                           const std::vector<cplx>& nodes,
                                           Eigen::VectorXd* column_scale = nullptr)
{
    const auto polys = detail::boundary_polys(model, lambda);
    const int g = model.g();
    const int deg = static_cast<int>(polys.front().size()) - 1;
    const int J = static_cast<int>(nodes.size());
    const auto H = detail::complete_homogeneous(nodes, deg);
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(g, J);
    for (int i = 0; i < g; ++i)
        for (int j = 1; j <= J; ++j)
            for (int n = j - 1; n <= deg; ++n)
                D(i, j - 1) += polys[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)]
                               * H[static_cast<std::size_t>(j)][static_cast<std::size_t>(n - j + 1)];
    if (column_scale) {
        std::vector<double> absx(nodes.size());
        for (std::size_t k = 0; k < nodes.size(); ++k)
            absx[k] = std::abs(nodes[k]);
        const auto Ha = detail::complete_homogeneous(absx, deg);
        column_scale->resize(J);
        for (int j = 1; j <= J; ++j) {
            double sq = 0.0;
            for (int i = 0; i < g; ++i) {
                double m = 0.0;
                for (int n = j - 1; n <= deg; ++n)
                    m += std::abs(polys[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)])
                         * Ha[static_cast<std::size_t>(j)][static_cast<std::size_t>(n - j + 1)];
                sq += m * m;
            }
            (*column_scale)(j - 1) = std::sqrt(sq);
        }
    }
    return D;
}

/// P0(lambda, z_1..z_s) for a pattern: the divided-difference boundary
/// determinant with node z_i repeated m_i times.
inline cplx pattern_determinant(const RandomWalkModel& model, const MultiplicityPattern& mu,
                                cplx lambda, const std::vector<cplx>& z)
{
    std::vector<cplx> nodes;
    for (std::size_t i = 0; i < mu.size(); ++i)
        nodes.insert(nodes.end(), static_cast<std::size_t>(mu[i]), z[i]);
    return dd_boundary_matrix(model, lambda, nodes).determinant();
}

/// h(lambda): the divided-difference boundary determinant over the roots of
/// E_lambda inside |z| < gamma. Throws PatternMismatch if that set does not
/// have exactly g elements (lambda outside the annulus).
inline cplx boundary_determinant(const RandomWalkModel& model, const DriftProfile& profile,
                                 cplx lambda)
{
    const InsideRootReport rep = count_inside(model, profile, lambda);
    if (rep.N != model.g())
        throw Error(ErrorCode::PatternMismatch, "inside-root count differs from g");
    return dd_boundary_matrix(model, lambda, rep.roots_inside.expanded()).determinant();
}

/// Smallest singular value of the column-normalized divided-difference
/// boundary matrix; zero exactly when the boundary system is singular.
inline double detector(const RandomWalkModel& model, const DriftProfile& profile, cplx lambda)
{
    const InsideRootReport rep = count_inside(model, profile, lambda);
    Eigen::VectorXd scale;
    Eigen::MatrixXcd D = dd_boundary_matrix(model, lambda, rep.roots_inside.expanded(), &scale);
    for (int j = 0; j < D.cols(); ++j) {
        if (scale(j) == 0.0)
            return 0.0;
        D.col(j) /= scale(j);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(D);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

struct CandidateEigenvalue {
    cplx lambda;
    MultiplicityPattern pattern;
    RootSet inside_roots;
    std::vector<cplx> kernel_vector;
    double sigma_min = 1.0;
    double boundary_residual = 0.0;
    double recurrence_residual = 0.0;
    int kernel_dim = 0;
    bool accepted = false;
    std::string reason;
    std::string source;

    /// The ansatz f = sum alpha z^{(k)} with the kernel coefficients.
    SequenceAnsatz eigenfunction() const
    {
        SequenceAnsatz f;
        std::size_t c = 0;
        for (const Root& r : inside_roots.roots)
            for (int k = 1; k <= r.multiplicity; ++k, ++c)
                f.terms.push_back({r.value, k, kernel_vector[c]});
        return f;
    }

    /// Inside roots carrying a coefficient above 1e-8 of the largest.
    std::vector<cplx> active_roots() const
    {
        double mx = 0.0;
        for (const cplx& a : kernel_vector)
            mx = std::max(mx, std::abs(a));
        std::vector<cplx> out;
        std::size_t c = 0;
        for (const Root& r : inside_roots.roots) {
            bool active = false;
            for (int k = 1; k <= r.multiplicity; ++k, ++c)
                active = active || std::abs(kernel_vector[c]) > 1e-8 * mx;
            if (active)
                out.push_back(r.value);
        }
        return out;
    }
};

namespace detail {

struct Polished {
    cplx lambda;
    cplx h;
    bool ok = false;
};

// Damped Newton on h with a central-difference derivative. Steps that leave
// the annulus' outer region or fail to lower |h| are halved.
inline Polished newton_on_h(const RandomWalkModel& model, const DriftProfile& profile, cplx lam,
                            int max_iter = 40)
{
    auto H = [&](cplx l, cplx& out) {
        if (!(std::abs(l) > profile.delta))
            return false;
        try {
            out = boundary_determinant(model, profile, l);
            return true;
        } catch (const Error&) {
            return false;
        }
    };
    Polished res{lam, 0.0, false};
    if (!H(lam, res.h))
        return res;
    for (int it = 0; it < max_iter; ++it) {
        const double eps = 1e-7 * std::max(1.0, std::abs(res.lambda));
        cplx hp, hm;
        if (!H(res.lambda + eps, hp) || !H(res.lambda - eps, hm))
            break;
        const cplx dh = (hp - hm) / (2.0 * eps);
        if (dh == cplx{0.0})
            break;
        cplx step = res.h / dh;
        bool moved = false;
        for (int half = 0; half < 30; ++half) {
            cplx hn;
            const cplx cand = res.lambda - step;
            if (H(cand, hn) && std::abs(hn) < std::abs(res.h)) {
                res.lambda = cand;
                res.h = hn;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved || std::abs(step) < 1e-15 * std::max(1.0, std::abs(res.lambda)))
            break;
    }
    res.ok = true;
    return res;
}

}  // namespace detail

/// Checks that lambda is an eigenvalue with the given inside-root pattern:
/// polishes lambda on h, requires the boundary system (generalized-power
/// basis, columns normalized by magnitude) to have sigma_min <= 1e-8, and
/// checks the reconstructed eigenfunction on states 0..g+d+c+50.
inline CandidateEigenvalue verify_candidate(const RandomWalkModel& model,
                                            const DriftProfile& profile, cplx lambda,
                                            const MultiplicityPattern& pattern)
{
    CandidateEigenvalue cand;
    cand.lambda = lambda;
    cand.pattern = pattern;

    const detail::Polished pol = detail::newton_on_h(model, profile, lambda);
    if (!pol.ok) {
        cand.reason = "boundary determinant not evaluable";
        return cand;
    }
    // Candidates from the resultant route may sit at a root cluster of R whose
    // spread reaches a few 1e-3; refinement further than 1e-2 is not trusted.
    if (std::abs(pol.lambda - lambda) > 1e-2 * std::max(1.0, std::abs(lambda))) {
        cand.reason = "refinement drifted away from the candidate";
        return cand;
    }
    cand.lambda = pol.lambda;
    // the eigenvalue 1 (constants) and anything on or inside |lambda| = delta
    // are not annulus eigenvalues even when h vanishes there
    if (!(std::abs(cand.lambda) < 1.0 - 1e-7 && std::abs(cand.lambda) > profile.delta)) {
        cand.reason = "refinement left the open annulus";
        return cand;
    }

    InsideRootReport rep;
    try {
        rep = count_inside(model, profile, cand.lambda);
    } catch (const Error& e) {
        cand.reason = e.what();
        return cand;
    }
    cand.inside_roots = rep.roots_inside;
    if (pattern_of(rep.roots_inside) != pattern) {
        cand.reason = "inside-root pattern " + to_string(pattern_of(rep.roots_inside))
                      + " differs from " + to_string(pattern);
        return cand;
    }

    Eigen::MatrixXcd B = boundary_matrix(model, cand.lambda, rep.roots_inside);
    const Eigen::VectorXd scale = detail::boundary_column_scale(model, cand.lambda, rep.roots_inside);
    for (int j = 0; j < B.cols(); ++j)
        B.col(j) /= scale(j);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B, Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    const int ncols = static_cast<int>(B.cols());
    // a g x eta system with eta > g rows-deficient directions count as kernel
    Eigen::VectorXd sfull = Eigen::VectorXd::Zero(ncols);
    sfull.head(sv.size()) = sv;
    // Columns are divided by their magnitude scale rather than their computed
    // norm, so sigma_min is measured against the size of the terms that cancel;
    // this keeps the test meaningful for a 1 x 1 system.
    cand.sigma_min = sfull(ncols - 1);
    cand.kernel_dim = 0;
    for (int j = 0; j < ncols; ++j)
        if (sfull(j) <= 1e-8)
            ++cand.kernel_dim;
    if (!(cand.sigma_min <= 1e-8)) {
        cand.reason = "boundary system is nonsingular";
        return cand;
    }

    const Eigen::VectorXcd alpha = svd.matrixV().col(ncols - 1);
    cand.kernel_vector.resize(static_cast<std::size_t>(ncols));
    for (int j = 0; j < ncols; ++j)
        cand.kernel_vector[static_cast<std::size_t>(j)] = alpha(j) / scale(j);

    const SequenceAnsatz f = cand.eigenfunction();
    // term-magnitude envelope of f, used as the residual scale
    auto env = [&](long n) {
        double s = 0.0;
        for (const AnsatzTerm& t : f.terms)
            s += std::abs(t.alpha * generalized_power(t.z, t.k, n));
        return s;
    };
    const long last = model.g() + model.d() + model.c() + 50;
    for (long i = 0; i <= last; ++i) {
        const cplx res = apply_P(model, f, i) - cand.lambda * f(i);
        double sc = std::abs(cand.lambda) * env(i);
        for (const auto& [j, pr] : model.row(i))
            sc += pr * env(j);
        const double rel = std::abs(res) / std::max(sc, 1e-300);
        if (i < model.g())
            cand.boundary_residual = std::max(cand.boundary_residual, rel);
        else
            cand.recurrence_residual = std::max(cand.recurrence_residual, rel);
    }
    if (cand.boundary_residual > 1e-8 || cand.recurrence_residual > 1e-8) {
        cand.reason = "eigen-equation residual above 1e-8";
        return cand;
    }
    cand.accepted = true;
    return cand;
}

/// Keeps the lambdas for which E_lambda has a multiple root, i.e. those within
/// tol of a root of Q(lambda) = Res_z(E_lambda, E_lambda').
inline std::vector<cplx> double_root_filter(const RandomWalkModel& model,
                                            const std::vector<cplx>& lambdas, double tol = 1e-5)
{
    const LambdaPoly E = char_poly_lambda(model.law);
    std::vector<ComplexPoly> drows;
    for (int k = 1; k <= E.z_degree(); ++k)
        drows.push_back(E.coeffs_in_z()[static_cast<std::size_t>(k)] * cplx(static_cast<double>(k)));
    const LambdaPoly dE(std::move(drows));
    const int N = E.z_degree();
    const ComplexPoly Q = resultant_in_lambda(E, dE, 2 * N).trimmed(1e-12);
    std::vector<cplx> qroots;
    if (Q.degree() >= 1)
        qroots = detail::companion_roots(Q);
    std::vector<cplx> out;
    for (cplx l : lambdas)
        for (cplx r : qroots)
            if (std::abs(l - r) <= tol * std::max(1.0, std::abs(l))) {
                out.push_back(l);
                break;
            }
    return out;
}

struct PatternResult {
    MultiplicityPattern pattern;
    ComplexPoly resultant;          // R_mu(lambda), up to a constant factor
    int lambda_one_multiplicity = 0;
    std::vector<cplx> lambda_mu;    // roots of R_mu in the annulus
    std::vector<cplx> lambda_prime; // after the double-root filter (patterns with a part >= 2)
    std::vector<CandidateEigenvalue> verified;
};

struct ResultantOutcome {
    bool ran = false;
    std::string skipped_reason;
    std::vector<PatternResult> per_pattern;
};

namespace detail {

inline std::vector<cplx> cluster_centroids(const std::vector<cplx>& raw, double rel_tol)
{
    std::vector<int> comp(raw.size(), -1);
    std::vector<cplx> out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (comp[i] >= 0)
            continue;
        std::vector<std::size_t> stack{i}, members;
        comp[i] = 1;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            members.push_back(u);
            for (std::size_t v = 0; v < raw.size(); ++v)
                if (comp[v] < 0
                    && std::abs(raw[u] - raw[v]) <= rel_tol * std::max(1.0, std::abs(raw[u]))) {
                    comp[v] = 1;
                    stack.push_back(v);
                }
        }
        cplx s = 0.0;
        for (std::size_t m : members)
            s += raw[m];
        out.push_back(s / static_cast<double>(members.size()));
    }
    return out;
}

inline void sort_by_modulus(std::vector<cplx>& v)
{
    std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
        if (std::abs(std::abs(a) - std::abs(b)) > 1e-12)
            return std::abs(a) < std::abs(b);
        return std::arg(a) < std::arg(b);
    });
}

inline bool in_open_annulus(cplx l, const DriftProfile& profile)
{
    const double r = std::abs(l);
    return r > profile.delta && r < 1.0;
}

}  // namespace detail

/// R_mu(lambda) for one pattern, by elimination of z_s, ..., z_2 through
/// products over the roots of E_lambda (sampled on the unit torus) and a
/// final resultant in z_1 recovered by interpolation in lambda.
/// Returns std::nullopt if a degree bound exceeds max_degree.
inline std::optional<ComplexPoly> pattern_resultant(const RandomWalkModel& model,
                                                    const MultiplicityPattern& mu,
                                                    int max_degree = 120)
{
    const int g = model.g();
    const int N = g + model.d();
    const int s = static_cast<int>(mu.size());
    const int maxn = std::max(model.c(), g - 1);
    int Dz = 0;
    for (int j = 1; j <= g; ++j)
        Dz += std::max(0, maxn - j + 1);
    const int Dl = g;
    int pow_n = 1;
    for (int k = 1; k < s; ++k)
        pow_n *= N;
    const int lam_bound = pow_n * (Dl + Dz);
    const int z_bound = pow_n * Dz;
    // a priori bounds; the final bound uses the degrees actually interpolated
    if (lam_bound > max_degree || z_bound > max_degree)
        return std::nullopt;

    // P_{s-1}(lambda, z_1) = prod over (zeta_2..zeta_s) roots of E_lambda of P0
    auto Ps = [&](cplx lam, cplx z1) {
        std::vector<cplx> roots;
        if (s > 1)
            roots = find_roots(char_poly(model, lam)).expanded();
        std::vector<cplx> z(static_cast<std::size_t>(s));
        z[0] = z1;
        cplx prod = 1.0;
        std::vector<std::size_t> idx(static_cast<std::size_t>(std::max(0, s - 1)), 0);
        while (true) {
            for (int k = 1; k < s; ++k)
                z[static_cast<std::size_t>(k)] = roots[idx[static_cast<std::size_t>(k - 1)]];
            prod *= pattern_determinant(model, mu, lam, z);
            int k = s - 2;
            while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == roots.size())
                idx[static_cast<std::size_t>(k--)] = 0;
            if (k < 0)
                break;
        }
        return prod;
    };
    const LambdaPoly P = LambdaPoly::interpolate(Ps, lam_bound, z_bound);
    if (P.z_degree() < 0)
        return ComplexPoly{};
    const LambdaPoly E = char_poly_lambda(model.law);
    const int bound = N * std::max(P.lambda_degree(), 0) + std::max(P.z_degree(), 0);
    if (bound > max_degree)
        return std::nullopt;
    return resultant_in_lambda(P, E, bound);
}

/// Candidate sets Lambda_mu for every pattern of eta (and their verification).
inline ResultantOutcome resultant_candidates(const RandomWalkModel& model,
                                             const DriftProfile& profile, int eta_value,
                                             int max_degree = 120)
{
    ResultantOutcome out;
    if (eta_value > model.g())
        throw Error(ErrorCode::EtaExceedsG, "eta = " + std::to_string(eta_value) + " exceeds g");
    if (eta_value != model.g()) {
        out.skipped_reason = "eta differs from g";
        return out;
    }
    for (const MultiplicityPattern& mu : patterns(eta_value)) {
        const std::optional<ComplexPoly> R = pattern_resultant(model, mu, max_degree);
        if (!R) {
            out.per_pattern.clear();
            out.skipped_reason = "resultant degree bound above " + std::to_string(max_degree);
            return out;
        }
        PatternResult pr;
        pr.pattern = mu;
        const ComplexPoly Rt = R->trimmed(1e-13);
        pr.resultant = Rt;
        if (Rt.degree() >= 1) {
            // The constant eigenfunction makes lambda = 1 a root of multiplicity m,
            // read off the Taylor coefficients at 1. Deflating it numerically
            // amplifies noise, so R is rooted as is and the m roots nearest 1
            // are dropped.
            const std::vector<cplx> t = Rt.taylor_at(1.0);
            double tmax = 0.0;
            for (const cplx& x : t)
                tmax = std::max(tmax, std::abs(x));
            int m = 0;
            while (m < static_cast<int>(t.size()) && std::abs(t[static_cast<std::size_t>(m)]) <= 1e-8 * tmax)
                ++m;
            pr.lambda_one_multiplicity = m;
            std::vector<cplx> raw = detail::companion_roots(Rt);
            std::sort(raw.begin(), raw.end(),
                      [](cplx a, cplx b) { return std::abs(a - 1.0) < std::abs(b - 1.0); });
            raw.erase(raw.begin(), raw.begin() + std::min<std::ptrdiff_t>(m, static_cast<std::ptrdiff_t>(raw.size())));
            // ordered root tuples make R carry squared factors; their split
            // copies are merged here
            for (cplx l : detail::cluster_centroids(raw, 1e-4))
                if (detail::in_open_annulus(l, profile))
                    pr.lambda_mu.push_back(l);
            detail::sort_by_modulus(pr.lambda_mu);
        }
        const std::vector<cplx>& cands =
            all_simple(mu) ? pr.lambda_mu : (pr.lambda_prime = double_root_filter(model, pr.lambda_mu));
        for (cplx l : cands) {
            CandidateEigenvalue c = verify_candidate(model, profile, l, mu);
            c.source = "resultant";
            if (c.accepted
                && std::none_of(pr.verified.begin(), pr.verified.end(), [&](const auto& v) {
                       return std::abs(v.lambda - c.lambda) <= 1e-7 * std::max(1.0, std::abs(c.lambda));
                   }))
                pr.verified.push_back(std::move(c));
        }
        out.per_pattern.push_back(std::move(pr));
    }
    out.ran = true;
    return out;
}

struct DetectorOutcome {
    bool ran = false;
    int winding = 0;
    double winding_raw = 0.0;
    int scans = 0;
    std::vector<CandidateEigenvalue> verified;
    std::vector<cplx> boundary_inconclusive;
};

namespace detail {

// Change of arg h along the circle |lambda| = radius, counterclockwise, with
// adaptive subdivision wherever the increment exceeds pi/4.
inline double arg_change_on_circle(const std::function<cplx(cplx)>& h, double radius,
                                   int samples = 512)
{
    auto rec = [&](auto&& self, double t0, double t1, cplx h0, cplx h1, int depth) -> double {
        const double d = std::arg(h1 / h0);
        if (std::abs(d) < std::numbers::pi / 4 || depth > 60)
            return d;
        const double tm = 0.5 * (t0 + t1);
        const cplx hm = h(std::polar(radius, tm));
        return self(self, t0, tm, h0, hm, depth + 1) + self(self, tm, t1, hm, h1, depth + 1);
    };
    double total = 0.0;
    const double step = 2.0 * std::numbers::pi / samples;
    cplx prev = h(std::polar(radius, 0.0));
    const cplx first = prev;
    for (int k = 1; k <= samples; ++k) {
        const cplx cur = k == samples ? first : h(std::polar(radius, k * step));
        total += rec(rec, (k - 1) * step, k * step, prev, cur, 0);
        prev = cur;
    }
    return total;
}

}  // namespace detail

/// Number of zeros of h in the annulus (margin-shrunk), by the argument principle.
inline double boundary_determinant_winding(const RandomWalkModel& model,
                                           const DriftProfile& profile, double margin = 1e-6)
{
    auto h = [&](cplx l) { return boundary_determinant(model, profile, l); };
    const double outer = detail::arg_change_on_circle(h, 1.0 - margin);
    const double inner = detail::arg_change_on_circle(h, profile.delta + margin);
    return (outer - inner) / (2.0 * std::numbers::pi);
}

struct ScanOptions {
    int radii = 64;
    int angles = 256;
    std::uint64_t seed = default_seed();
    double margin = 1e-6;
    int max_rescans = 2;
};

/// Grid scan of the detector, damped-Newton refinement of its local minima,
/// verification, and an argument-principle completeness check with denser
/// rescans when zeros are missing.
inline DetectorOutcome detector_scan(const RandomWalkModel& model, const DriftProfile& profile,
                                     const ScanOptions& opt = {})
{
    DetectorOutcome out;
    if (!(profile.delta + opt.margin < 1.0 - opt.margin)) {
        out.ran = true;
        return out;
    }
    try {
        out.winding_raw = boundary_determinant_winding(model, profile, opt.margin);
        out.winding = static_cast<int>(std::lround(out.winding_raw));
    } catch (const Error&) {
        // a contour point where the inside-root count is not g (numerically thin annulus)
        out.winding_raw = std::numeric_limits<double>::quiet_NaN();
        out.winding = -1;
    }

    std::mt19937_64 rng(opt.seed);
    const double shift = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double lo = std::log(profile.delta + opt.margin);
    const double hi = std::log(1.0 - opt.margin);

    int R = opt.radii, A = opt.angles;
    for (int scan = 0; scan <= opt.max_rescans; ++scan) {
        ++out.scans;
        std::vector<double> val(static_cast<std::size_t>(R * A));
        std::vector<cplx> pts(static_cast<std::size_t>(R * A));
        for (int i = 0; i < R; ++i)
            for (int j = 0; j < A; ++j) {
                const double r = std::exp(lo + (i + 0.5) / R * (hi - lo));
                const cplx l = std::polar(r, 2.0 * std::numbers::pi * (j + shift) / A);
                const std::size_t k = static_cast<std::size_t>(i * A + j);
                pts[k] = l;
                try {
                    val[k] = detector(model, profile, l);
                } catch (const Error&) {
                    val[k] = std::numeric_limits<double>::infinity();
                }
            }
        std::vector<std::pair<double, cplx>> seeds;
        for (int i = 0; i < R; ++i)
            for (int j = 0; j < A; ++j) {
                const double v = val[static_cast<std::size_t>(i * A + j)];
                bool is_min = std::isfinite(v);
                for (int di = -1; di <= 1 && is_min; ++di)
                    for (int dj = -1; dj <= 1 && is_min; ++dj) {
                        if ((di == 0 && dj == 0) || i + di < 0 || i + di >= R)
                            continue;
                        const int jj = (j + dj + A) % A;
                        if (val[static_cast<std::size_t>((i + di) * A + jj)] < v)
                            is_min = false;
                    }
                if (is_min)
                    seeds.emplace_back(v, pts[static_cast<std::size_t>(i * A + j)]);
            }
        std::sort(seeds.begin(), seeds.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (seeds.size() > 96)
            seeds.resize(96);

        for (const auto& [v, l0] : seeds) {
            const detail::Polished pol = detail::newton_on_h(model, profile, l0);
            if (!pol.ok)
                continue;
            const cplx l = pol.lambda;
            const double r = std::abs(l);
            if (std::abs(l - 1.0) < 1e-6 || r <= profile.delta - 1e-9 || r >= 1.0 + 1e-9)
                continue;
            if (std::abs(r - profile.delta) <= 1e-9 || std::abs(r - 1.0) <= 1e-9) {
                if (std::none_of(out.boundary_inconclusive.begin(), out.boundary_inconclusive.end(),
                                 [&](cplx b) { return std::abs(b - l) < 1e-7; }))
                    out.boundary_inconclusive.push_back(l);
                continue;
            }
            if (!detail::in_open_annulus(l, profile))
                continue;
            if (std::any_of(out.verified.begin(), out.verified.end(), [&](const auto& c) {
                    return std::abs(c.lambda - l) <= 1e-7 * std::max(1.0, r);
                }))
                continue;
            InsideRootReport rep;
            try {
                rep = count_inside(model, profile, l);
            } catch (const Error&) {
                continue;
            }
            CandidateEigenvalue c = verify_candidate(model, profile, l, pattern_of(rep.roots_inside));
            c.source = "detector";
            if (c.accepted)
                out.verified.push_back(std::move(c));
        }
        if (out.winding < 0 || static_cast<int>(out.verified.size()) >= out.winding)
            break;
        R *= 2;
        A *= 2;
    }
    std::sort(out.verified.begin(), out.verified.end(), [](const auto& a, const auto& b) {
        if (std::abs(std::abs(a.lambda) - std::abs(b.lambda)) > 1e-12)
            return std::abs(a.lambda) > std::abs(b.lambda);
        return std::arg(a.lambda) < std::arg(b.lambda);
    });
    out.ran = true;
    return out;
}

enum class Method { Resultant, Detector, Both };

inline std::string to_string(Method m)
{
    switch (m) {
    case Method::Resultant: return "resultant";
    case Method::Detector: return "detector";
    case Method::Both: return "both";
    }
    return "both";
}

struct RateOptions {
    Method method = Method::Both;
    std::optional<double> gamma;
    ScanOptions scan;
    int eta_samples = 64;
    int max_resultant_degree = 120;
};

struct RateReport {
    double gamma0 = 0.0;
    double gamma = 0.0;
    double delta_hat = 0.0;
    int eta = 0;
    bool psi_nega = false;
    double psi_nega_margin = 0.0;
    std::optional<int> eta_prime;
    std::vector<CandidateEigenvalue> candidates;  // the verified set Z
    std::vector<cplx> boundary_inconclusive;
    double rho_hat = 0.0;
    std::string method;
    ResultantOutcome resultant;
    DetectorOutcome detector;
    bool routes_agree = true;
    std::vector<std::string> notes;
};

namespace detail {

inline bool same_set(const std::vector<CandidateEigenvalue>& a,
                     const std::vector<CandidateEigenvalue>& b, double tol)
{
    auto covered = [tol](const auto& x, const auto& y) {
        return std::all_of(x.begin(), x.end(), [&](const CandidateEigenvalue& c) {
            return std::any_of(y.begin(), y.end(), [&](const CandidateEigenvalue& d) {
                return std::abs(c.lambda - d.lambda) <= tol;
            });
        });
    };
    return covered(a, b) && covered(b, a);
}

inline std::string fmt_lambda(cplx l)
{
    std::ostringstream os;
    os.precision(6);
    os << l.real();
    if (l.imag() != 0.0)
        os << (l.imag() < 0 ? " - " : " + ") << std::abs(l.imag()) << "i";
    return os.str();
}

}  // namespace detail

/// rho = max(delta, max |lambda| over verified annulus eigenvalues).
inline RateReport rate(const RandomWalkModel& model, const RateOptions& opt = {})
{
    if (!check_neri(model.law))
        throw Error(ErrorCode::NeriViolated,
                    "not geometrically contracting under V_gamma for any gamma > 1 via this "
                    "criterion (mean increment " + detail::fmt_num(model.law.mean_increment()) + ")");
    const std::vector<std::string> violations = validate(model);
    if (!violations.empty()) {
        std::string msg;
        for (const auto& v : violations)
            msg += (msg.empty() ? "" : "; ") + v;
        throw Error(ErrorCode::InvalidModel, msg);
    }
    const DriftProfile profile =
        opt.gamma ? profile_at(model.law, *opt.gamma) : compute_profile(model.law);

    RateReport rep;
    rep.gamma0 = profile.gamma0;
    rep.gamma = profile.gamma;
    rep.delta_hat = profile.delta;
    rep.method = to_string(opt.method);
    rep.eta = eta(model, profile, opt.eta_samples, opt.scan.seed);
    rep.notes.push_back("delta = phi(gamma) at gamma = " + detail::fmt_num(profile.gamma));

    const PsiNegaReport psi = check_psi_nega(model, profile);
    rep.psi_nega = psi.holds;
    rep.psi_nega_margin = psi.max_margin;
    if (psi.holds) {
        const cplx sample = sample_annulus(annulus(profile), 1, opt.scan.seed).front();
        rep.eta_prime = count_inside_tau(model, profile, sample);
        rep.notes.push_back("psi-nega holds; eta' = " + std::to_string(*rep.eta_prime)
                            + ", elimination uses eta = " + std::to_string(rep.eta) + " columns");
    }

    bool use_resultant = opt.method != Method::Detector;
    bool use_detector = opt.method != Method::Resultant;
    if (rep.eta > model.g()) {
        rep.notes.push_back("eta exceeds g; resultant route replaced by the detector route");
        use_resultant = false;
        use_detector = true;
    }
    if (use_resultant) {
        rep.resultant = resultant_candidates(model, profile, rep.eta, opt.max_resultant_degree);
        if (!rep.resultant.ran) {
            rep.notes.push_back("resultant route skipped: " + rep.resultant.skipped_reason);
            use_detector = true;
        }
    }
    if (use_detector) {
        rep.detector = detector_scan(model, profile, opt.scan);
        rep.boundary_inconclusive = rep.detector.boundary_inconclusive;
        if (rep.detector.winding < 0)
            rep.notes.push_back("argument-principle count unavailable on the annulus contour");
        else if (static_cast<int>(rep.detector.verified.size()) != rep.detector.winding)
            rep.notes.push_back("detector found " + std::to_string(rep.detector.verified.size())
                                + " eigenvalues, argument principle counts "
                                + std::to_string(rep.detector.winding));
    }

    std::vector<CandidateEigenvalue> from_res;
    for (const PatternResult& pr : rep.resultant.per_pattern)
        from_res.insert(from_res.end(), pr.verified.begin(), pr.verified.end());
    if (rep.resultant.ran && rep.detector.ran) {
        rep.routes_agree = detail::same_set(from_res, rep.detector.verified, 1e-6);
        if (!rep.routes_agree)
            rep.notes.push_back("resultant and detector routes disagree on Z");
    }

    auto add = [&rep](const CandidateEigenvalue& c) {
        if (std::none_of(rep.candidates.begin(), rep.candidates.end(), [&](const auto& d) {
                return std::abs(d.lambda - c.lambda) <= 1e-6;
            }))
            rep.candidates.push_back(c);
    };
    for (const auto& c : from_res)
        add(c);
    for (const auto& c : rep.detector.verified)
        add(c);
    std::sort(rep.candidates.begin(), rep.candidates.end(), [](const auto& a, const auto& b) {
        if (std::abs(std::abs(a.lambda) - std::abs(b.lambda)) > 1e-12)
            return std::abs(a.lambda) > std::abs(b.lambda);
        return std::arg(a.lambda) < std::arg(b.lambda);
    });

    rep.rho_hat = rep.delta_hat;
    for (const auto& c : rep.candidates)
        rep.rho_hat = std::max(rep.rho_hat, std::abs(c.lambda));
    rep.notes.push_back(rep.candidates.empty()
                            ? "rho = delta (no eigenvalue in the annulus)"
                            : "rho = |" + detail::fmt_lambda(rep.candidates.front().lambda) + "|");
    return rep;
}

}  // namespace ergorate

#endif  // ERGORATE_ELIMINATE_HPP
