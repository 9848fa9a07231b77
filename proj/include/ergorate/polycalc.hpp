#ifndef ERGORATE_POLYCALC_HPP
#define ERGORATE_POLYCALC_HPP

// Dense complex polynomials in one variable, root finding with multiplicity
// clustering, Sylvester resultants, and polynomials in (lambda, z) whose
// lambda-dependence is recovered by evaluation and interpolation on the unit
// circle.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"

namespace ergorate {

using cplx = std::complex<double>;

/// z^n for n >= 0 by repeated squaring.
inline cplx ipow(cplx z, long n) noexcept
{
    cplx r = 1.0;
    while (n > 0) {
        if (n & 1)
            r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}

/// Polynomial with complex coefficients stored in ascending degree order.
/// Trailing exact zeros are stripped on construction, so the zero polynomial
/// has no coefficients and degree() == -1.
class ComplexPoly {
public:
    ComplexPoly() = default;

    explicit ComplexPoly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) { strip(); }

    ComplexPoly(std::initializer_list<cplx> coeffs) : coeffs_(coeffs) { strip(); }

    /// lc * prod (z - r_i)
    static ComplexPoly from_roots(std::span<const cplx> roots, cplx lc = 1.0)
    {
        std::vector<cplx> c{lc};
        for (const cplx& r : roots) {
            std::vector<cplx> next(c.size() + 1, 0.0);
            for (std::size_t k = 0; k < c.size(); ++k) {
                next[k + 1] += c[k];
                next[k] -= r * c[k];
            }
            c = std::move(next);
        }
        return ComplexPoly(std::move(c));
    }

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
    cplx coeff(int k) const noexcept
    {
        return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : cplx{0.0};
    }
    cplx leading() const noexcept { return coeffs_.empty() ? cplx{0.0} : coeffs_.back(); }

    double max_abs_coeff() const noexcept
    {
        double m = 0.0;
        for (const cplx& c : coeffs_)
            m = std::max(m, std::abs(c));
        return m;
    }

    /// Horner evaluation.
    cplx operator()(cplx z) const noexcept
    {
        cplx acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
            acc = acc * z + *it;
        return acc;
    }

    ComplexPoly derivative(int order = 1) const
    {
        std::vector<cplx> c = coeffs_;
        for (int o = 0; o < order && !c.empty(); ++o) {
            std::vector<cplx> d(c.size() > 1 ? c.size() - 1 : 0);
            for (std::size_t k = 1; k < c.size(); ++k)
                d[k - 1] = c[k] * static_cast<double>(k);
            c = std::move(d);
        }
        return ComplexPoly(std::move(c));
    }

    /// Taylor coefficients p^{(j)}(c)/j! for j = 0..degree (repeated synthetic division).
    std::vector<cplx> taylor_at(cplx c) const
    {
        std::vector<cplx> a = coeffs_;
        const std::size_t n = a.size();
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = n - 1; k > j; --k)
                a[k - 1] += c * a[k];
        return a;
    }

    /// Drops leading coefficients whose modulus is below rel_tol * max|coeff|.
    ComplexPoly trimmed(double rel_tol) const
    {
        const double floor = rel_tol * max_abs_coeff();
        std::vector<cplx> c = coeffs_;
        while (!c.empty() && std::abs(c.back()) <= floor)
            c.pop_back();
        return ComplexPoly(std::move(c));
    }

    ComplexPoly operator*(const ComplexPoly& rhs) const
    {
        if (is_zero() || rhs.is_zero())
            return {};
        std::vector<cplx> c(coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
                c[i + j] += coeffs_[i] * rhs.coeffs_[j];
        return ComplexPoly(std::move(c));
    }

    ComplexPoly operator+(const ComplexPoly& rhs) const
    {
        std::vector<cplx> c(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            c[i] += coeffs_[i];
        for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i)
            c[i] += rhs.coeffs_[i];
        return ComplexPoly(std::move(c));
    }

    ComplexPoly operator-(const ComplexPoly& rhs) const { return *this + rhs * cplx{-1.0}; }

    ComplexPoly operator*(cplx s) const
    {
        std::vector<cplx> c = coeffs_;
        for (cplx& x : c)
            x *= s;
        return ComplexPoly(std::move(c));
    }

private:
    void strip()
    {
        while (!coeffs_.empty() && coeffs_.back() == cplx{0.0})
            coeffs_.pop_back();
    }

    std::vector<cplx> coeffs_;
};

struct Root {
    cplx value;
    int multiplicity = 1;
};

/// Roots of a polynomial, each with its multiplicity. Raw roots grouped into
/// one entry all lie within the cluster radius of the reported value.
struct RootSet {
    std::vector<Root> roots;
    double cluster_tol = 1e-7;

    int total_multiplicity() const noexcept
    {
        int s = 0;
        for (const Root& r : roots)
            s += r.multiplicity;
        return s;
    }

    /// Flattened list with every root repeated according to its multiplicity.
    std::vector<cplx> expanded() const
    {
        std::vector<cplx> out;
        for (const Root& r : roots)
            out.insert(out.end(), static_cast<std::size_t>(r.multiplicity), r.value);
        return out;
    }
};

namespace detail {

inline double unit_max(double x) { return std::max(1.0, x); }

// Residual scale used throughout: max|coeff| * max(1,|z|)^deg.
inline double residual_scale(const ComplexPoly& p, cplx z)
{
    return p.max_abs_coeff() * std::pow(unit_max(std::abs(z)), p.degree());
}

inline std::vector<cplx> companion_roots(const ComplexPoly& p)
{
    const int n = p.degree();
    if (n == 1)
        return {-p.coeff(0) / p.coeff(1)};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    const cplx lc = p.leading();
    for (int i = 1; i < n; ++i)
        comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i)
        comp(i, n - 1) = -p.coeff(i) / lc;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success)
        throw Error(ErrorCode::NonConvergence, "companion eigenvalue iteration failed");
    std::vector<cplx> r(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        r[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    return r;
}

// Newton steps, each accepted only when it lowers |p|.
inline cplx polish(const ComplexPoly& p, const ComplexPoly& dp, cplx z, int steps)
{
    double best = std::abs(p(z));
    for (int s = 0; s < steps; ++s) {
        const cplx d = dp(z);
        if (d == cplx{0.0})
            break;
        const cplx cand = z - p(z) / d;
        const double r = std::abs(p(cand));
        if (!(r < best))
            break;
        z = cand;
        best = r;
    }
    return z;
}

// A group of raw roots is accepted as one m-fold root at centroid c when the
// Taylor coefficients t_j = p^{(j)}(c)/j!, j < m, are as small as an m-fold
// root perturbed at the cluster tolerance (or at rounding level) allows.
inline bool accepts_cluster(const ComplexPoly& p, cplx c, int m, double cluster_tol)
{
    const std::vector<cplx> t = p.taylor_at(c);
    const int deg = p.degree();
    const double scale = p.max_abs_coeff();
    const double r = unit_max(std::abs(c));
    const double rounding = 16.0 * std::numeric_limits<double>::epsilon() * (deg + 1);
    for (int j = 0; j < m; ++j) {
        const double tol = std::max(std::pow(cluster_tol, m - j), rounding);
        if (std::abs(t[static_cast<std::size_t>(j)]) > tol * scale * std::pow(r, deg - j))
            return false;
    }
    return true;
}

inline cplx centroid(const std::vector<cplx>& raw, const std::vector<std::size_t>& idx)
{
    cplx s = 0.0;
    for (std::size_t i : idx)
        s += raw[i];
    return s / static_cast<double>(idx.size());
}

}  // namespace detail

/// All roots of p with multiplicities. Companion-matrix eigenvalues, one
/// accepted Newton polish per root, then greedy clustering of nearby roots
/// whose centroid passes a Taylor-coefficient residual check.
inline RootSet find_roots(const ComplexPoly& p, double cluster_tol = 1e-7)
{
    if (p.is_zero())
        throw Error(ErrorCode::ZeroPolynomial, "find_roots of the zero polynomial");
    if (p.degree() < 1)
        throw Error(ErrorCode::DegreeZero, "find_roots of a constant polynomial");

    const ComplexPoly dp = p.derivative();
    std::vector<cplx> raw = detail::companion_roots(p);
    for (cplx& z : raw) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw Error(ErrorCode::NonConvergence, "non-finite root from companion matrix");
        z = detail::polish(p, dp, z, 1);
    }

    const std::size_t n = raw.size();
    const double loose = std::sqrt(cluster_tol);
    auto near = [&](std::size_t i, std::size_t j) {
        const double r = std::max({1.0, std::abs(raw[i]), std::abs(raw[j])});
        return std::abs(raw[i] - raw[j]) <= loose * r;
    };

    // connected components of the "near" graph
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (comp[i] >= 0)
            continue;
        std::vector<std::size_t> stack{i};
        comp[i] = ncomp;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v)
                if (comp[v] < 0 && near(u, v)) {
                    comp[v] = ncomp;
                    stack.push_back(v);
                }
        }
        ++ncomp;
    }

    RootSet out;
    out.cluster_tol = cluster_tol;
    for (int cidx = 0; cidx < ncomp; ++cidx) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i)
            if (comp[i] == cidx)
                members.push_back(i);

        std::vector<std::vector<std::size_t>> groups;
        if (members.size() == 1) {
            groups.push_back(members);
        } else if (detail::accepts_cluster(p, detail::centroid(raw, members),
                                           static_cast<int>(members.size()), cluster_tol)) {
            groups.push_back(members);
        } else {
            std::vector<bool> used(members.size(), false);
            for (std::size_t s = 0; s < members.size(); ++s) {
                if (used[s])
                    continue;
                used[s] = true;
                std::vector<std::size_t> grp{members[s]};
                bool grew = true;
                while (grew) {
                    grew = false;
                    const cplx c = detail::centroid(raw, grp);
                    std::size_t best = members.size();
                    double bestd = std::numeric_limits<double>::infinity();
                    for (std::size_t t = 0; t < members.size(); ++t)
                        if (!used[t] && std::abs(raw[members[t]] - c) < bestd) {
                            bestd = std::abs(raw[members[t]] - c);
                            best = t;
                        }
                    if (best == members.size())
                        break;
                    std::vector<std::size_t> trial = grp;
                    trial.push_back(members[best]);
                    if (detail::accepts_cluster(p, detail::centroid(raw, trial),
                                                static_cast<int>(trial.size()), cluster_tol)) {
                        grp = std::move(trial);
                        used[best] = true;
                        grew = true;
                    }
                }
                groups.push_back(std::move(grp));
            }
        }

        for (const auto& grp : groups) {
            const int m = static_cast<int>(grp.size());
            cplx c = detail::centroid(raw, grp);
            if (m > 1) {
                // Newton on p^{(m-1)}, whose root is simple at an m-fold root of p.
                const ComplexPoly dm1 = p.derivative(m - 1);
                const ComplexPoly dm = p.derivative(m);
                c = detail::polish(dm1, dm, c, 8);
            }
            out.roots.push_back({c, m});
        }
    }

    // Residual contract; failing roots get further Newton steps before giving up.
    for (Root& r : out.roots) {
        if (std::abs(p(r.value)) <= 1e-10 * detail::residual_scale(p, r.value))
            continue;
        r.value = detail::polish(p, dp, r.value, 50);
        if (std::abs(p(r.value)) > 1e-10 * detail::residual_scale(p, r.value))
            throw Error(ErrorCode::NonConvergence,
                        "root residual above tolerance after polishing");
    }

    std::sort(out.roots.begin(), out.roots.end(), [](const Root& a, const Root& b) {
        if (std::abs(a.value) != std::abs(b.value))
            return std::abs(a.value) < std::abs(b.value);
        return std::arg(a.value) < std::arg(b.value);
    });
    return out;
}

/// Sylvester matrix for formal coefficient lists (ascending order, formal
/// degree = size - 1). Rows of p come first.
inline Eigen::MatrixXcd sylvester_matrix(std::span<const cplx> p, std::span<const cplx> q)
{
    const int m = static_cast<int>(p.size()) - 1;
    const int n = static_cast<int>(q.size()) - 1;
    const int size = m + n;
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(size, size);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k)
            s(r, r + k) = p[static_cast<std::size_t>(m - k)];
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k)
            s(n + r, r + k) = q[static_cast<std::size_t>(n - k)];
    return s;
}

/// Resultant of formal coefficient lists; used where the formal degree must
/// stay fixed across specializations.
inline cplx resultant_formal(std::span<const cplx> p, std::span<const cplx> q)
{
    if (p.empty() || q.empty())
        throw Error(ErrorCode::ZeroPolynomial, "resultant with an empty coefficient list");
    if (p.size() + q.size() == 2)
        return 1.0;
    return sylvester_matrix(p, q).partialPivLu().determinant();
}

/// det of the Sylvester matrix of p and q (p-rows first).
inline cplx resultant(const ComplexPoly& p, const ComplexPoly& q)
{
    if (p.is_zero() || q.is_zero())
        throw Error(ErrorCode::ZeroPolynomial, "resultant with the zero polynomial");
    return resultant_formal(p.coeffs(), q.coeffs());
}

/// Recovers the coefficients of a polynomial F of degree <= degree_bound from
/// its values on the unit circle. Nodes are exp(i(2 pi k + phase)/M) with
/// M = degree_bound + 1 + guard; the guard coefficients must come out at the
/// noise floor, otherwise the bound was too small.
inline ComplexPoly interpolate_on_circle(const std::function<cplx(cplx)>& f, int degree_bound,
                                         int guard = 4, double phase = 0.0,
                                         double noise_floor = 1e-9)
{
    if (degree_bound < 0)
        throw Error(ErrorCode::DegreeBoundTooSmall, "negative degree bound");
    const int M = degree_bound + 1 + guard;
    std::vector<cplx> nodes(static_cast<std::size_t>(M));
    std::vector<cplx> vals(static_cast<std::size_t>(M));
    for (int k = 0; k < M; ++k) {
        const double th = (2.0 * std::numbers::pi * k + phase) / M;
        nodes[static_cast<std::size_t>(k)] = std::polar(1.0, th);
        vals[static_cast<std::size_t>(k)] = f(nodes[static_cast<std::size_t>(k)]);
    }
    std::vector<cplx> c(static_cast<std::size_t>(M), 0.0);
    for (int j = 0; j < M; ++j) {
        cplx s = 0.0;
        for (int k = 0; k < M; ++k)
            s += vals[static_cast<std::size_t>(k)]
                 * std::pow(std::conj(nodes[static_cast<std::size_t>(k)]), j);
        c[static_cast<std::size_t>(j)] = s / static_cast<double>(M);
    }
    double mx = 0.0;
    for (int j = 0; j <= degree_bound; ++j)
        mx = std::max(mx, std::abs(c[static_cast<std::size_t>(j)]));
    for (int j = degree_bound + 1; j < M; ++j)
        if (std::abs(c[static_cast<std::size_t>(j)]) > noise_floor * mx)
            throw Error(ErrorCode::DegreeBoundTooSmall,
                        "coefficient " + std::to_string(j) + " above noise floor at bound "
                            + std::to_string(degree_bound));
    c.resize(static_cast<std::size_t>(degree_bound + 1));
    return ComplexPoly(std::move(c));
}

/// Polynomial in z whose coefficients are polynomials in lambda.
class LambdaPoly {
public:
    LambdaPoly() = default;

    explicit LambdaPoly(std::vector<ComplexPoly> coeffs_in_z) : coeffs_(std::move(coeffs_in_z))
    {
        while (!coeffs_.empty() && coeffs_.back().is_zero())
            coeffs_.pop_back();
    }

    int z_degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

    int lambda_degree() const noexcept
    {
        int d = -1;
        for (const ComplexPoly& c : coeffs_)
            d = std::max(d, c.degree());
        return d;
    }

    const std::vector<ComplexPoly>& coeffs_in_z() const noexcept { return coeffs_; }

    /// Coefficients in z at fixed lambda, keeping the formal z-degree.
    std::vector<cplx> specialize_formal(cplx lambda) const
    {
        std::vector<cplx> out(coeffs_.size());
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            out[k] = coeffs_[k](lambda);
        return out;
    }

    ComplexPoly at(cplx lambda) const { return ComplexPoly(specialize_formal(lambda)); }

    cplx operator()(cplx lambda, cplx z) const { return at(lambda)(z); }

    /// Two-dimensional evaluation/interpolation on the unit torus. The z-rows
    /// whose lambda-polynomials are at the noise floor are dropped.
    static LambdaPoly interpolate(const std::function<cplx(cplx, cplx)>& f, int lambda_bound,
                                  int z_bound, int guard = 2, double noise_floor = 1e-9)
    {
        const int ML = lambda_bound + 1 + guard;
        const int MZ = z_bound + 1 + guard;
        std::vector<cplx> ln(static_cast<std::size_t>(ML)), zn(static_cast<std::size_t>(MZ));
        for (int j = 0; j < ML; ++j)
            ln[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * std::numbers::pi * j / ML);
        for (int k = 0; k < MZ; ++k)
            zn[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * std::numbers::pi * k / MZ);

        Eigen::MatrixXcd vals(ML, MZ);
        for (int j = 0; j < ML; ++j)
            for (int k = 0; k < MZ; ++k)
                vals(j, k) = f(ln[static_cast<std::size_t>(j)], zn[static_cast<std::size_t>(k)]);

        auto dft = [](int M) {
            Eigen::MatrixXcd F(M, M);
            for (int a = 0; a < M; ++a)
                for (int k = 0; k < M; ++k)
                    F(a, k) = std::polar(1.0 / M, -2.0 * std::numbers::pi * a * k / M);
            return F;
        };
        // coefficient (a in lambda, b in z)
        const Eigen::MatrixXcd C = dft(ML) * vals * dft(MZ).transpose();

        const double mx = C.cwiseAbs().maxCoeff();
        for (int a = 0; a < ML; ++a)
            for (int b = 0; b < MZ; ++b)
                if ((a > lambda_bound || b > z_bound) && std::abs(C(a, b)) > noise_floor * mx)
                    throw Error(ErrorCode::DegreeBoundTooSmall,
                                "bivariate coefficient outside bounds above noise floor");

        std::vector<ComplexPoly> rows;
        for (int b = 0; b <= z_bound; ++b) {
            std::vector<cplx> lc(static_cast<std::size_t>(lambda_bound + 1));
            for (int a = 0; a <= lambda_bound; ++a)
                lc[static_cast<std::size_t>(a)] = C(a, b);
            rows.emplace_back(ComplexPoly(std::move(lc)).trimmed(noise_floor * 1e-3));
        }
        // drop z-rows that are entirely at the noise floor
        while (!rows.empty() && rows.back().max_abs_coeff() <= noise_floor * mx)
            rows.pop_back();
        return LambdaPoly(std::move(rows));
    }

private:
    std::vector<ComplexPoly> coeffs_;
};

/// Res_z(p, q) as a polynomial in lambda, sampled at degree_bound + 1 (+ guard)
/// roots of unity and recovered by the inverse discrete Fourier transform.
/// Leading coefficients at rounding level (below 1e-13 of the largest) are dropped.
inline ComplexPoly resultant_in_lambda(const LambdaPoly& p, const LambdaPoly& q, int degree_bound,
                                       int guard = 4)
{
    if (p.z_degree() < 0 || q.z_degree() < 0)
        throw Error(ErrorCode::ZeroPolynomial, "resultant_in_lambda with a zero polynomial");
    return interpolate_on_circle(
        [&](cplx lam) {
            const std::vector<cplx> a = p.specialize_formal(lam);
            const std::vector<cplx> b = q.specialize_formal(lam);
            return resultant_formal(a, b);
        },
        degree_bound, guard)
        .trimmed(1e-13);
}

}  // namespace ergorate

#endif  // ERGORATE_POLYCALC_HPP
