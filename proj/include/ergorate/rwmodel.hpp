#ifndef ERGORATE_RWMODEL_HPP
#define ERGORATE_RWMODEL_HPP

// Random walks on N with identically distributed bounded increments away from
// a finite boundary:
//   P(i, j) = a_{j-i}   for i >= g and i-g <= j <= i+d,
//   P(i, .) = boundary row i (support 0..c) for i < g.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "polycalc.hpp"

namespace ergorate {

/// Increment law (a_{-g}, ..., a_d), stored with a[k + g] = a_k.
struct IncrementLaw {
    int g = 1;
    int d = 1;
    std::vector<double> a;

    IncrementLaw() = default;
    IncrementLaw(int g_, int d_, std::vector<double> a_) : g(g_), d(d_), a(std::move(a_)) {}

    double at(int k) const noexcept
    {
        const int idx = k + g;
        return (idx >= 0 && idx < static_cast<int>(a.size())) ? a[static_cast<std::size_t>(idx)]
                                                              : 0.0;
    }

    double mean_increment() const noexcept
    {
        double m = 0.0;
        for (int k = -g; k <= d; ++k)
            m += k * at(k);
        return m;
    }

    /// Birth-death law: a_{-1} = p, a_0 = r, a_1 = q.
    static IncrementLaw birth_death(double p, double r, double q) { return {1, 1, {p, r, q}}; }
};

/// Transition rows of the boundary states 0..g-1, dense over 0..c.
struct BoundaryRows {
    int c = 1;
    std::vector<std::vector<double>> rows;
};

struct RandomWalkModel {
    IncrementLaw law;
    BoundaryRows boundary;

    int g() const noexcept { return law.g; }
    int d() const noexcept { return law.d; }
    int c() const noexcept { return boundary.c; }

    double prob(long i, long j) const
    {
        if (i < 0 || j < 0)
            throw Error(ErrorCode::IndexError, "negative state index");
        if (i < g()) {
            const auto& row = boundary.rows.at(static_cast<std::size_t>(i));
            return j < static_cast<long>(row.size()) ? row[static_cast<std::size_t>(j)] : 0.0;
        }
        const long k = j - i;
        return (k >= -g() && k <= d()) ? law.at(static_cast<int>(k)) : 0.0;
    }

    /// Nonzero-capable support of row i as (column, probability) pairs.
    std::vector<std::pair<long, double>> row(long i) const
    {
        if (i < 0)
            throw Error(ErrorCode::IndexError, "negative state index");
        std::vector<std::pair<long, double>> out;
        if (i < g()) {
            const auto& r = boundary.rows.at(static_cast<std::size_t>(i));
            for (std::size_t j = 0; j < r.size(); ++j)
                out.emplace_back(static_cast<long>(j), r[j]);
        } else {
            for (int k = -g(); k <= d(); ++k)
                out.emplace_back(i + k, law.at(k));
        }
        return out;
    }

    /// Birth-death chain with P(0,0) = a, P(0,1) = 1 - a.
    static RandomWalkModel birth_death(double p, double r, double q, double a)
    {
        return {IncrementLaw::birth_death(p, r, q), BoundaryRows{1, {{a, 1.0 - a}}}};
    }

    /// g = 2, d = 1 walk with P(0,0)=a, P(0,1)=1-a, P(1,0)=b, P(1,2)=1-b.
    static RandomWalkModel two_step(const IncrementLaw& law, double a, double b)
    {
        return {law, BoundaryRows{2, {{a, 1.0 - a, 0.0}, {b, 0.0, 1.0 - b}}}};
    }
};

/// The generalized power z^{(k)}(n) = n(n-1)...(n-k+2) z^{n-k+1}; z^{(1)}(n) = z^n.
/// Equals the (k-1)-th z-derivative of z^n.
inline cplx generalized_power(cplx z, int k, long n)
{
    if (k <= 1)
        return ipow(z, n);
    if (n < k - 1)
        return 0.0;
    double ff = 1.0;
    for (int j = 0; j <= k - 2; ++j)
        ff *= static_cast<double>(n - j);
    return ff * ipow(z, n - k + 1);
}

struct AnsatzTerm {
    cplx z;
    int k = 1;
    cplx alpha = 1.0;
};

/// f = sum alpha * z^{(k)} over the terms.
struct SequenceAnsatz {
    std::vector<AnsatzTerm> terms;

    cplx operator()(long n) const
    {
        cplx s = 0.0;
        for (const AnsatzTerm& t : terms)
            s += t.alpha * generalized_power(t.z, t.k, n);
        return s;
    }
};

/// (Pf)(i) = sum_j P(i,j) f(j) over the finite support of row i.
inline cplx apply_P(const RandomWalkModel& model, const std::function<cplx(long)>& f, long i)
{
    if (i < 0)
        throw Error(ErrorCode::IndexError, "apply_P at negative state " + std::to_string(i));
    cplx s = 0.0;
    for (const auto& [j, pr] : model.row(i))
        if (pr != 0.0)
            s += pr * f(j);
    return s;
}

inline cplx apply_P(const RandomWalkModel& model, const SequenceAnsatz& f, long i)
{
    return apply_P(model, std::function<cplx(long)>([&f](long n) { return f(n); }), i);
}

/// Finite sequence version; the row support must lie inside the sequence.
inline cplx apply_P(const RandomWalkModel& model, std::span<const cplx> f, long i)
{
    return apply_P(
        model,
        std::function<cplx(long)>([f](long n) {
            if (n < 0 || n >= static_cast<long>(f.size()))
                throw Error(ErrorCode::IndexError,
                            "sequence too short for row support (index " + std::to_string(n) + ")");
            return f[static_cast<std::size_t>(n)];
        }),
        i);
}

namespace detail {

inline std::string fmt_num(double x)
{
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

}  // namespace detail

struct ChainStructure {
    bool irreducible = false;
    long period = 0;
};

/// Irreducibility and period of the chain, decided on the window of states
/// 0..cap with cap = 2(g+d)+c+2; transitions leaving the window are dropped.
/// The walk is translation invariant above c, so cycles inside the window
/// already realize every increment combination.
inline ChainStructure chain_structure(const RandomWalkModel& model)
{
    const long cap = 2L * (model.g() + model.d()) + model.c() + 2;
    const long n = cap + 1;
    std::vector<std::vector<long>> adj(static_cast<std::size_t>(n));
    for (long i = 0; i <= cap; ++i) {
        for (const auto& [j, pr] : model.row(i)) {
            if (pr <= 0.0 || j > cap)
                continue;
            const long t = j;
            auto& out = adj[static_cast<std::size_t>(i)];
            if (std::find(out.begin(), out.end(), t) == out.end())
                out.push_back(t);
        }
    }
    auto bfs = [&](const std::vector<std::vector<long>>& graph) {
        std::vector<long> level(static_cast<std::size_t>(n), -1);
        std::queue<long> q;
        level[0] = 0;
        q.push(0);
        while (!q.empty()) {
            const long u = q.front();
            q.pop();
            for (long v : graph[static_cast<std::size_t>(u)])
                if (level[static_cast<std::size_t>(v)] < 0) {
                    level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
                    q.push(v);
                }
        }
        return level;
    };
    std::vector<std::vector<long>> rev(static_cast<std::size_t>(n));
    for (long u = 0; u < n; ++u)
        for (long v : adj[static_cast<std::size_t>(u)])
            rev[static_cast<std::size_t>(v)].push_back(u);

    const auto fwd = bfs(adj);
    const auto bwd = bfs(rev);
    ChainStructure s;
    s.irreducible = std::all_of(fwd.begin(), fwd.end(), [](long l) { return l >= 0; })
                    && std::all_of(bwd.begin(), bwd.end(), [](long l) { return l >= 0; });
    if (!s.irreducible)
        return s;
    long per = 0;
    for (long u = 0; u < n; ++u)
        for (long v : adj[static_cast<std::size_t>(u)])
            per = std::gcd(per, std::abs(fwd[static_cast<std::size_t>(u)] + 1
                                         - fwd[static_cast<std::size_t>(v)]));
    s.period = per;
    return s;
}

/// Every violated model invariant, as a human-readable message. Empty iff the
/// model is a valid, NERI, irreducible and aperiodic walk.
inline std::vector<std::string> validate(const RandomWalkModel& model)
{
    std::vector<std::string> v;
    const IncrementLaw& law = model.law;
    if (law.g < 1)
        v.push_back("g must be a positive integer");
    if (law.d < 1)
        v.push_back("d must be a positive integer");
    if (law.g >= 1 && law.d >= 1
        && static_cast<int>(law.a.size()) != law.g + law.d + 1)
        v.push_back("increment law must have g+d+1 = " + std::to_string(law.g + law.d + 1)
                    + " entries, got " + std::to_string(law.a.size()));
    if (!v.empty())
        return v;

    double sum = 0.0;
    for (int k = -law.g; k <= law.d; ++k) {
        const double x = law.at(k);
        if (!std::isfinite(x) || x < 0.0 || x > 1.0)
            v.push_back("a_" + std::to_string(k) + " must lie in [0,1], got " + detail::fmt_num(x));
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        v.push_back("increment law sums to " + detail::fmt_num(sum));
    if (!(law.at(-law.g) > 0.0))
        v.push_back("a_{-g} must be positive");
    if (!(law.at(law.d) > 0.0))
        v.push_back("a_d must be positive");

    const BoundaryRows& b = model.boundary;
    if (b.c < 1)
        v.push_back("c must be a positive integer");
    if (static_cast<int>(b.rows.size()) != law.g)
        v.push_back("expected " + std::to_string(law.g) + " boundary rows, got "
                    + std::to_string(b.rows.size()));
    for (std::size_t i = 0; i < b.rows.size(); ++i) {
        const auto& r = b.rows[i];
        if (static_cast<int>(r.size()) != b.c + 1)
            v.push_back("row " + std::to_string(i) + " must have c+1 = " + std::to_string(b.c + 1)
                        + " entries");
        double rs = 0.0;
        for (double x : r) {
            if (!std::isfinite(x) || x < 0.0 || x > 1.0)
                v.push_back("row " + std::to_string(i) + " has an entry outside [0,1]");
            rs += x;
        }
        if (std::abs(rs - 1.0) > 1e-12)
            v.push_back("row " + std::to_string(i) + " sums to " + detail::fmt_num(rs));
    }
    if (!v.empty())
        return v;

    if (!(law.mean_increment() < 0.0))
        v.push_back("mean increment " + detail::fmt_num(law.mean_increment())
                    + " is not negative (NERI fails)");
    const ChainStructure cs = chain_structure(model);
    if (!cs.irreducible)
        v.push_back("chain is not irreducible");
    else if (cs.period != 1)
        v.push_back("chain is periodic with period " + std::to_string(cs.period));
    return v;
}

}  // namespace ergorate

#endif  // ERGORATE_RWMODEL_HPP
