// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ergorate/ergorate.hpp"
#include "support.hpp"

using namespace ergorate;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void fail(const std::string& why)
    {
        if (pass)
            detail << why;
        pass = false;
    }
};

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<cplx> conj_pairs(std::initializer_list<cplx> upper)
{
    std::vector<cplx> out;
    for (cplx z : upper) {
        out.push_back(z);
        if (z.imag() != 0.0)
            out.push_back(std::conj(z));
    }
    return out;
}

struct TableRow {
    double ab;
    std::vector<cplx> lambda_11;
    std::vector<cplx> z_11;
    double rho;
};

// Published values for the two-neighbour example.
const std::vector<TableRow>& table_rows()
{
    static const std::vector<TableRow> rows{
        {0.5, conj_pairs({{-0.625, 0.466}, {-0.798, 0.0}, {0.804, 0.0}}), {}, 0.621},
        {0.1, conj_pairs({{-0.681, 0.610}, {-0.466, 0.506}, {-0.384, 0.555}}),
         conj_pairs({{-0.466, 0.506}}), 0.688},
        {0.02,
         conj_pairs({{-0.598, 0.614}, {-0.383, 0.542}, {-0.493, 0.574}, {-0.477, 0.584}, {0.994, 0.0}}),
         conj_pairs({{-0.493, 0.574}}), 0.757},
    };
    return rows;
}

Outcome table_reproduction()
{
    Outcome o;
    const auto t0 = Clock::now();
    for (const TableRow& row : table_rows()) {
        const RateReport r = rate(support::two_neighbour(row.ab, row.ab));
        std::ostringstream tag;
        tag << "a = b = " << row.ab << ": ";
        if (std::abs(r.rho_hat - row.rho) > 0.001)
            o.fail(tag.str() + "rho " + std::to_string(r.rho_hat));
        const PatternResult* p11 = support::find_pattern(r, {1, 1});
        const PatternResult* p2 = support::find_pattern(r, {2});
        if (!p11 || !p2) {
            o.fail(tag.str() + "pattern missing");
            continue;
        }
        if (!support::same_points(p11->lambda_mu, row.lambda_11, 0.002)) {
            std::ostringstream s;
            s << tag.str() << "Lambda_(1,1) = {";
            for (cplx l : p11->lambda_mu)
                s << " " << l;
            s << " }";
            o.fail(s.str());
        }
        if (!support::same_points(support::lambdas(p11->verified), row.z_11, 0.002))
            o.fail(tag.str() + "Z_(1,1) mismatch");
        if (!p2->lambda_prime.empty())
            o.fail(tag.str() + "Lambda'_(2) not empty");
        if (!p2->verified.empty())
            o.fail(tag.str() + "Z_(2) not empty");
    }
    const double secs = seconds_since(t0);
    if (secs >= 120.0)
        o.fail("runtime " + std::to_string(secs) + " s");
    if (o.pass)
        o.detail << "3 rows, " << secs << " s";
    return o;
}

Outcome birth_death_equivalence()
{
    Outcome o;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2024);
    const BdBranch branches[] = {BdBranch::AboveA0, BdBranch::SmallP, BdBranch::BelowA1,
                                 BdBranch::BetweenA1A0};
    int n = 0;
    double worst = 0.0;
    for (int k = 0; k < 112; ++k) {
        const BirthDeathParams b = support::random_bd_in(rng, branches[k % 4]);
        const double diff = std::abs(rate(b.model()).rho_hat - bd_rate(b));
        worst = std::max(worst, diff);
        if (diff > 1e-8) {
            std::ostringstream s;
            s << "p=" << b.p << " q=" << b.q << " r=" << b.r << " a=" << b.a << " differs by " << diff;
            o.fail(s.str());
        }
        ++n;
    }
    const double secs = seconds_since(t0);
    if (secs >= 300.0)
        o.fail("runtime " + std::to_string(secs) + " s");
    if (o.pass)
        o.detail << n << " samples over 4 branches, worst " << worst << ", " << secs << " s";
    return o;
}

Outcome zero_holding()
{
    Outcome o;
    std::mt19937_64 rng(2025);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        BirthDeathParams b = support::random_bd(rng, true);
        // alternate the two sides of a0, away from the endpoint
        b.a = k % 2 == 0 ? b.a0() * (0.02 + 0.96 * U(rng)) : b.a0() + (1.0 - b.a0()) * (0.02 + 0.96 * U(rng));
        const double want = b.a <= b.a0() ? (b.p * b.q + (b.a - b.p) * (b.a - b.p)) / std::abs(b.a - b.p)
                                          : 2.0 * std::sqrt(b.p * b.q);
        const double diff = std::abs(rate(b.model()).rho_hat - want);
        worst = std::max(worst, diff);
        if (diff > 1e-8) {
            std::ostringstream s;
            s << "p=" << b.p << " a=" << b.a << " differs by " << diff;
            o.fail(s.str());
        }
    }
    if (o.pass)
        o.detail << "20 samples, worst " << worst;
    return o;
}

Outcome resultant_identity()
{
    Outcome o;
    std::mt19937_64 rng(2026);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const BirthDeathParams b = support::random_bd(rng, k % 3 == 0);
        const auto R = pattern_resultant(b.model(), {1});
        // (1 - lambda)[(lambda - a)(1 - a - q) + p(1 - a)]
        const double s = 1.0 - b.a - b.q;
        const ComplexPoly inner({-b.a * s + b.p * (1.0 - b.a), s});
        const ComplexPoly want = ComplexPoly({1.0, -1.0}) * inner;
        if (!R || R->degree() != want.degree()) {
            o.fail("degree mismatch");
            continue;
        }
        const cplx lr = R->coeffs().back(), lw = want.coeffs().back();
        for (int i = 0; i <= want.degree(); ++i) {
            const double d = std::abs(R->coeffs()[static_cast<std::size_t>(i)] / lr
                                      - want.coeffs()[static_cast<std::size_t>(i)] / lw);
            worst = std::max(worst, d);
        }
    }
    if (worst > 1e-10)
        o.fail("coefficient difference " + std::to_string(worst));
    if (o.pass)
        o.detail << "10 samples, worst " << worst;
    return o;
}

Outcome eta_constancy()
{
    Outcome o;
    std::mt19937_64 rng(2027);
    for (int k = 0; k < 50; ++k) {
        const RandomWalkModel m = support::random_model(rng, 3);
        const DriftProfile p = compute_profile(m.law);
        int first = -1;
        for (cplx lam : sample_annulus(annulus(p), 200, static_cast<std::uint64_t>(k))) {
            try {
                const InsideRootReport rep = count_inside(m, p, lam);
                if (first < 0)
                    first = rep.N;
                if (rep.N != first)
                    o.fail("model " + std::to_string(k) + ": N varies");
                if (rep.min_circle_gap < 1e-8 * p.gamma_hat)
                    o.fail("model " + std::to_string(k) + ": root on the circle");
            } catch (const Error& e) {
                o.fail("model " + std::to_string(k) + ": " + e.what());
            }
        }
    }
    if (o.pass)
        o.detail << "50 models x 200 samples";
    return o;
}

std::vector<RandomWalkModel> table_models()
{
    return {support::two_neighbour(0.5, 0.5), support::two_neighbour(0.1, 0.1),
            support::two_neighbour(0.02, 0.02)};
}

Outcome tau_refinement()
{
    Outcome o;
    std::mt19937_64 rng(2028);
    std::vector<RandomWalkModel> models = table_models();
    for (int k = 0; k < 30; ++k)
        models.push_back(support::random_model(rng, 2));
    int with_psi = 0, pairs = 0;
    for (std::size_t k = 0; k < models.size(); ++k) {
        const RandomWalkModel& m = models[k];
        const DriftProfile p = compute_profile(m.law);
        if (!check_psi_nega(m, p).holds)
            continue;
        ++with_psi;
        int first = -1, N = -1;
        try {
            N = eta(m, p, 200, k);
            for (cplx lam : sample_annulus(annulus(p), 200, k)) {
                const int n = count_inside_tau(m, p, lam);
                if (first < 0)
                    first = n;
                if (n != first)
                    o.fail("model " + std::to_string(k) + ": N' varies");
            }
        } catch (const Error& e) {
            o.fail("model " + std::to_string(k) + ": " + e.what());
        }
        if (first > N)
            o.fail("model " + std::to_string(k) + ": N' > N");
        for (const CandidateEigenvalue& c : rate(m).candidates) {
            ++pairs;
            const double radius = std::pow(p.gamma_hat, tau(c.lambda, p));
            for (cplx z : c.active_roots())
                if (std::abs(z) >= radius + 1e-6)
                    o.fail("model " + std::to_string(k) + ": eigenfunction root outside gamma^tau");
        }
    }
    if (with_psi == 0)
        o.fail("no model satisfies the condition");
    if (o.pass)
        o.detail << with_psi << " models, " << pairs << " eigenpairs";
    return o;
}

Outcome oracle_cross_check()
{
    Outcome o;
    std::vector<RandomWalkModel> models = table_models();
    std::mt19937_64 rng(2029);
    for (int k = 0; k < 10; ++k)
        models.push_back(support::random_bd(rng, k % 3 == 0).model());
    double worst = 0.0;
    for (const RandomWalkModel& m : models) {
        const double diff = std::abs(empirical_rate(m, 400) - rate(m).rho_hat);
        worst = std::max(worst, diff);
    }
    if (worst > 0.05)
        o.fail("largest gap " + std::to_string(worst));
    if (o.pass)
        o.detail << models.size() << " models, largest gap " << worst;
    return o;
}

Outcome special_models()
{
    Outcome o;
    double worst_res = 0.0, worst_excess = -1.0;
    for (double p : {0.2, 0.4, 0.7}) {
        const SpeksmaModel m{p, TailFamily::geometric(0.4)};
        worst_res = std::max(worst_res, speksma_eigencheck(m, 200));
        // gamma in (1, 1/q) with theta gamma < 1
        const double gamma = std::min(0.5 * (1.0 + 1.0 / m.q()), 0.5 * (1.0 + 1.0 / 0.4));
        const double bound = speksma_bound(m, gamma).bound;
        const double second = empirical_rate(truncate(m.truncation(400), gamma));
        worst_excess = std::max(worst_excess, second - bound);
    }
    if (worst_res > 1e-12)
        o.fail("eigenpair residual " + std::to_string(worst_res));
    if (worst_excess > 0.02)
        o.fail("truncated second modulus exceeds max(q gamma, p) by " + std::to_string(worst_excess));

    const RosenModel r = RosenModel::rosenthal();
    const double bound = rosen_rate(r, 1.5).bound;
    if (std::abs(bound - 0.5) > 1e-15)
        o.fail("Rosenthal bound " + std::to_string(bound));
    const auto ev = truncated_spectrum(truncate(r.truncation(400), 1.0));
    const bool one = std::abs(ev[0] - 1.0) < 1e-8;
    const bool zero = std::any_of(ev.begin(), ev.end(), [](cplx z) { return std::abs(z) < 1e-8; });
    double rest = 0.0;
    for (std::size_t i = 1; i < ev.size(); ++i)
        rest = std::max(rest, std::abs(ev[i]));
    if (!one || !zero || rest > 0.52)
        o.fail("Rosenthal truncated spectrum");
    if (o.pass)
        o.detail << "residual " << worst_res << ", excess " << worst_excess << ", Rosenthal rest "
                 << rest;
    return o;
}

Outcome route_agreement()
{
    Outcome o;
    std::vector<RandomWalkModel> models = table_models();
    for (const char* name : {"general_g2_d2.json", "birth_death_r0.json", "birth_death_r03.json"})
        models.push_back(model_from_json(read_json_file(support::model_path(name))));
    std::mt19937_64 rng(2030);
    for (int k = 0; k < 20; ++k)
        models.push_back(support::random_model(rng, 2));
    for (int k = 0; k < 20; ++k)
        models.push_back(support::random_bd(rng, k % 4 == 0).model());
    int both = 0;
    for (std::size_t k = 0; k < models.size(); ++k) {
        const RateReport r = rate(models[k]);
        if (!(r.resultant.ran && r.detector.ran))
            continue;
        ++both;
        if (!r.routes_agree)
            o.fail("model " + std::to_string(k) + ": routes disagree");
    }
    if (both == 0)
        o.fail("no model ran both routes");
    if (o.pass)
        o.detail << both << " models with both routes";
    return o;
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"table reproduction", table_reproduction},
        {"birth-death closed form", birth_death_equivalence},
        {"r = 0 formula", zero_holding},
        {"birth-death resultant identity", resultant_identity},
        {"eta constancy", eta_constancy},
        {"tau refinement", tau_refinement},
        {"truncation oracle", oracle_cross_check},
        {"special models", special_models},
        {"route agreement", route_agreement},
    };
    int failures = 0;
    int index = 1;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        failures += !o.pass;
        std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.str().c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
