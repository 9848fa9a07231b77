#ifndef ERGORATE_IO_HPP
#define ERGORATE_IO_HPP

// JSON model files and report serialization.
//
// Model schema: {"g": int, "d": int, "a": [a_{-g}, ..., a_d],
//                "boundary": [[P(0,0..c)], ..., [P(g-1,0..c)]], "c": int}
// Optional "family" documents describe the closed-form models:
//   {"family": "birth_death", "p", "q", "r", "a"}
//   {"family": "speksma", "p", "tail": {"kind": "geometric", "theta"} | {"kind": "finite", "weights"}}
//   {"family": "rosen", "pi0", "tail": {...}}

#include <complex>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "closedform.hpp"
#include "eliminate.hpp"
#include "error.hpp"
#include "rwmodel.hpp"
#include "specialmodels.hpp"

namespace ergorate {

using json = nlohmann::json;

namespace detail {

template <class T>
T get_field(const json& j, const char* key)
{
    if (!j.contains(key))
        throw Error(ErrorCode::InvalidModel, std::string("missing field \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidModel, std::string("field \"") + key + "\": " + e.what());
    }
}

inline void require_finite(const std::vector<double>& v, const char* what)
{
    for (double x : v)
        if (!std::isfinite(x))
            throw Error(ErrorCode::InvalidModel, std::string(what) + " contains a non-finite number");
}

inline json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx cplx_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

inline json cplx_list(const std::vector<cplx>& v)
{
    json a = json::array();
    for (cplx z : v)
        a.push_back(cplx_json(z));
    return a;
}

inline std::vector<cplx> cplx_list_from(const json& j)
{
    std::vector<cplx> v;
    for (const auto& e : j)
        v.push_back(cplx_from(e));
    return v;
}

}  // namespace detail

inline json to_json(const RandomWalkModel& m)
{
    return {{"g", m.g()}, {"d", m.d()}, {"a", m.law.a}, {"boundary", m.boundary.rows}, {"c", m.c()}};
}

/// Parses a model document; a "birth_death" family is expanded to its walk.
/// Throws InvalidModel on schema errors (model invariants are checked by validate).
inline RandomWalkModel model_from_json(const json& j)
{
    if (!j.is_object())
        throw Error(ErrorCode::InvalidModel, "model document must be a JSON object");
    if (j.contains("family")) {
        const auto fam = detail::get_field<std::string>(j, "family");
        if (fam != "birth_death")
            throw Error(ErrorCode::InvalidModel, "family \"" + fam + "\" is not a bounded-increment walk");
        BirthDeathParams b{detail::get_field<double>(j, "p"), detail::get_field<double>(j, "q"),
                           detail::get_field<double>(j, "r"), detail::get_field<double>(j, "a")};
        return b.model();
    }
    RandomWalkModel m;
    m.law.g = detail::get_field<int>(j, "g");
    m.law.d = detail::get_field<int>(j, "d");
    m.law.a = detail::get_field<std::vector<double>>(j, "a");
    m.boundary.rows = detail::get_field<std::vector<std::vector<double>>>(j, "boundary");
    m.boundary.c = detail::get_field<int>(j, "c");
    detail::require_finite(m.law.a, "a");
    for (const auto& r : m.boundary.rows)
        detail::require_finite(r, "boundary");
    return m;
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::InvalidModel, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidModel, path + ": " + e.what());
    }
}

inline BirthDeathParams birth_death_from_json(const json& j)
{
    return {detail::get_field<double>(j, "p"), detail::get_field<double>(j, "q"),
            detail::get_field<double>(j, "r"), detail::get_field<double>(j, "a")};
}

inline TailFamily tail_from_json(const json& j)
{
    const auto kind = detail::get_field<std::string>(j, "kind");
    if (kind == "geometric")
        return TailFamily::geometric(detail::get_field<double>(j, "theta"));
    if (kind == "finite")
        return TailFamily::finite(detail::get_field<std::vector<double>>(j, "weights"));
    throw Error(ErrorCode::InvalidModel, "unknown tail kind \"" + kind + "\"");
}

inline SpeksmaModel speksma_from_json(const json& j)
{
    return {detail::get_field<double>(j, "p"), tail_from_json(detail::get_field<json>(j, "tail"))};
}

inline RosenModel rosen_from_json(const json& j)
{
    return {detail::get_field<double>(j, "pi0"), tail_from_json(detail::get_field<json>(j, "tail"))};
}

inline json to_json(const CandidateEigenvalue& c)
{
    json roots = json::array();
    for (const Root& r : c.inside_roots.roots)
        roots.push_back({r.value.real(), r.value.imag(), r.multiplicity});
    return {{"lambda", detail::cplx_json(c.lambda)},
            {"pattern", c.pattern},
            {"residuals",
             {{"boundary", c.boundary_residual},
              {"recurrence", c.recurrence_residual},
              {"sigma_min", c.sigma_min}}},
            {"kernel_dim", c.kernel_dim},
            {"kernel_vector", detail::cplx_list(c.kernel_vector)},
            {"inside_roots", roots},
            {"accepted", c.accepted},
            {"reason", c.reason},
            {"source", c.source}};
}

inline CandidateEigenvalue candidate_from_json(const json& j)
{
    CandidateEigenvalue c;
    c.lambda = detail::cplx_from(j.at("lambda"));
    c.pattern = j.at("pattern").get<MultiplicityPattern>();
    c.boundary_residual = j.at("residuals").at("boundary").get<double>();
    c.recurrence_residual = j.at("residuals").at("recurrence").get<double>();
    c.sigma_min = j.at("residuals").at("sigma_min").get<double>();
    c.kernel_dim = j.at("kernel_dim").get<int>();
    c.kernel_vector = detail::cplx_list_from(j.at("kernel_vector"));
    for (const auto& r : j.at("inside_roots"))
        c.inside_roots.roots.push_back({{r.at(0).get<double>(), r.at(1).get<double>()}, r.at(2).get<int>()});
    c.accepted = j.at("accepted").get<bool>();
    c.reason = j.at("reason").get<std::string>();
    c.source = j.at("source").get<std::string>();
    return c;
}

inline json to_json(const RateReport& r)
{
    json cands = json::array();
    for (const auto& c : r.candidates)
        cands.push_back(to_json(c));
    json pats = json::array();
    for (const auto& p : r.resultant.per_pattern) {
        json ver = json::array();
        for (const auto& c : p.verified)
            ver.push_back(to_json(c));
        pats.push_back({{"pattern", p.pattern},
                        {"lambda_mu", detail::cplx_list(p.lambda_mu)},
                        {"lambda_prime", detail::cplx_list(p.lambda_prime)},
                        {"lambda_one_multiplicity", p.lambda_one_multiplicity},
                        {"resultant_degree", p.resultant.degree()},
                        {"resultant", detail::cplx_list(p.resultant.coeffs())},
                        {"verified", ver}});
    }
    json det = json::array();
    for (const auto& c : r.detector.verified)
        det.push_back(to_json(c));
    return {{"delta_hat", r.delta_hat},
            {"gamma", r.gamma},
            {"gamma0", r.gamma0},
            {"eta", r.eta},
            {"eta_prime", r.eta_prime ? json(*r.eta_prime) : json(nullptr)},
            {"psi_nega", r.psi_nega},
            {"psi_nega_margin", r.psi_nega_margin},
            {"candidates", cands},
            {"boundary_inconclusive", detail::cplx_list(r.boundary_inconclusive)},
            {"rho_hat", r.rho_hat},
            {"method", r.method},
            {"routes_agree", r.routes_agree},
            {"resultant",
             {{"ran", r.resultant.ran},
              {"skipped_reason", r.resultant.skipped_reason},
              {"patterns", pats}}},
            {"detector",
             {{"ran", r.detector.ran},
              {"winding", r.detector.winding},
              {"winding_raw", r.detector.winding_raw},
              {"scans", r.detector.scans},
              {"verified", det},
              {"boundary_inconclusive", detail::cplx_list(r.detector.boundary_inconclusive)}}},
            {"notes", r.notes}};
}

/// Inverse of to_json(RateReport).
inline RateReport report_from_json(const json& j)
{
    RateReport r;
    r.delta_hat = j.at("delta_hat").get<double>();
    r.gamma = j.at("gamma").get<double>();
    r.gamma0 = j.at("gamma0").get<double>();
    r.eta = j.at("eta").get<int>();
    if (!j.at("eta_prime").is_null())
        r.eta_prime = j.at("eta_prime").get<int>();
    r.psi_nega = j.at("psi_nega").get<bool>();
    r.psi_nega_margin = j.at("psi_nega_margin").get<double>();
    for (const auto& c : j.at("candidates"))
        r.candidates.push_back(candidate_from_json(c));
    r.boundary_inconclusive = detail::cplx_list_from(j.at("boundary_inconclusive"));
    r.rho_hat = j.at("rho_hat").get<double>();
    r.method = j.at("method").get<std::string>();
    r.routes_agree = j.at("routes_agree").get<bool>();
    const json& res = j.at("resultant");
    r.resultant.ran = res.at("ran").get<bool>();
    r.resultant.skipped_reason = res.at("skipped_reason").get<std::string>();
    for (const auto& p : res.at("patterns")) {
        PatternResult pr;
        pr.pattern = p.at("pattern").get<MultiplicityPattern>();
        pr.lambda_mu = detail::cplx_list_from(p.at("lambda_mu"));
        pr.lambda_prime = detail::cplx_list_from(p.at("lambda_prime"));
        pr.lambda_one_multiplicity = p.at("lambda_one_multiplicity").get<int>();
        pr.resultant = ComplexPoly(detail::cplx_list_from(p.at("resultant")));
        for (const auto& c : p.at("verified"))
            pr.verified.push_back(candidate_from_json(c));
        r.resultant.per_pattern.push_back(std::move(pr));
    }
    const json& det = j.at("detector");
    r.detector.ran = det.at("ran").get<bool>();
    r.detector.winding = det.at("winding").get<int>();
    // NaN (argument principle unavailable) is written as null
    r.detector.winding_raw = det.at("winding_raw").is_null()
                                 ? std::numeric_limits<double>::quiet_NaN()
                                 : det.at("winding_raw").get<double>();
    r.detector.scans = det.at("scans").get<int>();
    for (const auto& c : det.at("verified"))
        r.detector.verified.push_back(candidate_from_json(c));
    r.detector.boundary_inconclusive = detail::cplx_list_from(det.at("boundary_inconclusive"));
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
}

}  // namespace ergorate

#endif  // ERGORATE_IO_HPP
