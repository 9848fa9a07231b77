// ergorate: command-line front end.
//
//   ergorate drift   MODEL.json
//   ergorate eta     MODEL.json [--samples N]
//   ergorate rate    MODEL.json [--gamma G] [--method resultant|detector|both]
//                               [--scan-density K] [--json]
//   ergorate table   [--json]
//   ergorate bd      [FILE.json] [--p P --q Q --r R --a A] [--json]
//   ergorate speksma FILE.json --gamma G [--truncate N] [--json]
//   ergorate rosen   FILE.json [--gamma G] [--truncate N] [--json]
//   ergorate verify  FILE.json --truncate N [--gamma G] [--json]
//
// Exit codes: 0 success, 2 validation failure, 3 disagreement between
// methods, 4 numerical failure.

#include <cmath>
#include <complex>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ergorate/ergorate.hpp"

namespace {

using namespace ergorate;

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kDisagreement = 3;
constexpr int kNumeric = 4;

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

std::string fmt(cplx z)
{
    if (std::abs(z.imag()) <= 5e-7 * std::max(1.0, std::abs(z)))
        return fmt(z.real());
    std::ostringstream os;
    os << fmt(z.real()) << (z.imag() < 0 ? " - " : " + ") << fmt(std::abs(z.imag())) << "i";
    return os.str();
}

std::string fmt_set(const std::vector<cplx>& v)
{
    if (v.empty())
        return "{}";
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + fmt(v[i]);
    return s + "}";
}

std::vector<cplx> lambdas(const std::vector<CandidateEigenvalue>& c)
{
    std::vector<cplx> out;
    for (const auto& x : c)
        out.push_back(x.lambda);
    return out;
}

Method parse_method(const std::string& s)
{
    if (s == "resultant")
        return Method::Resultant;
    if (s == "detector")
        return Method::Detector;
    return Method::Both;
}

// The walk with a_{-2..1} = (1/2, 1/3, 0, 1/6), P(0,.) = (a, 1-a, 0), P(1,.) = (b, 0, 1-b).
RandomWalkModel two_neighbour_example(double a, double b)
{
    return RandomWalkModel::two_step(IncrementLaw(2, 1, {0.5, 1.0 / 3.0, 0.0, 1.0 / 6.0}), a, b);
}

const PatternResult* find_pattern(const RateReport& r, const MultiplicityPattern& mu)
{
    for (const auto& p : r.resultant.per_pattern)
        if (p.pattern == mu)
            return &p;
    return nullptr;
}

void print_report(const RateReport& r)
{
    std::cout << "gamma      " << fmt(r.gamma) << "\n"
              << "gamma0     " << fmt(r.gamma0) << "\n"
              << "delta_hat  " << fmt(r.delta_hat) << "\n"
              << "eta        " << r.eta << "\n"
              << "psi_nega   " << (r.psi_nega ? "holds" : "fails") << " (max margin "
              << fmt(r.psi_nega_margin) << ")\n";
    if (r.eta_prime)
        std::cout << "eta'       " << *r.eta_prime << "\n";
    if (r.resultant.ran) {
        for (const auto& p : r.resultant.per_pattern) {
            std::cout << "pattern " << to_string(p.pattern) << "  deg R = " << p.resultant.degree()
                      << ", (lambda-1)^" << p.lambda_one_multiplicity << " removed\n"
                      << "  Lambda   " << fmt_set(p.lambda_mu) << "\n";
            if (!all_simple(p.pattern))
                std::cout << "  Lambda'  " << fmt_set(p.lambda_prime) << "\n";
            std::cout << "  Z        " << fmt_set(lambdas(p.verified)) << "\n";
        }
    } else if (!r.resultant.skipped_reason.empty()) {
        std::cout << "resultant  skipped: " << r.resultant.skipped_reason << "\n";
    }
    if (r.detector.ran)
        std::cout << "detector   Z = " << fmt_set(lambdas(r.detector.verified)) << ", winding "
                  << fmt(r.detector.winding_raw) << ", scans " << r.detector.scans << "\n";
    if (!r.boundary_inconclusive.empty())
        std::cout << "inconclusive near the annulus boundary: " << fmt_set(r.boundary_inconclusive)
                  << "\n";
    std::cout << "Z          " << fmt_set(lambdas(r.candidates)) << "\n"
              << "rho_hat    " << fmt(r.rho_hat) << "\n";
    if (!r.routes_agree)
        std::cout << "routes DISAGREE\n";
}

RandomWalkModel load_model(const std::string& path) { return model_from_json(read_json_file(path)); }

int cmd_drift(const std::string& path)
{
    const RandomWalkModel m = load_model(path);
    const auto violations = validate(m);
    if (!violations.empty()) {
        for (const auto& v : violations)
            std::cerr << "invalid model: " << v << "\n";
        return kValidation;
    }
    std::cout << "mean increment " << fmt(m.law.mean_increment()) << "\n";
    if (!check_neri(m.law)) {
        std::cerr << "NERI fails: the mean increment is not negative, so no V_gamma weight "
                     "gives geometric contraction\n";
        return kValidation;
    }
    const DriftProfile p = compute_profile(m.law);
    std::cout << "NERI       holds\n"
              << "gamma0     " << fmt(p.gamma0) << "\n"
              << "gamma_hat  " << fmt(p.gamma_hat) << "\n"
              << "delta_hat  " << fmt(p.delta_hat) << "\n";
    return kOk;
}

int cmd_eta(const std::string& path, int samples)
{
    const RandomWalkModel m = load_model(path);
    const auto violations = validate(m);
    if (!violations.empty())
        throw Error(ErrorCode::InvalidModel, violations.front());
    const DriftProfile p = compute_profile(m.law);
    const int e = eta(m, p, samples);
    std::cout << "eta        " << e << " (constant over " << samples << " annulus samples)\n";
    const PsiNegaReport psi = check_psi_nega(m, p);
    std::cout << "psi_nega   " << (psi.holds ? "holds" : "fails") << "\n";
    if (psi.holds) {
        const cplx lam = sample_annulus(annulus(p), 1, default_seed()).front();
        std::cout << "eta'       " << count_inside_tau(m, p, lam) << "\n";
    }
    return kOk;
}

int cmd_rate(const std::string& path, std::optional<double> gamma, const std::string& method,
             int density, bool as_json)
{
    const RandomWalkModel m = load_model(path);
    RateOptions opt;
    opt.method = parse_method(method);
    opt.gamma = gamma;
    opt.scan.radii *= density;
    opt.scan.angles *= density;
    const RateReport r = rate(m, opt);
    if (as_json)
        std::cout << to_json(r).dump(2) << "\n";
    else
        print_report(r);
    if (!r.routes_agree) {
        std::vector<CandidateEigenvalue> res;
        for (const auto& p : r.resultant.per_pattern)
            res.insert(res.end(), p.verified.begin(), p.verified.end());
        std::cerr << "resultant route Z = " << fmt_set(lambdas(res)) << "\n"
                  << "detector route  Z = " << fmt_set(lambdas(r.detector.verified)) << "\n";
        return kDisagreement;
    }
    return kOk;
}

int cmd_table(bool as_json)
{
    const std::vector<std::pair<std::string, double>> rows = {
        {"(1/2,1/2)", 0.5}, {"(1/10,1/10)", 0.1}, {"(1/50,1/50)", 0.02}};
    json out = json::array();
    bool agree = true;
    if (!as_json)
        std::cout << "(a,b)        | Lambda_(1,1)                                   | Z_(1,1) "
                     "| Lambda'_(2) | Z_(2) | delta_hat | rho_hat\n";
    for (const auto& [label, ab] : rows) {
        const RateReport r = rate(two_neighbour_example(ab, ab));
        agree = agree && r.routes_agree;
        const PatternResult* p11 = find_pattern(r, {1, 1});
        const PatternResult* p2 = find_pattern(r, {2});
        const std::vector<cplx> L11 = p11 ? p11->lambda_mu : std::vector<cplx>{};
        const std::vector<cplx> Z11 = p11 ? lambdas(p11->verified) : std::vector<cplx>{};
        const std::vector<cplx> L2 = p2 ? p2->lambda_prime : std::vector<cplx>{};
        const std::vector<cplx> Z2 = p2 ? lambdas(p2->verified) : std::vector<cplx>{};
        if (as_json) {
            auto list = [](const std::vector<cplx>& v) {
                json a = json::array();
                for (cplx z : v)
                    a.push_back({z.real(), z.imag()});
                return a;
            };
            out.push_back({{"a", ab},
                           {"b", ab},
                           {"Lambda_11", list(L11)},
                           {"Z_11", list(Z11)},
                           {"Lambda_prime_2", list(L2)},
                           {"Z_2", list(Z2)},
                           {"delta_hat", r.delta_hat},
                           {"rho_hat", r.rho_hat},
                           {"routes_agree", r.routes_agree}});
        } else {
            std::cout << label << " | " << fmt_set(L11) << " | " << fmt_set(Z11) << " | "
                      << fmt_set(L2) << " | " << fmt_set(Z2) << " | " << fmt(r.delta_hat) << " | "
                      << fmt(r.rho_hat) << "\n";
        }
    }
    if (as_json)
        std::cout << out.dump(2) << "\n";
    return agree ? kOk : kDisagreement;
}

int cmd_bd(const BirthDeathParams& b, bool as_json)
{
    const BdRate cf = bd_rate_detail(b);
    const RateReport r = rate(b.model());
    const double diff = std::abs(r.rho_hat - cf.value);
    std::optional<BdLambdaZ> lz;
    try {
        lz = bd_lambda_z(b);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateA)
            throw;
    }
    if (as_json) {
        json j = {{"p", b.p},           {"q", b.q},
                  {"r", b.r},           {"a", b.a},
                  {"a0", b.a0()},       {"a1", b.a1()},
                  {"delta_hat", b.delta_hat()},
                  {"closed_form_rate", cf.value},
                  {"case", to_string(cf.branch)},
                  {"tie", cf.tie},      {"elimination_rate", r.rho_hat},
                  {"difference", diff}};
        if (lz) {
            j["lambda_a"] = lz->lambda_a;
            j["z_a"] = lz->z_a;
            j["z_within_gamma_hat"] = lz->z_within_gamma_hat;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "a0         " << fmt(b.a0()) << "\n"
                  << "a1         " << fmt(b.a1()) << "\n"
                  << "delta_hat  " << fmt(b.delta_hat()) << "\n"
                  << "case       " << to_string(cf.branch) << (cf.tie ? " (tie)" : "") << "\n";
        if (lz)
            std::cout << "lambda(a)  " << fmt(lz->lambda_a) << ", z(a) = " << fmt(lz->z_a)
                      << (lz->z_within_gamma_hat ? " (|z| <= gamma_hat)" : " (|z| > gamma_hat)")
                      << "\n";
        std::cout << "closed form rate  " << fmt(cf.value) << "\n"
                  << "elimination rate  " << fmt(r.rho_hat) << "\n";
    }
    return diff <= 1e-8 ? kOk : kDisagreement;
}

// Largest eigenvalue modulus of the truncation after the Perron root.
double second_modulus(const Eigen::MatrixXd& block, double gamma)
{
    return empirical_rate(truncate(block, gamma));
}

int cmd_speksma(const std::string& path, double gamma, int N, bool as_json)
{
    const SpeksmaModel m = speksma_from_json(read_json_file(path));
    const SpeksmaBound b = speksma_bound(m, gamma);
    const double res = speksma_eigencheck(m, 200);
    const double second = second_modulus(m.truncation(N), gamma);
    if (as_json) {
        std::cout << json{{"p", m.p},
                          {"gamma", gamma},
                          {"bound", b.bound},
                          {"ress_bound", b.ress_bound},
                          {"eigenpair_residual", res},
                          {"truncation", N},
                          {"truncated_second_modulus", second}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "bound max(q gamma, p)  " << fmt(b.bound) << "\n"
                  << "q gamma                " << fmt(b.ress_bound) << "\n"
                  << "eigenpair (-p, f_p) residual over 200 rows  " << fmt(res) << "\n"
                  << "truncated |lambda_2| (N = " << N << ")  " << fmt(second) << "\n";
    }
    return kOk;
}

int cmd_rosen(const std::string& path, double gamma, int N, bool as_json)
{
    const RosenModel m = rosen_from_json(read_json_file(path));
    const RosenRate r = rosen_rate(m, gamma);
    const auto ev = truncated_spectrum(truncate(m.truncation(N), 1.0));
    const double rest = ev.size() > 2 ? std::abs(ev[2]) : 0.0;
    if (as_json) {
        std::cout << json{{"pi0", m.pi0},
                          {"gamma", gamma},
                          {"bound", r.bound},
                          {"eigenvalues", r.eigenvalues},
                          {"truncation", N},
                          {"truncated_leading", {std::abs(ev[0]), std::abs(ev[1])}},
                          {"truncated_rest_max", rest}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "bound 1 - pi0          " << fmt(r.bound) << "\n"
                  << "point spectrum         {0, 1}\n"
                  << "truncated spectrum (N = " << N << "): " << fmt(ev[0]) << ", " << fmt(ev[1])
                  << ", rest <= " << fmt(rest) << "\n";
    }
    return kOk;
}

int cmd_verify(const std::string& path, int N, std::optional<double> gamma, bool as_json)
{
    const json doc = read_json_file(path);
    const std::string fam = doc.value("family", "");
    if (fam == "speksma") {
        // default: midpoint of the admissible range (1, 1/q)
        const double q = 1.0 - speksma_from_json(doc).p;
        return cmd_speksma(path, gamma.value_or(0.5 * (1.0 + 1.0 / q)), N, as_json);
    }
    if (fam == "rosen")
        return cmd_rosen(path, gamma.value_or(1.5), N, as_json);

    const RandomWalkModel m = model_from_json(doc);
    RateOptions opt;
    opt.gamma = gamma;
    const RateReport r = rate(m, opt);
    const double emp = empirical_rate(m, N, r.gamma);
    const double diff = std::abs(emp - r.rho_hat);
    if (as_json) {
        std::cout << json{{"rho_hat", r.rho_hat}, {"gamma", r.gamma}, {"truncation", N},
                          {"empirical_rate", emp}, {"difference", diff}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "rho_hat          " << fmt(r.rho_hat) << "\n"
                  << "empirical (N = " << N << ")  " << fmt(emp) << "\n"
                  << "difference       " << fmt(diff) << (diff <= 0.05 ? "" : "  (above 0.05)")
                  << "\n";
    }
    return diff <= 0.05 ? kOk : kDisagreement;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"V-geometric convergence rates of random walks with bounded increments"};
    app.require_subcommand(1);

    std::string path;
    bool as_json = false;
    std::optional<double> gamma;
    std::string method = "both";
    int density = 1;
    int samples = 200;
    int N = 400;
    BirthDeathParams bdp{0.7, 0.3, 0.0, 0.5};

    auto* drift = app.add_subcommand("drift", "gamma0, gamma_hat, delta_hat and the NERI verdict");
    drift->add_option("model", path, "model JSON file")->required()->check(CLI::ExistingFile);

    auto* eta_cmd = app.add_subcommand("eta", "number of inside roots over the annulus");
    eta_cmd->add_option("model", path, "model JSON file")->required()->check(CLI::ExistingFile);
    eta_cmd->add_option("--samples", samples, "annulus samples")->check(CLI::PositiveNumber);

    auto* rate_cmd = app.add_subcommand("rate", "annulus eigenvalues and the convergence rate");
    rate_cmd->add_option("model", path, "model JSON file")->required()->check(CLI::ExistingFile);
    rate_cmd->add_option("--gamma", gamma, "weight gamma (default gamma_hat)");
    rate_cmd->add_option("--method", method, "elimination route")
        ->check(CLI::IsMember({"resultant", "detector", "both"}));
    rate_cmd->add_option("--scan-density", density, "detector grid multiplier")
        ->check(CLI::PositiveNumber);
    rate_cmd->add_flag("--json", as_json, "emit the full report as JSON");

    auto* table = app.add_subcommand("table", "regenerate the two-neighbour boundary table");
    table->add_flag("--json", as_json, "JSON output");

    auto* bd = app.add_subcommand("bd", "birth-death closed form versus elimination");
    bd->add_option("model", path, "birth_death family JSON file")->check(CLI::ExistingFile);
    bd->add_option("--p", bdp.p, "down probability");
    bd->add_option("--q", bdp.q, "up probability");
    bd->add_option("--r", bdp.r, "holding probability");
    bd->add_option("--a", bdp.a, "P(0,0)");
    bd->add_flag("--json", as_json, "JSON output");

    double sk_gamma = 0.0;
    auto* speksma = app.add_subcommand("speksma", "walk with a geometric return to 0");
    speksma->add_option("model", path, "speksma family JSON file")->required()->check(CLI::ExistingFile);
    speksma->add_option("--gamma", sk_gamma, "weight gamma in (1, 1/q)")->required();
    speksma->add_option("--truncate", N, "truncation size")->check(CLI::PositiveNumber);
    speksma->add_flag("--json", as_json, "JSON output");

    double ro_gamma = 1.5;
    auto* rosen = app.add_subcommand("rosen", "walk resting until a jump to 0");
    rosen->add_option("model", path, "rosen family JSON file")->required()->check(CLI::ExistingFile);
    rosen->add_option("--gamma", ro_gamma, "weight gamma > 1");
    rosen->add_option("--truncate", N, "truncation size")->check(CLI::PositiveNumber);
    rosen->add_flag("--json", as_json, "JSON output");

    auto* verify = app.add_subcommand("verify", "cross-check against a weighted finite section");
    verify->add_option("model", path, "model JSON file")->required()->check(CLI::ExistingFile);
    verify->add_option("--truncate", N, "truncation size")->required()->check(CLI::PositiveNumber);
    verify->add_option("--gamma", gamma, "weight gamma (default gamma_hat)");
    verify->add_flag("--json", as_json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kValidation;
    }

    try {
        if (drift->parsed())
            return cmd_drift(path);
        if (eta_cmd->parsed())
            return cmd_eta(path, samples);
        if (rate_cmd->parsed())
            return cmd_rate(path, gamma, method, density, as_json);
        if (table->parsed())
            return cmd_table(as_json);
        if (bd->parsed())
            return cmd_bd(path.empty() ? bdp : birth_death_from_json(read_json_file(path)), as_json);
        if (speksma->parsed())
            return cmd_speksma(path, sk_gamma, N, as_json);
        if (rosen->parsed())
            return cmd_rosen(path, ro_gamma, N, as_json);
        if (verify->parsed())
            return cmd_verify(path, N, gamma, as_json);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_validation() ? kValidation : kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    }
    return kOk;
}
