#pragma once

// Command-line front end. run() parses argv, dispatches to the library and
// writes one JSON report to stdout or --out. Exit codes: 0 pass, 1 failed
// verification, 2 usage or input error.

#include "characters.hpp"
#include "hecke.hpp"
#include "properties.hpp"
#include "regions.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace hmfac::cli {

inline constexpr const char* schema_version = "1";

struct RunConfig {
    std::string profile;
    std::int64_t den = 24;
    std::int64_t d_refine = 1;
    bool drop_genericity = false;
    bool p2_negative_control = false;
    std::string out;
    unsigned workers = 1;
    std::size_t max_counterexamples = 10;
    std::uint64_t seed = 1;
};

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline PrimeProfile parse_profile(const std::string& s)
{
    if (s.empty())
        throw UsageError("--profile is required");
    return PrimeProfile::parse(s);
}

inline PrimeSet parse_prime_set(const std::string& s, int prime_count)
{
    PrimeSet S;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty())
            continue;
        std::size_t used = 0;
        int id = -1;
        try {
            id = std::stoi(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size() || id < 0 || id >= prime_count)
            throw UsageError("bad prime id '" + tok + "' in --S");
        S.insert(id);
    }
    return S;
}

inline SweepOptions sweep_options(const RunConfig& c)
{
    SweepOptions o;
    if (c.drop_genericity)
        o.constraints = ConstraintOptions::drop_genericity();
    o.max_counterexamples = c.max_counterexamples;
    o.workers = c.workers;
    o.d_refinement = c.d_refine;
    return o;
}

inline PrimeProfile sweep_profile(const RunConfig& c)
{
    auto profile = parse_profile(c.profile);
    if (c.p2_negative_control)
        profile = PrimeProfile(2, profile.degrees());
    return profile;
}

inline json stamp(json body)
{
    json j;
    j["schema"] = schema_version;
    for (auto& [k, v] : body.items())
        j[k] = v;
    return j;
}

inline json suite_report(const RunConfig& c, bool& pass)
{
    const auto profile = parse_profile(c.profile);
    const auto opt = sweep_options(c);
    json checks = json::array();
    pass = true;
    auto add = [&](const std::string& name, bool ok, json report) {
        pass = pass && ok;
        checks.push_back(json{{"name", name}, {"status", ok ? "pass" : "fail"}, {"report", std::move(report)}});
    };
    auto skip = [&](const std::string& name, const std::string& why) {
        checks.push_back(json{{"name", name}, {"status", "skipped"}, {"reason", why}});
    };

    if (profile.g() <= 8) {
        const auto r = admissible_census(profile);
        add("admissible-census", r.pass, r.to_json());
    } else {
        skip("admissible-census", "g > 8");
    }
    {
        const auto r = poset_laws(profile, 1000, c.seed);
        add("poset-laws", r.pass, r.to_json());
    }
    {
        const auto r = atkin_lehner_coherence(profile, 1000, c.seed);
        add("atkin-lehner-coherence", r.pass, r.to_json());
    }
    {
        const auto r = coverage_check(profile, c.max_counterexamples);
        // p = 2 with some f_p >= 2 is expected to fail at the edge step.
        add("coverage", r.pass, r.to_json());
    }
    {
        const auto r = verify_sigma_up(profile, c.den, opt);
        add("sigma-up", r.pass, r.to_json());
    }
    {
        const auto r = saturation_check(profile, c.den, opt);
        add("saturation", r.pass, r.to_json());
    }
    std::set<int> degrees(profile.degrees().begin(), profile.degrees().end());
    for (int f : degrees) {
        const std::string tag = "f=" + std::to_string(f);
        if (f > 3) {
            skip("newton " + tag, "f > 3");
            continue;
        }
        const auto r = newton_consistency_check(profile.p(), f, c.den, c.max_counterexamples);
        add("newton " + tag, r.pass, r.to_json());
    }
    for (int f : degrees) {
        const int q = static_cast<int>(ipow(profile.p(), f));
        const std::string tag = "q=" + std::to_string(q);
        if (q > 32) {
            skip("gauss " + tag, "q > 32");
            skip("twist " + tag, "q > 32");
            continue;
        }
        const auto g = gauss_norm_check(q);
        add("gauss " + tag, g.pass(), g.to_json());
        if (q == 2) {
            skip("twist " + tag, "F_2^x has no nontrivial character");
            continue;
        }
        const auto t = run_twist_trials(q, 4, 2, c.seed, c.workers);
        add("twist " + tag + " n=4", t.pass(), t.to_json());
    }
    return json{{"command", "suite"},
                {"profile", profile.to_json()},
                {"denominator", c.den},
                {"seed", c.seed},
                {"pass", pass},
                {"checks", checks}};
}

} // namespace detail

/// Parses argv and runs one subcommand. `out` receives the report unless
/// --out is given; `err` receives usage messages.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Exact checks on strata, degree dynamics, regions and Gauss-sum identities", "hmfac"};
    app.require_subcommand(1);
    RunConfig c;
    c.workers = workers_from_env();
    auto common = [&](CLI::App* s, bool with_profile = true) {
        if (with_profile)
            s->add_option("--profile", c.profile, "profile such as \"p=3;f=2,1\"");
        s->add_option("--out", c.out, "write the report to this file");
        s->add_option("--workers", c.workers, "worker threads (default TOOL_WORKERS or 1)")->check(CLI::PositiveNumber);
        s->add_option("--max-counterexamples", c.max_counterexamples, "counterexamples kept in the report");
        s->add_option("--seed", c.seed, "random seed");
    };
    auto sweep = [&](CLI::App* s) {
        s->add_option("--den", c.den, "grid denominator")->check(CLI::PositiveNumber);
        s->add_option("--d-refine", c.d_refine, "D-grid denominator multiplier")->check(CLI::PositiveNumber);
        s->add_flag("--drop-genericity", c.drop_genericity, "switch off every rule resting on genericity");
        s->add_flag("--p2-negative-control", c.p2_negative_control, "rerun the profile with p = 2");
    };

    auto* strata = app.add_subcommand("strata", "stratum poset")->require_subcommand(1);
    auto* st_enum = strata->add_subcommand("enumerate", "list admissible pairs");
    std::optional<int> codim_filter;
    bool nowhere_only = false;
    common(st_enum);
    st_enum->add_option("--codim", codim_filter, "keep strata of this codimension");
    st_enum->add_flag("--nowhere-etale", nowhere_only, "keep nowhere-etale strata");

    auto* regions = app.add_subcommand("regions", "region membership")->require_subcommand(1);
    auto* rg_check = regions->add_subcommand("check", "membership of one point");
    std::string point, region = "sigma", S_text;
    common(rg_check);
    rg_check->add_option("--point", point, "degree vector JSON")->required();
    rg_check->add_option("--region", region, "sigma|vcan|sigmaS|istar")
        ->check(CLI::IsMember({"sigma", "vcan", "sigmaS", "istar"}));
    rg_check->add_option("--S", S_text, "prime ids for sigmaS, e.g. 0,1");
    auto* rg_cov = regions->add_subcommand("coverage", "vertex and edge coverage check");
    common(rg_cov);

    auto* verify = app.add_subcommand("verify", "grid verifications")->require_subcommand(1);
    auto* v_sigma = verify->add_subcommand("sigma-up", "Sigma -> U_p -> V_can over a grid");
    common(v_sigma);
    sweep(v_sigma);
    auto* v_sat = verify->add_subcommand("saturation", "degree content of the saturation step");
    common(v_sat);
    sweep(v_sat);
    auto* v_newton = verify->add_subcommand("newton", "Newton polygon against the feasible set");
    common(v_newton);
    v_newton->add_option("--den", c.den, "grid denominator")->check(CLI::PositiveNumber);
    auto* v_twist = verify->add_subcommand("twist", "twist identity on random seeds");
    int q = 3, n = 4, trials = 10;
    common(v_twist, false);
    v_twist->add_option("--q", q, "field size")->required();
    v_twist->add_option("--n", n, "level modulus")->required()->check(CLI::PositiveNumber);
    v_twist->add_option("--trials", trials, "seeds per character pair")->check(CLI::PositiveNumber);

    auto* gauss = app.add_subcommand("gauss", "Gauss sum of one character");
    long long char_exp = 1;
    common(gauss, false);
    gauss->add_option("--q", q, "field size")->required();
    gauss->add_option("--char-exp", char_exp, "psi(g^i) = zeta_{q-1}^{k i}")->required();

    auto* suite = app.add_subcommand("suite", "every check on one profile");
    common(suite);
    suite->add_option("--den", c.den, "grid denominator")->check(CLI::PositiveNumber);
    suite->add_option("--d-refine", c.d_refine, "D-grid denominator multiplier")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    json report;
    int code = 0;
    try {
        if (st_enum->parsed()) {
            const auto profile = detail::parse_profile(c.profile);
            json records = json::array();
            for (const auto& pair : enumerate_admissible(profile)) {
                if (codim_filter && codim(pair) != *codim_filter)
                    continue;
                if (nowhere_only && !nowhere_etale(pair))
                    continue;
                records.push_back(stratum_to_json(pair));
            }
            report = json{{"command", "strata enumerate"},
                          {"profile", profile.to_json()},
                          {"count", records.size()},
                          {"strata", records}};
        } else if (rg_check->parsed()) {
            const auto profile = detail::parse_profile(c.profile);
            json pj;
            try {
                pj = json::parse(point);
            } catch (const json::exception& e) {
                throw UsageError(std::string("--point is not valid JSON: ") + e.what());
            }
            const auto h = DegreeVector::from_json(profile, pj);
            json r{{"command", "regions check"}, {"profile", profile.to_json()}, {"region", region}, {"point", h.to_json()}};
            if (region == "sigma") {
                const auto v = sigma_verdict(h);
                r["membership"] = to_string(v.membership);
                r["case"] = v.which == SigmaCase::None ? json(nullptr) : json(to_string(v.which));
                r["stratum"] = stratum_to_json(v.pair);
            } else if (region == "vcan") {
                r["membership"] = in_Vcan(h) ? "in" : "out";
            } else if (region == "istar") {
                r["membership"] = in_interval_region(h, istar_multiset(profile)) ? "in" : "out";
            } else {
                if (S_text.empty())
                    throw UsageError("--region sigmaS needs --S");
                const auto S = detail::parse_prime_set(S_text, profile.prime_count());
                r["S"] = S.ids();
                r["membership"] = to_string(in_Sigma_S(h, S));
            }
            report = r;
        } else if (rg_cov->parsed()) {
            const auto r = coverage_check(detail::parse_profile(c.profile), c.max_counterexamples);
            report = r.to_json();
            code = r.pass ? 0 : 1;
        } else if (v_sigma->parsed() || v_sat->parsed()) {
            const auto profile = detail::sweep_profile(c);
            const auto opt = detail::sweep_options(c);
            const auto r = v_sigma->parsed() ? verify_sigma_up(profile, c.den, opt) : saturation_check(profile, c.den, opt);
            report = r.to_json();
            report["negative_control"] = c.p2_negative_control ? json("p=2") : c.drop_genericity ? json("drop-genericity")
                                                                                                  : json(nullptr);
            code = r.pass ? 0 : 1;
        } else if (v_newton->parsed()) {
            const auto profile = detail::parse_profile(c.profile);
            json reports = json::array();
            bool pass = true;
            for (int f : std::set<int>(profile.degrees().begin(), profile.degrees().end())) {
                const auto r = newton_consistency_check(profile.p(), f, c.den, c.max_counterexamples);
                pass = pass && r.pass;
                reports.push_back(r.to_json());
            }
            report = json{{"command", "verify newton"}, {"pass", pass}, {"reports", reports}};
            code = pass ? 0 : 1;
        } else if (v_twist->parsed()) {
            const auto r = run_twist_trials(q, n, trials, c.seed, c.workers);
            report = r.to_json();
            code = r.pass() ? 0 : 1;
        } else if (gauss->parsed()) {
            const FiniteField F(q);
            const auto psi = MultChar::of_field(F, char_exp);
            const auto W = gauss_sum(F, psi);
            report = json{{"command", "gauss"},
                          {"q", q},
                          {"char_exp", char_exp},
                          {"order", psi.order()},
                          {"conductor", W.conductor()},
                          {"coefficients", W.coefficients()},
                          {"value", W.to_string()}};
        } else if (suite->parsed()) {
            bool pass = true;
            report = detail::suite_report(c, pass);
            code = pass ? 0 : 1;
        }
    } catch (const std::invalid_argument& e) {
        report = json{{"error", e.what()}};
        code = 2;
    } catch (const std::out_of_range& e) {
        report = json{{"error", e.what()}};
        code = 2;
    } catch (const std::domain_error& e) {
        report = json{{"error", e.what()}};
        code = 2;
    }

    const std::string error = report.value("error", std::string());
    const std::string text = detail::stamp(std::move(report)).dump(2) + "\n";
    if (c.out.empty()) {
        out << text;
    } else {
        std::ofstream f(c.out, std::ios::binary);
        if (!f) {
            err << "cannot write " << c.out << "\n";
            return 2;
        }
        f << text;
    }
    if (code == 2)
        err << "error: " << error << "\n";
    return code;
}

} // namespace hmfac::cli
