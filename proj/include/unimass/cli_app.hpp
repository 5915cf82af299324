#pragma once

#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "unimass/fingroups.hpp"
#include "unimass/gram_json.hpp"
#include "unimass/massform.hpp"
#include "unimass/shimcount.hpp"

// Command-line front end. Every number in the JSON output is exact: integers
// as decimal strings, rationals as "num/den" strings. Output for identical
// inputs is byte-identical (fixed key order, no timestamps).

namespace unimass::cli {

using nlohmann::ordered_json;

struct JobSpec {
    std::string command;
    std::optional<Int> m, disc;
    std::string gram_spec;
    std::optional<std::pair<unsigned, unsigned>> signature;
    std::optional<Int> prime, level, q_value, norm_index;
    std::optional<unsigned> t_index, rank_n, orbit_r, precision;
    std::optional<Int> ell;
    std::string behavior;
    std::string level_kind = "full";
    uint64_t cap = default_enumeration_cap;
    bool inject_mismatch = false;
    std::string format = "table";
};

struct ResultDocument {
    std::string command;
    ordered_json inputs = ordered_json::object();
    ordered_json factors = ordered_json::object();
    ordered_json results = ordered_json::object();
};

// ---- exact serialization helpers ----

inline std::string js_int(const Int& v) { return v.str(); }

inline std::string js_rat(const Rat& v) {
    return numerator(v).str() + "/" + denominator(v).str();
}

inline Int int_of(const ordered_json& v) {
    if (v.is_number_integer()) return Int(v.get<long long>());
    if (!v.is_string()) throw consistency_error("document field is not an integer");
    return Int(v.get<std::string>());
}

inline Rat rat_of(const ordered_json& v) {
    if (!v.is_string()) return Rat(int_of(v));
    const std::string s = v.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

inline const char* behavior_name(Splitting how) {
    switch (how) {
    case Splitting::split: return "split";
    case Splitting::inert: return "inert";
    default: return "ramified";
    }
}

inline const char* norm_type_name(NormType t) {
    switch (t) {
    case NormType::normal: return "normal";
    case NormType::subnormal: return "subnormal";
    default: return "not_applicable";
    }
}

// ---- input resolution ----

inline QuadField field_of(const JobSpec& job) {
    if (job.m.has_value() == job.disc.has_value())
        throw input_error("exactly one of --m and --disc selects the field");
    if (job.m) return make_quadfield(*job.m);
    return quadfield_from_disc(*job.disc);
}

inline GramMatrix gram_of(const JobSpec& job, const Int& m) {
    const std::string& src = job.gram_spec;
    if (src.empty()) throw input_error("--gram is required: identity:n, H, H^k, inline JSON, or a file path");
    if (src.rfind("identity:", 0) == 0 || src == "H" || src.rfind("H^", 0) == 0)
        return gram_from_shorthand(src, m);
    std::string text;
    if (!src.empty() && src.front() == '{') {
        text = src;
    } else {
        std::ifstream in(src);
        if (!in) throw input_error("--gram: cannot open file '" + src + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error(std::string("--gram: invalid JSON: ") + e.what());
    }
    const GramMatrix g = gram_from_json(doc);
    if (g.m != m) throw input_error("--gram: matrix is defined over a different field than --m/--disc");
    return g;
}

inline std::pair<unsigned, unsigned> signature_of(const JobSpec& job) {
    if (!job.signature) throw input_error("--signature r,s is required");
    return *job.signature;
}

template <typename T>
inline const T& required(const std::optional<T>& v, const char* flag) {
    if (!v) throw input_error(std::string(flag) + " is required");
    return *v;
}

// ---- document assembly ----

inline void echo_field(ResultDocument& doc, const QuadField& E) {
    doc.inputs["m"] = js_int(E.m);
    doc.inputs["disc"] = js_int(E.d);
}

inline void echo_gram(ResultDocument& doc, const GramMatrix& g) {
    doc.inputs["gram"] = gram_to_json(g);
    doc.inputs["rank"] = g.n;
}

inline ShimuraInput shimura_input_of(const JobSpec& job, const QuadField& E, const GramMatrix& g) {
    const auto [r, s] = signature_of(job);
    return make_shimura_input(E, g, r, s, required(job.prime, "--prime"),
                              required(job.level, "--level"));
}

inline void echo_shimura(ResultDocument& doc, const ShimuraInput& in) {
    echo_field(doc, in.field);
    echo_gram(doc, in.gram);
    doc.inputs["r"] = in.r;
    doc.inputs["s"] = in.s;
    doc.inputs["prime"] = js_int(in.p);
    doc.inputs["level"] = js_int(in.N);
    doc.inputs["behavior"] = behavior_name(in.behavior().how);
}

// Re-derive the final values from the serialized factor fields and require
// exact agreement. Catches any drift between the factor bundle and the
// result before a document reaches the user.
inline void validate_document(const ResultDocument& doc) {
    const auto fail = [&](const std::string& what) {
        throw consistency_error("result document does not recombine: " + what);
    };
    const ordered_json& f = doc.factors;
    const ordered_json& r = doc.results;
    if (doc.command == "mass") {
        Rat acc = Rat(int_of(f.at("sign"))) * 2 * rat_of(f.at("l_product"));
        for (const auto& [key, val] : f.at("kappa").items()) {
            (void)key;
            acc *= int_of(val);
        }
        acc /= pow_int(2, f.at("two_power_exponent").get<unsigned>());
        if (acc != rat_of(r.at("mass"))) fail("mass factors");
    } else if (doc.command == "inner-mass") {
        const Rat acc = Rat(int_of(f.at("tau"))) * rat_of(f.at("lattice_mass")) *
                        Rat(int_of(f.at("lambda")));
        if (acc != rat_of(r.at("inner_mass"))) fail("inner mass factors");
    } else if (doc.command == "basic-locus") {
        const Rat pre = rat_of(f.at("prefactor"));
        if (pre * Rat(int_of(f.at("lambda_bas"))) * Rat(int_of(f.at("rho_bas"))) !=
            Rat(int_of(r.at("irreducible_components"))))
            fail("component count factors");
        if (pre * Rat(int_of(f.at("lambda_e"))) != Rat(int_of(r.at("e_stratum_points"))))
            fail("point count factors");
    } else if (doc.command == "eo-strata") {
        if (rat_of(f.at("prefactor")) * Rat(int_of(f.at("lambda_t"))) !=
            Rat(int_of(r.at("closure_count"))))
            fail("stratum closure factors");
    } else if (doc.command == "pi0") {
        const Int h = int_of(f.at("h"));
        const unsigned w = f.at("w").get<unsigned>();
        const Int pi0 = int_of(r.at("pi0_shimura"));
        Rat expect;
        if (f.at("level_kind") == "full") {
            if (f.at("n_odd").get<bool>()) {
                expect = Rat(h);
            } else {
                expect = Rat(h, pow_int(2, w - 1));
                if (f.at("doubled").get<bool>()) expect *= 2;
            }
        } else {
            const Int idx = int_of(f.at("norm_index"));
            expect = f.at("n_odd").get<bool>()
                         ? Rat(idx * h, int_of(f.at("mu")))
                         : Rat(idx * h, pow_int(2, w - 1));
        }
        if (expect != Rat(pi0)) fail("component count factors");
    } else if (doc.command == "adlv") {
        if (f.contains("enumerated") && int_of(f.at("enumerated")) != int_of(r.at("orbits")))
            fail("orbit enumeration");
    } else if (doc.command == "fermat") {
        const Int q = int_of(doc.inputs.at("q"));
        const unsigned n = doc.inputs.at("n").get<unsigned>();
        if (fermat_count(q, n) != int_of(r.at("points"))) fail("point count");
        if (r.contains("enumerated_points") &&
            int_of(r.at("enumerated_points")) != int_of(r.at("points")))
            fail("point enumeration");
    } else if (doc.command == "hecke-bound") {
        if (int_of(f.at("e_stratum_points")) * int_of(f.at("nu")) != int_of(r.at("bound")))
            fail("bound factors");
    } else if (doc.command == "local-density") {
        if (r.contains("enumerated_density") &&
            rat_of(r.at("enumerated_density")) != rat_of(r.at("density")))
            fail("density enumeration");
    }
}

inline std::string value_str(const ordered_json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
}

inline void render_table(const ResultDocument& doc, std::ostream& out) {
    out << "command: " << doc.command << "\n";
    const auto section = [&](const char* name, const ordered_json& obj) {
        if (obj.empty()) return;
        out << "[" << name << "]\n";
        for (const auto& [key, val] : obj.items()) out << "  " << key << " = " << value_str(val) << "\n";
    };
    section("inputs", doc.inputs);
    section("factors", doc.factors);
    section("results", doc.results);
}

inline void emit(const ResultDocument& doc, const JobSpec& job, std::ostream& out) {
    validate_document(doc);
    if (job.format == "json") {
        ordered_json payload;
        payload["command"] = doc.command;
        payload["inputs"] = doc.inputs;
        payload["factors"] = doc.factors;
        payload["results"] = doc.results;
        out << payload.dump(2) << "\n";
    } else {
        render_table(doc, out);
    }
}

// ---- command handlers ----

inline ResultDocument run_mass(const JobSpec& job) {
    const QuadField E = field_of(job);
    const GramMatrix g = gram_of(job, E.m);
    ResultDocument doc;
    doc.command = "mass";
    echo_field(doc, E);
    echo_gram(doc, g);
    const Rat mass = mass_lattice(E, g);
    const unsigned n = g.n;
    doc.factors["sign"] = js_int((n % 2 == 0 && (n / 2) % 2 == 1) ? Int(-1) : Int(1));
    doc.factors["two_power_exponent"] = n + E.w;
    doc.factors["l_product"] = js_rat(l_product(E, n));
    ordered_json kap = ordered_json::object();
    for (const auto& [ell, k] : kappa_all(E, g)) kap[ell.str()] = js_int(k);
    doc.factors["kappa"] = kap;
    doc.results["mass"] = js_rat(mass);
    return doc;
}

inline ResultDocument run_inner_mass(const JobSpec& job) {
    const QuadField E = field_of(job);
    const GramMatrix g = gram_of(job, E.m);
    const auto [r, s] = signature_of(job);
    const Int p = required(job.prime, "--prime");
    const Splitting how = splitting_behavior(E, p).how;
    ParahoricChoice choice;
    choice.behavior = how;
    if (how == Splitting::split) {
        if (job.t_index) throw input_error("--t selects a vertex for inert primes only");
    } else {
        choice.t = job.t_index.value_or(0);
    }
    const Rat inner = mass_inner(E, g, p, choice, r, s);
    ResultDocument doc;
    doc.command = "inner-mass";
    echo_field(doc, E);
    echo_gram(doc, g);
    doc.inputs["r"] = r;
    doc.inputs["s"] = s;
    doc.inputs["prime"] = js_int(p);
    doc.inputs["behavior"] = behavior_name(how);
    if (how != Splitting::split) doc.inputs["t"] = choice.t;
    doc.factors["tau"] = js_int(tau_factor(g.n, E.w));
    doc.factors["lattice_mass"] = js_rat(mass_lattice(E, g));
    doc.factors["lambda"] = js_int(lambda_parahoric(p, choice, g.n, r, s));
    doc.results["inner_mass"] = js_rat(inner);
    return doc;
}

inline ResultDocument run_basic_locus(const JobSpec& job) {
    const QuadField E = field_of(job);
    const GramMatrix g = gram_of(job, E.m);
    const ShimuraInput in = shimura_input_of(job, E, g);
    const CountReport rep = count_basic(in);
    ResultDocument doc;
    doc.command = "basic-locus";
    echo_shimura(doc, in);
    doc.factors["level_index"] = js_int(rep.level_idx);
    doc.factors["prefactor"] = js_rat(count_prefactor(in));
    doc.factors["lambda_bas"] = js_int(rep.lambda_bas);
    doc.factors["rho_bas"] = js_int(rep.rho_bas);
    doc.factors["lambda_e"] = js_int(rep.lambda_e);
    doc.results["irreducible_components"] = js_int(rep.irr_basic);
    doc.results["e_stratum_points"] = js_int(rep.card_Me);
    doc.results["superbasic"] = rep.superbasic;
    if (rep.pi0_sh) doc.results["pi0_shimura"] = js_int(*rep.pi0_sh);
    if (rep.pi0_basic) doc.results["pi0_basic"] = js_int(*rep.pi0_basic);
    if (rep.per_component_irr)
        doc.results["per_component_components"] = js_int(*rep.per_component_irr);
    if (rep.per_component_Me) doc.results["per_component_points"] = js_int(*rep.per_component_Me);
    return doc;
}

inline ResultDocument run_eo_strata(const JobSpec& job) {
    const QuadField E = field_of(job);
    const GramMatrix g = gram_of(job, E.m);
    const ShimuraInput in = shimura_input_of(job, E, g);
    const unsigned t = required(job.t_index, "--t");
    const Int count = count_eo_closure(in, t);
    ParahoricChoice choice;
    choice.behavior = Splitting::inert;
    choice.t = t;
    ResultDocument doc;
    doc.command = "eo-strata";
    echo_shimura(doc, in);
    doc.inputs["t"] = t;
    doc.factors["prefactor"] = js_rat(count_prefactor(in));
    doc.factors["lambda_t"] = js_int(lambda_parahoric(in.p, choice, in.n(), in.r, in.s));
    doc.results["closure_count"] = js_int(count);
    return doc;
}

inline ResultDocument run_pi0(const JobSpec& job) {
    const QuadField E = field_of(job);
    const GramMatrix g = gram_of(job, E.m);
    const ShimuraInput in = shimura_input_of(job, E, g);
    const LevelKind kind =
        job.level_kind == "principal" ? LevelKind::principal : LevelKind::full;
    const Int pi0 = pi0_shimura(in, kind, job.norm_index);
    const Int pib = pi0_basic(in, pi0);
    ResultDocument doc;
    doc.command = "pi0";
    echo_shimura(doc, in);
    doc.inputs["level_kind"] = job.level_kind;
    doc.factors["h"] = js_int(E.h);
    doc.factors["w"] = E.w;
    doc.factors["mu"] = js_int(Int(E.mu));
    doc.factors["level_kind"] = job.level_kind;
    doc.factors["n_odd"] = in.n() % 2 == 1;
    if (kind == LevelKind::principal) {
        doc.factors["norm_index"] = js_int(*job.norm_index);
    } else if (in.n() % 2 == 0) {
        doc.factors["doubled"] = Rat(pi0) == 2 * Rat(E.h, pow_int(2, E.w - 1));
    }
    doc.results["pi0_shimura"] = js_int(pi0);
    doc.results["pi0_basic"] = js_int(pib);
    return doc;
}

inline ResultDocument run_adlv(const JobSpec& job) {
    if (job.behavior.empty()) throw input_error("--behavior inert|split is required");
    const Splitting how = job.behavior == "split" ? Splitting::split : Splitting::inert;
    const unsigned n = required(job.rank_n, "--n");
    const unsigned r = required(job.orbit_r, "--r");
    const Int count = adlv_orbit_count(how, n, r);
    ResultDocument doc;
    doc.command = "adlv";
    doc.inputs["behavior"] = job.behavior;
    doc.inputs["n"] = n;
    doc.inputs["r"] = r;
    if (how == Splitting::inert && n <= 12 && job.cap >= (uint64_t(1) << n) * n * n)
        doc.factors["enumerated"] = js_int(adlv_orbit_enumerate(n, r));
    doc.results["orbits"] = js_int(count);
    return doc;
}

inline ResultDocument run_fermat(const JobSpec& job) {
    const Int q = required(job.q_value, "--q");
    const unsigned n = required(job.rank_n, "--n");
    const Int count = fermat_count(q, n);
    ResultDocument doc;
    doc.command = "fermat";
    doc.inputs["q"] = js_int(q);
    doc.inputs["n"] = n;
    doc.results["points"] = js_int(count);
    if (job.cap > 0) {
        try {
            doc.results["enumerated_points"] = js_int(fermat_brute_force(q, n, job.cap));
        } catch (const unsupported_error&) {
            // enumeration over budget; the closed form stands alone
        }
    }
    return doc;
}

inline ResultDocument run_hecke_bound(const JobSpec& job) {
    const QuadField E = field_of(job);
    const GramMatrix g = gram_of(job, E.m);
    const ShimuraInput in = shimura_input_of(job, E, g);
    const Int bound = hecke_bound(in);
    const CountReport rep = count_basic(in);
    if (bound % rep.card_Me != 0)
        throw consistency_error("hecke bound is not a multiple of the point count");
    ResultDocument doc;
    doc.command = "hecke-bound";
    echo_shimura(doc, in);
    doc.factors["e_stratum_points"] = js_int(rep.card_Me);
    doc.factors["nu"] = js_int(bound / rep.card_Me);
    doc.results["bound"] = js_int(bound);
    return doc;
}

inline ResultDocument run_local_density(const JobSpec& job) {
    const QuadField E = field_of(job);
    const GramMatrix g = gram_of(job, E.m);
    const Int ell = required(job.ell, "--ell");
    const LocalProfile prof = local_profile(E, g, ell);
    ResultDocument doc;
    doc.command = "local-density";
    echo_field(doc, E);
    echo_gram(doc, g);
    doc.inputs["ell"] = js_int(ell);
    doc.factors["behavior"] = behavior_name(prof.behavior.how);
    doc.factors["norm_type"] = norm_type_name(prof.norm_type);
    if (prof.det_matches_sign) doc.factors["det_matches_sign"] = *prof.det_matches_sign;
    doc.factors["det"] = js_int(prof.det);
    doc.results["density"] = js_rat(local_density(prof));
    if (job.precision) {
        doc.inputs["precision"] = *job.precision;
        doc.results["enumerated_density"] =
            js_rat(brute_force_density(E, g, ell, *job.precision, job.cap));
    }
    return doc;
}

// ---- verification suite ----

struct VerifyCheck {
    std::string name;
    uint64_t estimate; // candidate-count units, compared against the cap
    std::function<void()> run;  // throws consistency_error on mismatch
};

inline void verify_require(bool ok, const std::string& dump) {
    if (!ok) throw consistency_error(dump);
}

inline std::vector<VerifyCheck> verify_checks(uint64_t cap, bool inject) {
    std::vector<VerifyCheck> checks;

    checks.push_back({"special L-values from Bernoulli numbers", 10, [] {
        const QuadField E = make_quadfield(-1);
        verify_require(l_value(E, 2) == Rat(-1, 12), "zeta(-1) != -1/12");
        verify_require(l_value(E, 3) == Rat(-1, 2), "L(-2) at disc -4 != -1/2");
    }});

    checks.push_back({"class numbers against L-values", 60000, [inject] {
        bool first = true;
        for (Int d = -3; d >= -300; --d) {
            QuadField E;
            try {
                E = quadfield_from_disc(d);
            } catch (const input_error&) {
                continue;
            }
            Rat from_l = Rat(Int(E.mu)) * l_value(E, 1) / 2;
            if (inject && first) from_l += 1;
            first = false;
            verify_require(Rat(E.h) == from_l,
                           "class number mismatch at disc " + d.str() + ": forms give " +
                               E.h.str() + ", L-value gives " + js_rat(from_l));
        }
    }});

    checks.push_back({"finite group orders by enumeration", 10000000, [] {
        for (const GroupKind kind :
             {GroupKind::general_linear, GroupKind::unitary, GroupKind::orthogonal_odd,
              GroupKind::orthogonal_plus, GroupKind::orthogonal_minus, GroupKind::symplectic,
              GroupKind::special_orthogonal_odd})
            for (unsigned param = 1; param <= 2; ++param)
                for (unsigned q : {2u, 3u}) {
                    const ClassicalGroup grp{kind, param};
                    const Int closed = group_order(grp, q);
                    const Int counted = brute_force_order(grp, q);
                    verify_require(closed == counted,
                                   "group order mismatch at kind " +
                                       std::to_string(static_cast<int>(kind)) + " param " +
                                       std::to_string(param) + " q " + std::to_string(q) + ": " +
                                       closed.str() + " vs " + counted.str());
                }
    }});

    const auto density_fixture = [](const Int& m, const GramMatrix& g, const Int& ell,
                                    unsigned lo) {
        return [m, g, ell, lo] {
            const QuadField E = make_quadfield(m);
            const Rat closed = local_density(local_profile(E, g, ell));
            for (unsigned N = lo; N <= lo + 1; ++N) {
                const Rat counted = brute_force_density(E, g, ell, N);
                verify_require(closed == counted,
                               "density mismatch at m " + m.str() + " ell " + ell.str() +
                                   " precision " + std::to_string(N) + ": closed " +
                                   js_rat(closed) + ", counted " + js_rat(counted));
            }
        };
    };
    const auto diag = [](const Int& m, const Int& a, const Int& b) {
        return make_gram(m, {{{a, 0}, {0, 0}}, {{0, 0}, {b, 0}}});
    };
    checks.push_back({"densities, ramified dyadic", 3000000,
                      density_fixture(-1, identity_gram(-1, 2), 2, 3)});
    checks.push_back({"densities, ramified dyadic subnormal", 3000000,
                      density_fixture(-2, hyperbolic_gram(-2, 1), 2, 3)});
    checks.push_back({"densities, inert at 2", 3000000,
                      density_fixture(-3, identity_gram(-3, 2), 2, 3)});
    checks.push_back({"densities, split at 2", 3000000,
                      density_fixture(-7, identity_gram(-7, 2), 2, 3)});
    checks.push_back({"densities, ramified odd, norm determinant", 600000,
                      density_fixture(-3, identity_gram(-3, 2), 3, 1)});
    checks.push_back({"densities, ramified odd, non-norm determinant", 600000,
                      density_fixture(-3, diag(-3, 1, -1), 3, 1)});
    checks.push_back({"densities, inert at 3", 600000,
                      density_fixture(-1, identity_gram(-1, 2), 3, 1)});
    checks.push_back({"densities, split at 3", 600000,
                      density_fixture(-2, identity_gram(-2, 2), 3, 1)});

    checks.push_back({"mass factorization identity", 10000, [] {
        for (const Int m : {Int(-1), Int(-3), Int(-7)}) {
            const QuadField E = make_quadfield(m);
            std::vector<GramMatrix> grams = {identity_gram(m, 1), identity_gram(m, 2),
                                             identity_gram(m, 3), hyperbolic_gram(m, 1)};
            for (const GramMatrix& g : grams)
                for (const Int p : {Int(3), Int(5)}) {
                    const Splitting how = splitting_behavior(E, p).how;
                    if (how == Splitting::ramified) continue;
                    const Rat base = tau_factor(g.n, E.w) * mass_lattice(E, g);
                    for (unsigned r = 0; r <= g.n; ++r) {
                        ParahoricChoice choice;
                        choice.behavior = how;
                        if (how == Splitting::inert) choice.t = r;
                        const Rat lhs = mass_inner(E, g, p, choice, r, g.n - r);
                        const Rat rhs = base * lambda_parahoric(p, choice, g.n, r, g.n - r);
                        verify_require(lhs == rhs, "inner mass mismatch at m " + m.str() +
                                                       " rank " + std::to_string(g.n) + " p " +
                                                       p.str() + ": " + js_rat(lhs) + " vs " +
                                                       js_rat(rhs));
                    }
                }
        }
    }});

    checks.push_back({"parahoric factor recurrence and symmetry", 1000, [] {
        for (const Int p : {Int(3), Int(5), Int(7)})
            for (unsigned n = 2; n <= 8; ++n)
                for (unsigned t = 0; t <= n; ++t) {
                    const auto lam = [&](unsigned nn, unsigned tt) {
                        ParahoricChoice c;
                        c.t = tt;
                        return lambda_parahoric(p, c, nn, 0, nn);
                    };
                    verify_require(lam(n, t) == lam(n, n - t),
                                   "vertex symmetry fails at p " + p.str());
                    if (t >= 1 && t <= n - 1) {
                        const Int rec = pow_int(p, t) * lam(n - 1, t) +
                                        (((n - t) % 2 == 0) ? Int(1) : Int(-1)) * lam(n - 1, t - 1);
                        verify_require(lam(n, t) == rec, "vertex recurrence fails at p " + p.str());
                    }
                }
    }});

    checks.push_back({"orbit enumeration against binomials", 10000, [] {
        for (unsigned n = 1; n <= 8; ++n)
            for (unsigned r = 0; r <= n; ++r)
                verify_require(adlv_orbit_enumerate(n, r) ==
                                   adlv_orbit_count(Splitting::inert, n, r),
                               "orbit count mismatch at n " + std::to_string(n) + " r " +
                                   std::to_string(r));
    }});

    checks.push_back({"hypersurface counts by projective enumeration", 20000, [] {
        for (const Int q : {Int(2), Int(3)})
            for (unsigned n = 1; n <= 3; ++n)
                verify_require(fermat_brute_force(q, n) == fermat_count(q, n),
                               "hypersurface count mismatch at q " + q.str() + " n " +
                                   std::to_string(n));
    }});

    (void)cap;
    return checks;
}

inline int run_verify(const JobSpec& job, std::ostream& out) {
    const std::vector<VerifyCheck> checks = verify_checks(job.cap, job.inject_mismatch);
    unsigned passed = 0, failed = 0, skipped = 0;
    ordered_json rows = ordered_json::array();
    for (const VerifyCheck& c : checks) {
        std::string status;
        std::string detail;
        if (c.estimate > job.cap) {
            status = "SKIP";
            ++skipped;
        } else {
            try {
                c.run();
                status = "PASS";
                ++passed;
            } catch (const consistency_error& e) {
                status = "FAIL";
                detail = e.what();
                ++failed;
            }
        }
        if (job.format == "json") {
            ordered_json row;
            row["name"] = c.name;
            row["status"] = status;
            if (!detail.empty()) row["detail"] = detail;
            rows.push_back(row);
        } else {
            out << status << "  " << c.name;
            if (!detail.empty()) out << "\n      " << detail;
            out << "\n";
        }
    }
    if (job.format == "json") {
        ordered_json payload;
        payload["command"] = "verify";
        payload["checks"] = rows;
        payload["passed"] = passed;
        payload["failed"] = failed;
        payload["skipped"] = skipped;
        out << payload.dump(2) << "\n";
    } else {
        out << passed << " passed, " << failed << " failed, " << skipped << " skipped\n";
    }
    return failed == 0 ? 0 : 4;
}

// ---- argument parsing and dispatch ----

inline Int parse_int(const std::string& text, const char* flag) {
    try {
        return Int(text);
    } catch (const std::exception&) {
        throw input_error(std::string(flag) + ": '" + text + "' is not an integer");
    }
}

inline uint64_t cap_from_env() {
    const char* raw = std::getenv("UNIMASS_ENUM_CAP");
    if (raw == nullptr) return default_enumeration_cap;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0')
        throw input_error("UNIMASS_ENUM_CAP must be a nonnegative integer");
    return v;
}

inline int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact mass formulas and basic-locus counts for Hermitian lattices"};
    app.require_subcommand(1);

    // raw string captures; exact integers are parsed after CLI11 runs
    std::string m_str, disc_str, gram, signature, prime_str, level_str, q_str, norm_str, ell_str;
    unsigned t_val = 0, n_val = 0, r_val = 0, prec_val = 0;
    std::string behavior, level_kind = "full", format = "table";
    uint64_t cap = 0;
    bool inject = false;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"json", "table"}));
        cmd->add_option("--cap", cap,
                        "enumeration budget in candidate counts (default: UNIMASS_ENUM_CAP or " +
                            std::to_string(default_enumeration_cap) + ")");
        return cmd;
    };
    const auto add_field = [&](CLI::App* cmd) {
        cmd->add_option("--m", m_str, "squarefree negative field parameter");
        cmd->add_option("--disc", disc_str, "field discriminant (alternative to --m)");
        return cmd;
    };
    const auto add_gram = [&](CLI::App* cmd) {
        cmd->add_option("--gram", gram, "identity:n, H, H^k, inline JSON, or a JSON file path");
        return cmd;
    };
    const auto add_shimura = [&](CLI::App* cmd) {
        add_field(cmd);
        add_gram(cmd);
        cmd->add_option("--signature", signature, "signature r,s of the form at infinity");
        cmd->add_option("--prime", prime_str, "odd prime, unramified in the field");
        cmd->add_option("--level", level_str, "level integer N >= 3, prime to the prime and the discriminant");
        return cmd;
    };

    CLI::App* c_mass = add_common(add_gram(add_field(
        app.add_subcommand("mass", "mass of the genus of a unimodular Hermitian lattice"))));
    CLI::App* c_inner = add_common(add_gram(add_field(
        app.add_subcommand("inner-mass", "mass of the inner form at a maximal parahoric"))));
    c_inner->add_option("--signature", signature, "signature r,s");
    c_inner->add_option("--prime", prime_str, "odd unramified prime");
    c_inner->add_option("--t", t_val, "parahoric vertex index (inert primes)");
    CLI::App* c_basic = add_common(add_shimura(
        app.add_subcommand("basic-locus", "component and point counts of the basic locus")));
    CLI::App* c_eo = add_common(add_shimura(
        app.add_subcommand("eo-strata", "closure count of the odd-index stratum, signature (1, n-1)")));
    c_eo->add_option("--t", t_val, "odd stratum index, 1 <= t <= n");
    CLI::App* c_pi0 = add_common(add_shimura(
        app.add_subcommand("pi0", "connected component counts of the space and its basic locus")));
    c_pi0->add_option("--level-kind", level_kind, "full or principal")
        ->check(CLI::IsMember({"full", "principal"}));
    c_pi0->add_option("--norm-index", norm_str, "norm index of the level group (principal kind)");
    CLI::App* c_adlv = add_common(
        app.add_subcommand("adlv", "orbit count for the affine Deligne-Lusztig components"));
    c_adlv->add_option("--behavior", behavior, "inert or split")
        ->check(CLI::IsMember({"inert", "split"}));
    c_adlv->add_option("--n", n_val, "rank");
    c_adlv->add_option("--r", r_val, "signature entry, 0 <= r <= n");
    CLI::App* c_fermat =
        add_common(app.add_subcommand("fermat", "point count of the projective hypersurface "
                                                "sum x_i^(q+1) = 0 over F_(q^2)"));
    c_fermat->add_option("--q", q_str, "prime power");
    c_fermat->add_option("--n", n_val, "projective dimension");
    CLI::App* c_hecke = add_common(add_shimura(
        app.add_subcommand("hecke-bound", "bound on the eigensystem count at the given prime")));
    CLI::App* c_dens = add_common(add_gram(add_field(
        app.add_subcommand("local-density", "local density of a unimodular Hermitian lattice"))));
    c_dens->add_option("--ell", ell_str, "prime of localization");
    c_dens->add_option("--precision", prec_val, "cross-check by counting over Z/ell^precision");
    CLI::App* c_verify = add_common(
        app.add_subcommand("verify", "run the oracle suites: closed forms against enumeration"));
    c_verify->add_flag("--inject-mismatch", inject,
                       "internal: force one mismatch to exercise the failure path")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    JobSpec job;
    try {
        job.command = app.get_subcommands().front()->get_name();
        if (!m_str.empty()) job.m = parse_int(m_str, "--m");
        if (!disc_str.empty()) job.disc = parse_int(disc_str, "--disc");
        job.gram_spec = gram;
        if (!signature.empty()) {
            const auto comma = signature.find(',');
            if (comma == std::string::npos)
                throw input_error("--signature must be of the form r,s");
            const Int r = parse_int(signature.substr(0, comma), "--signature");
            const Int s = parse_int(signature.substr(comma + 1), "--signature");
            if (r < 0 || s < 0 || r > 64 || s > 64)
                throw input_error("--signature entries must lie in 0..64");
            job.signature = {r.convert_to<unsigned>(), s.convert_to<unsigned>()};
        }
        if (!prime_str.empty()) job.prime = parse_int(prime_str, "--prime");
        if (!level_str.empty()) job.level = parse_int(level_str, "--level");
        if (!q_str.empty()) job.q_value = parse_int(q_str, "--q");
        if (!norm_str.empty()) job.norm_index = parse_int(norm_str, "--norm-index");
        if (!ell_str.empty()) job.ell = parse_int(ell_str, "--ell");
        if (c_inner->count("--t") || c_eo->count("--t")) job.t_index = t_val;
        if (c_adlv->count("--n") || c_fermat->count("--n")) job.rank_n = n_val;
        if (c_adlv->count("--r")) job.orbit_r = r_val;
        if (c_dens->count("--precision")) job.precision = prec_val;
        job.behavior = behavior;
        job.level_kind = level_kind;
        job.format = format;
        job.inject_mismatch = inject;
        const bool cap_given = c_mass->count("--cap") || c_inner->count("--cap") ||
                               c_basic->count("--cap") || c_eo->count("--cap") ||
                               c_pi0->count("--cap") || c_adlv->count("--cap") ||
                               c_fermat->count("--cap") || c_hecke->count("--cap") ||
                               c_dens->count("--cap") || c_verify->count("--cap");
        job.cap = cap_given ? cap : cap_from_env();

        if (job.command == "verify") return run_verify(job, out);
        ResultDocument doc;
        if (job.command == "mass") doc = run_mass(job);
        else if (job.command == "inner-mass") doc = run_inner_mass(job);
        else if (job.command == "basic-locus") doc = run_basic_locus(job);
        else if (job.command == "eo-strata") doc = run_eo_strata(job);
        else if (job.command == "pi0") doc = run_pi0(job);
        else if (job.command == "adlv") doc = run_adlv(job);
        else if (job.command == "fermat") doc = run_fermat(job);
        else if (job.command == "hecke-bound") doc = run_hecke_bound(job);
        else if (job.command == "local-density") doc = run_local_density(job);
        else throw input_error("unknown command");
        emit(doc, job, out);
        return 0;
    } catch (const input_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const unsupported_error& e) {
        err << "unsupported: " << e.what() << "\n";
        return 3;
    } catch (const consistency_error& e) {
        err << "internal inconsistency: " << e.what() << "\n";
        return 4;
    }
}

} // namespace unimass::cli
