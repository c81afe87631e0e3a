// Command-line front end: solvability decisions, lifts, searches, and
// certificate verification with reproducible JSON output.
//
// Exit codes: 0 decided / verified, 1 invalid certificate, 2 invalid input,
// 3 budget exceeded.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hasse/certificate_json.hpp"
#include "hasse/hasse.hpp"

using namespace hasse;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
    bool json = false;
    int threads = 1;
    std::vector<std::string> raw_args;
};

ordered_json make_manifest(const std::string& command, const Options& opt,
                           const ordered_json& budgets, const std::string& outcome) {
    ordered_json m;
    m["command"] = command;
    m["arguments"] = opt.raw_args;
    m["budgets"] = budgets;
    m["version"] = kVersion;
    m["outcome"] = outcome;
    return m;
}

void emit(const std::string& command, const Options& opt, const ordered_json& budgets,
          const std::string& outcome, const ordered_json& result) {
    ordered_json out;
    out["manifest"] = make_manifest(command, opt, budgets, outcome);
    out["result"] = result;
    std::cout << out.dump(2) << "\n";
}

ordered_json quadruple_json(const SolutionQuadruple& s) {
    ordered_json j;
    j["u"] = s.u;
    j["v"] = s.v;
    j["w"] = s.w;
    j["z"] = s.z;
    j["modulus"] = s.modulus;
    j["classification"] = to_string(s.classification);
    return j;
}

std::string quadruple_str(const SolutionQuadruple& s) {
    std::ostringstream os;
    os << "(" << s.u << ", " << s.v << ", " << s.w << ", " << s.z << ")";
    if (s.modulus) os << " mod " << s.modulus;
    os << " [" << to_string(s.classification) << "]";
    return os.str();
}

void print_local_report(const LocalReport& rep) {
    std::cout << "system: " << rep.coeffs.a << " U^2 + " << rep.coeffs.c << " W^2 = "
              << rep.coeffs.d << " Z^2,  U W = V^2\n";
    std::cout << "real: " << (rep.real.solvable ? "solvable" : "not solvable") << " ("
              << rep.real.witness << ")\n";
    for (const auto& dec : rep.primes) {
        std::cout << "p = " << dec.p << ": "
                  << (dec.solvable ? "solvable" : "not solvable") << "  [case "
                  << to_string(dec.transcript.terminal) << "]";
        if (dec.witness) {
            std::cout << "  witness " << quadruple_str(*dec.witness);
            if (dec.companion)
                std::cout << " for companion (" << dec.witness_system.a << ", "
                          << dec.witness_system.c << ", " << dec.witness_system.d << ")";
        }
        std::cout << "\n";
    }
    std::cout << "all other primes: solvable (odd p coprime to acd always lifts)\n";
    std::cout << "locally solvable: " << (rep.locally_solvable ? "yes" : "no") << "\n";
}

ordered_json local_report_json(const LocalReport& rep) {
    ordered_json j;
    j["coeffs"] = {rep.coeffs.a, rep.coeffs.b, rep.coeffs.c, rep.coeffs.d};
    j["real"] = rep.real.solvable;
    j["real_witness"] = rep.real.witness;
    ordered_json primes = ordered_json::array();
    for (const auto& dec : rep.primes) {
        ordered_json e;
        e["p"] = dec.p;
        e["solvable"] = dec.solvable;
        e["case"] = to_string(dec.transcript.terminal);
        e["terminal"] = {dec.transcript.a, dec.transcript.c, dec.transcript.d};
        if (dec.witness) {
            e["witness"] = {dec.witness->u, dec.witness->v, dec.witness->w, dec.witness->z};
            e["modulus"] = dec.witness->modulus;
            e["companion"] = dec.companion;
        }
        primes.push_back(e);
    }
    j["primes"] = primes;
    j["locally_solvable"] = rep.locally_solvable;
    return j;
}

// b != 0: only the good primes (coprime to 2acd(b^2-4ac)) are decidable,
// through the p-adic route; name the bad primes explicitly.
int run_local_general_b(const SystemCoeffs& coeffs, const Options& opt) {
    RealVerdict rv = real_solvable(coeffs);
    __int128 disc128 = __int128(coeffs.b) * coeffs.b - __int128(4) * coeffs.a * coeffs.c;
    if (disc128 == 0) throw InvalidInput("local: b^2 - 4ac must be nonzero when b != 0");
    i64 disc = i64(disc128);
    std::set<i64> bad{2};
    for (i64 x : {coeffs.a, coeffs.c, coeffs.d, disc}) {
        for (auto& [p, e] : factorize(x)) {
            (void)e;
            bad.insert(p);
        }
    }
    ordered_json jbad = ordered_json::array();
    for (i64 p : bad) jbad.push_back(p);
    std::string outcome = rv.solvable ? "undetermined (bad primes lack a decision procedure)"
                                      : "not locally solvable (fails over R)";
    if (opt.json) {
        ordered_json res;
        res["coeffs"] = {coeffs.a, coeffs.b, coeffs.c, coeffs.d};
        res["real"] = rv.solvable;
        res["real_witness"] = rv.witness;
        res["good_primes"] = "solvable: every p coprime to 2acd(b^2-4ac) admits Z_p solutions";
        res["bad_primes"] = jbad;
        emit("local", opt, {{"factor_trial_bound", 1000000}}, outcome, res);
    } else {
        std::cout << "general b = " << coeffs.b << ": decidable at good primes only\n";
        std::cout << "real: " << (rv.solvable ? "solvable" : "not solvable") << " ("
                  << rv.witness << ")\n";
        std::cout << "good primes (coprime to 2acd(b^2-4ac)): solvable via Z_p lifting\n";
        std::cout << "bad primes (no decision procedure for b != 0):";
        for (i64 p : bad) std::cout << " " << p;
        std::cout << "\nverdict: " << outcome << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"local-global solvability toolkit for a U^2 + b V^2 + c W^2 = d Z^2, U W = V^2"};
    app.require_subcommand(1);

    Options opt;
    for (int i = 1; i < argc; ++i) opt.raw_args.push_back(argv[i]);
    opt.threads = int(std::max(1u, std::thread::hardware_concurrency()));
    app.add_flag("--json", opt.json, "emit JSON (with a run manifest)");
    app.add_option("--threads", opt.threads, "worker threads for searches");

    // legendre
    i64 la = 0, lp = 0;
    auto* legendre_cmd = app.add_subcommand("legendre", "Legendre symbol (a/p)");
    legendre_cmd->add_option("a", la)->required();
    legendre_cmd->add_option("p", lp)->required();

    // conic
    i64 ca = 0, cb = 0, cp = 0;
    auto* conic_cmd =
        app.add_subcommand("conic", "point and parametrization of a x^2 + b y^2 = 1 over F_p");
    conic_cmd->add_option("a", ca)->required();
    conic_cmd->add_option("b", cb)->required();
    conic_cmd->add_option("p", cp)->required();

    // solve-fp
    i64 sa = 0, sc = 0, sd = 0, sp = 0, sb = 0;
    auto* solve_cmd = app.add_subcommand("solve-fp", "nontrivial F_p solution of the system");
    solve_cmd->add_option("a", sa)->required();
    solve_cmd->add_option("c", sc)->required();
    solve_cmd->add_option("d", sd)->required();
    solve_cmd->add_option("p", sp)->required();
    solve_cmd->add_option("--b", sb, "middle coefficient (default 0)");

    // lift
    i64 ln = 0, lr = 0, lpp = 0;
    int lk = 1;
    auto* lift_cmd = app.add_subcommand("lift", "lift an r-th power from mod p to mod p^k");
    lift_cmd->add_option("N", ln)->required();
    lift_cmd->add_option("r", lr)->required();
    lift_cmd->add_option("p", lpp)->required();
    lift_cmd->add_option("k", lk)->required();

    // local
    i64 xa = 0, xb = 0, xc = 0, xd = 0;
    auto* local_cmd = app.add_subcommand("local", "decide local solvability (real + every prime)");
    local_cmd->add_option("a", xa)->required();
    local_cmd->add_option("b", xb)->required();
    local_cmd->add_option("c", xc)->required();
    local_cmd->add_option("d", xd)->required();

    // global-search
    i64 ga = 0, gb = 0, gc = 0, gd = 0, gh = 1000;
    auto* global_cmd = app.add_subcommand("global-search", "bounded integer solution search");
    global_cmd->add_option("a", ga)->required();
    global_cmd->add_option("b", gb)->required();
    global_cmd->add_option("c", gc)->required();
    global_cmd->add_option("d", gd)->required();
    global_cmd->add_option("--height", gh, "max coordinate (default 1000)");

    // counterexamples
    SearchConfig cfg;
    bool relaxed = false;
    auto* cx_cmd = app.add_subcommand("counterexamples", "search and certify (q, d) pairs");
    cx_cmd->add_option("--q-bound", cfg.q_bound, "largest q (default 100)");
    cx_cmd->add_option("--d-bound", cfg.d_bound, "largest |d| (default 20)");
    cx_cmd->add_option("--height", cfg.height, "integer sweep per certificate (default 200)");
    cx_cmd->add_option("--lambda", cfg.lambda, "extendability cross-check depth (default off)");
    cx_cmd->add_flag("--relaxed-mod8", relaxed, "use the q = 1 mod 8 hypothesis");

    // verify
    std::string cert_path;
    auto* verify_cmd =
        app.add_subcommand("verify", "re-verify a certificate file (JSON lines)");
    verify_cmd->add_option("file", cert_path)->required();

    // padic-solve
    i64 pa = 0, pb = 0, pc2 = 0, pd = 0, pp = 0;
    int pK = 8;
    auto* padic_cmd = app.add_subcommand("padic-solve", "Z_p solution for a good prime (general b)");
    padic_cmd->add_option("a", pa)->required();
    padic_cmd->add_option("b", pb)->required();
    padic_cmd->add_option("c", pc2)->required();
    padic_cmd->add_option("d", pd)->required();
    padic_cmd->add_option("p", pp)->required();
    padic_cmd->add_option("K", pK, "precision (default 8)");

    // let --json / --threads appear after the subcommand
    for (auto* sc : app.get_subcommands(nullptr)) sc->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (legendre_cmd->parsed()) {
            LegendreValue v = legendre(la, lp);
            if (opt.json) emit("legendre", opt, ordered_json::object(), "ok", v);
            else std::cout << "(" << la << "/" << lp << ") = " << v << "\n";
            return 0;
        }
        if (conic_cmd->parsed()) {
            ConicPoint pt = find_conic_point(ca, cb, cp);
            if (cp == 2) {
                if (opt.json) {
                    ordered_json res;
                    res["point"] = {pt.x0, pt.y0};
                    emit("conic", opt, ordered_json::object(), "ok", res);
                } else {
                    std::cout << "point: (" << pt.x0 << ", " << pt.y0
                              << ")  (p = 2: no parametrization)\n";
                }
                return 0;
            }
            ConicParam par = parametrize_conic(ca, cb, cp, pt);
            if (opt.json) {
                ordered_json res;
                res["point"] = {pt.x0, pt.y0};
                res["q1"] = {par.q1.c[0], par.q1.c[1], par.q1.c[2]};
                res["q2"] = {par.q2.c[0], par.q2.c[1], par.q2.c[2]};
                res["q3"] = {par.q3.c[0], par.q3.c[1], par.q3.c[2]};
                emit("conic", opt, ordered_json::object(), "ok", res);
            } else {
                auto poly = [](const QuadPoly& q) {
                    std::ostringstream os;
                    os << q.c[2] << " T^2 + " << q.c[1] << " T + " << q.c[0];
                    return os.str();
                };
                std::cout << "point: (" << pt.x0 << ", " << pt.y0 << ")\n";
                std::cout << "q1 = " << poly(par.q1) << "\n";
                std::cout << "q2 = " << poly(par.q2) << "\n";
                std::cout << "q3 = " << poly(par.q3) << "\n";
            }
            return 0;
        }
        if (solve_cmd->parsed()) {
            SolutionQuadruple s = sb == 0 ? solve_system_fp(sa, sc, sd, sp)
                                          : solve_general_fp(sa, sb, sc, sd, sp);
            if (opt.json) emit("solve-fp", opt, ordered_json::object(), "ok", quadruple_json(s));
            else std::cout << quadruple_str(s) << "\n";
            return 0;
        }
        if (lift_cmd->parsed()) {
            Residue r = (lpp == 2 && lr == 4) ? lift_fourth_power_2adic(ln, lk)
                                              : lift_rth_power({ln, lr, lpp, lk});
            if (opt.json) {
                ordered_json res;
                res["value"] = r.value;
                res["modulus"] = r.modulus;
                emit("lift", opt, ordered_json::object(), "ok", res);
            } else {
                std::cout << r.value << "^" << lr << " = " << mod_reduce(ln, r.modulus)
                          << " (mod " << r.modulus << ")\n";
            }
            return 0;
        }
        if (local_cmd->parsed()) {
            SystemCoeffs coeffs{xa, xb, xc, xd};
            if (coeffs.a == 0 || coeffs.c == 0 || coeffs.d == 0)
                throw InvalidInput("local: a, c, d must be nonzero");
            if (xb != 0) return run_local_general_b(coeffs, opt);
            LocalReport rep = decide_local(coeffs);
            if (opt.json) {
                emit("local", opt, {{"factor_trial_bound", 1000000}},
                     rep.locally_solvable ? "locally solvable" : "not locally solvable",
                     local_report_json(rep));
            } else {
                print_local_report(rep);
            }
            return 0;
        }
        if (global_cmd->parsed()) {
            auto hit = global_search_height({ga, gb, gc, gd}, gh);
            if (opt.json) {
                ordered_json res;
                res["height"] = gh;
                res["found"] = hit.has_value();
                if (hit) res["solution"] = quadruple_json(*hit);
                emit("global-search", opt, {{"height_budget", 20000}},
                     hit ? "solution found" : "no solution below height", res);
            } else {
                if (hit) std::cout << "solution: " << quadruple_str(*hit) << "\n";
                else std::cout << "no nontrivial solution with height <= " << gh << "\n";
            }
            return 0;
        }
        if (cx_cmd->parsed()) {
            cfg.hypothesis = relaxed ? HypothesisMode::Mod8 : HypothesisMode::Mod16;
            cfg.threads = opt.threads;
            auto certs = search_counterexamples(cfg);
            if (opt.json) {
                ordered_json budgets{{"q_bound", cfg.q_bound},
                                     {"d_bound", cfg.d_bound},
                                     {"height", cfg.height}};
                std::ostringstream outcome;
                outcome << certs.size() << " certificate(s)";
                ordered_json m;
                m["manifest"] = make_manifest("counterexamples", opt, budgets, outcome.str());
                std::cout << m.dump() << "\n";
                for (const auto& c : certs) std::cout << certificate_to_json(c).dump() << "\n";
            } else {
                for (const auto& c : certs) {
                    std::cout << "q = " << c.q << ", d = " << c.d
                              << ": locally solvable, no integer solutions (height "
                              << c.height_checked << " swept, obstruction holds)\n";
                }
                std::cout << certs.size() << " certificate(s)\n";
            }
            return 0;
        }
        if (verify_cmd->parsed()) {
            std::ifstream in(cert_path);
            if (!in) {
                std::cerr << "cannot open " << cert_path << "\n";
                return 2;
            }
            std::string line;
            int checked = 0;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                ordered_json j = ordered_json::parse(line, nullptr, false);
                if (j.is_discarded()) {
                    std::cerr << "malformed JSON line\n";
                    return 1;
                }
                if (j.contains("manifest") && !j.contains("q")) continue;  // stream header
                VerifyResult v = verify_certificate(j);
                if (!v.ok) {
                    std::cout << "INVALID (q = " << j.value("q", i64(0)) << ", d = "
                              << j.value("d", i64(0)) << "): " << v.first_failure << "\n";
                    return 1;
                }
                ++checked;
            }
            std::cout << checked << " certificate(s) valid\n";
            return 0;
        }
        if (padic_cmd->parsed()) {
            GeneralPadicSolution s = p_local_solve_general({pa, pb, pc2, pd}, pp, pK);
            if (opt.json) {
                ordered_json res;
                res["u"] = s.u.digits;
                res["v"] = s.v.digits;
                res["w"] = s.w.digits;
                res["z"] = s.z.digits;
                res["swapped_uw"] = s.swapped_uw;
                res["precision"] = pK;
                emit("padic-solve", opt, ordered_json::object(), "ok", res);
            } else {
                auto dump = [](const char* n, const PadicApprox& x) {
                    std::cout << n << ":";
                    for (i64 d : x.digits) std::cout << " " << d;
                    std::cout << "\n";
                };
                std::cout << "truncations mod p^1 .. p^" << pK
                          << (s.swapped_uw ? " (U and W swapped during normalization)" : "")
                          << "\n";
                dump("u", s.u);
                dump("v", s.v);
                dump("w", s.w);
                dump("z", s.z);
            }
            return 0;
        }
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
