#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tamtl/bmc.hpp"
#include "tamtl/corpus.hpp"
#include "tamtl/discretizer.hpp"
#include "tamtl/eval.hpp"
#include "tamtl/kernel.hpp"
#include "tamtl/parser.hpp"
#include "tamtl/verifier.hpp"

using namespace tamtl;

namespace {

enum exit_code : int {
    ok = 0,
    falsified = 1,
    inconclusive = 2,
    usage = 64,
    data = 65,
    no_input = 66,
    unavailable = 69,
    internal = 70,
};

// Exit status carried by an exception.
struct cli_failure : std::runtime_error {
    cli_failure(int c, const std::string& what) : std::runtime_error(what), code(c) {}
    int code;
};

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw cli_failure(no_input, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

model_file load(const std::string& path) {
    auto text = read_file(path);
    try {
        return parse_model(text);
    } catch (const parse_error& e) {
        throw cli_failure(data, path + ":" + e.what());
    }
}

struct common_flags {
    std::string delta;
    std::optional<int> bound;
    std::string solver;
    double timeout{600};
    bool json{false};
    bool naive_guards{false};
};

void add_common(CLI::App* cmd, common_flags& f) {
    cmd->add_option("--delta", f.delta, "sampling period, e.g. 1 or 1/2 (default: the model's)");
    cmd->add_option("--bound,-k", f.bound, "lasso length k (default: the model's, else max(30, 2*bound/delta+2))")
        ->check(CLI::Range(2, 100000));
    cmd->add_option("--solver", f.solver,
                    "SAT solver: builtin:cdcl, builtin:dpll or a command reading DIMACS (default: $TAMTL_SOLVER)");
    cmd->add_option("--timeout", f.timeout, "solver timeout in seconds")->check(CLI::PositiveNumber);
    cmd->add_flag("--json", f.json, "machine-readable output");
    cmd->add_flag("--naive-guards", f.naive_guards, "over-approximate guards mechanically (shows vacuity)");
}

verify_options options_of(const common_flags& f) {
    verify_options o;
    if (!f.delta.empty()) {
        try {
            o.delta = parse_rational(f.delta);
        } catch (const std::exception&) {
            throw cli_failure(usage, "--delta: not a number: " + f.delta);
        }
        if (*o.delta <= rational(0)) throw cli_failure(usage, "--delta must be positive");
    }
    o.bound = f.bound;
    if (!f.solver.empty()) {
        std::istringstream in(f.solver);
        o.solver = {};
        in >> o.solver.executable;
        for (std::string a; in >> a;) o.solver.args.push_back(a);
    }
    o.solver.timeout_seconds = f.timeout;
    o.naive_guards = f.naive_guards;
    return o;
}

// "2" -> "p2", "3'" -> "p3p"; names present in the model are kept.
std::string property_name(const model_file& m, std::string sel) {
    if (m.property(sel)) return sel;
    if (!sel.empty() && sel.back() == '\'') sel = sel.substr(0, sel.size() - 1) + "p";
    if (!sel.empty() && std::isdigit(static_cast<unsigned char>(sel.front()))) sel = "p" + sel;
    if (m.property(sel)) return sel;
    throw cli_failure(usage, "no property '" + sel + "' in the model");
}

std::vector<std::string> selected(const model_file& m, const std::vector<std::string>& sel) {
    std::vector<std::string> out;
    if (sel.empty() || (sel.size() == 1 && sel[0] == "all")) {
        for (const auto& p : m.properties) out.push_back(p.name);
        if (out.empty()) throw cli_failure(usage, "the model has no properties");
        return out;
    }
    for (const auto& s : sel) out.push_back(property_name(m, s));
    return out;
}

bool solver_missing(const check_report& c) {
    return c.ran && c.result == solve_result::status::unknown && c.reason.rfind("cannot start", 0) == 0;
}

int cmd_verify(const std::string& path, const std::vector<std::string>& props, const common_flags& f, bool both) {
    auto m = load(path);
    auto opt = options_of(f);
    opt.run_both = both;
    auto names = selected(m, props);
    int code = ok;
    bool missing = false;
    nlohmann::json all = nlohmann::json::array();
    for (const auto& n : names) {
        auto v = check_property(m, n, opt);
        missing = missing || solver_missing(v.prove) || solver_missing(v.refute);
        if (f.json) all.push_back(nlohmann::json::parse(to_json(v)));
        else std::cout << format_report(v) << std::flush;
        if (v.outcome == verdict::kind::falsified) code = falsified;
        else if (v.outcome == verdict::kind::inconclusive && code == ok) code = inconclusive;
    }
    if (f.json) std::cout << (all.size() == 1 ? all[0] : all).dump(2) << "\n";
    if (missing) throw cli_failure(unavailable, "the SAT solver could not be started");
    return code;
}

int cmd_check(const std::string& path, const common_flags& f) {
    auto m = load(path);
    auto c = check_consistency(m, options_of(f));
    std::cout << (f.json ? to_json(c) + "\n" : format_report(c));
    if (solver_missing(c.under) || solver_missing(c.over))
        throw cli_failure(unavailable, "the SAT solver could not be started");
    switch (c.outcome) {
    case consistency::status::consistent: return ok;
    case consistency::status::inconsistent: return falsified;
    case consistency::status::unknown: return inconclusive;
    }
    return internal;
}

template <class F>
void print_axioms(const std::vector<axiom<F>>& axioms, const std::string& instance, nlohmann::json* out) {
    for (const auto& a : axioms) {
        if (out) {
            out->push_back({{"instance", instance}, {"family", to_string(a.family)}, {"label", a.label},
                            {"formula", to_string(a.formula)}});
        } else {
            std::cout << "# " << instance << " " << to_string(a.family) << " " << a.label << "\n"
                      << to_string(a.formula) << "\n";
        }
    }
}

int cmd_show(const std::string& what, const std::vector<std::string>& args, const common_flags& f,
             const std::string& kind_opt, const std::string& model_opt) {
    nlohmann::json out = nlohmann::json::array();
    nlohmann::json* jp = f.json ? &out : nullptr;
    if (what == "approx") {
        if (args.size() != 1) throw cli_failure(usage, "show approx takes one formula");
        dense_formula formula;
        signature sig;
        formula_env env;
        std::optional<model_file> m;
        if (!model_opt.empty()) {
            m = load(model_opt);
            env.constants = &m->constants;
            env.delta = m->delta;
        }
        auto opt = options_of(f);
        rational delta = opt.delta ? *opt.delta : (m ? m->delta : rational(1));
        env.delta = delta;
        try {
            if (m) formula = parse_formula(args[0], m->sig, env);
            else formula = parse_formula_free(args[0], env).first;
        } catch (const parse_error& e) {
            throw cli_failure(data, e.what());
        }
        auto u = under_approx(formula, delta), o = over_approx(formula, delta);
        std::vector<std::string> warnings;
        for (const auto* z : {&u, &o})
            for (const auto& w : vacuity_warnings(*z)) warnings.push_back(w);
        if (f.json) {
            std::cout << nlohmann::json{{"formula", to_string(formula)},
                                        {"delta", to_string(delta)},
                                        {"under", to_string(u)},
                                        {"over", to_string(o)},
                                        {"under_simplified", to_string(simplify(u))},
                                        {"over_simplified", to_string(simplify(o))},
                                        {"warnings", warnings}}
                             .dump(2)
                      << "\n";
        } else {
            std::cout << "formula: " << to_string(formula) << "\n"
                      << "under:   " << to_string(u) << "\n"
                      << "         = " << to_string(simplify(u)) << "\n"
                      << "over:    " << to_string(o) << "\n"
                      << "         = " << to_string(simplify(o)) << "\n";
            for (const auto& w : warnings) std::cout << "warning: " << w << "\n";
        }
        return ok;
    }

    std::string kind = what;
    if (what == "axioms") kind = kind_opt + "-axioms";
    if (kind != "dense-axioms" && kind != "under-axioms" && kind != "over-axioms" && kind != "properties")
        throw cli_failure(usage, "unknown item to show: " + what);
    if (args.size() != 1) throw cli_failure(usage, "show " + what + " takes one model file");
    auto m = load(args[0]);
    auto opt = options_of(f);
    rational delta = opt.delta ? *opt.delta : m.delta;
    try {
        if (kind == "properties") {
            for (const auto& p : m.properties) {
                auto u = to_string(under_approx(p.formula, delta)), o = to_string(over_approx(p.formula, delta));
                if (jp) jp->push_back({{"name", p.name}, {"formula", to_string(p.formula)}, {"under", u}, {"over", o}});
                else std::cout << "# " << p.name << "\n" << to_string(p.formula) << "\nunder: " << u << "\nover:  " << o << "\n";
            }
        }
        for (const auto& inst : m.instances) {
            if (kind == "dense-axioms") print_axioms(dense_axioms(inst, delta), inst.name, jp);
            if (kind == "under-axioms") print_axioms(under_axioms(inst, delta), inst.name, jp);
            if (kind == "over-axioms") print_axioms(over_axioms(inst, delta, {opt.naive_guards}), inst.name, jp);
        }
        if (kind != "properties") {
            for (const auto& a : m.axioms) {
                std::string text = kind == "dense-axioms"   ? to_string(a.formula)
                                   : kind == "under-axioms" ? to_string(under_approx(a.formula, delta))
                                                            : to_string(over_approx(a.formula, delta));
                if (jp) jp->push_back({{"instance", ""}, {"family", "system"}, {"label", a.name}, {"formula", text}});
                else std::cout << "# system " << a.name << "\n" << text << "\n";
            }
        }
    } catch (const granularity_error& e) {
        throw cli_failure(data, e.what());
    }
    if (jp) std::cout << out.dump(2) << "\n";
    return ok;
}

int cmd_eval(const std::string& model_path, const std::string& trace_path, const common_flags& f) {
    auto m = load(model_path);
    auto opt = options_of(f);
    auto text = read_file(trace_path);
    // the trace may mention auxiliary propositions of flattened system axioms
    auto under = consistency_check(m, 1, opt);
    auto over = consistency_check(m, 2, opt);
    lasso_trace t;
    signature sig = over.sig;
    for (const auto& p : under.sig.propositions())
        if (!sig.contains(p)) sig.add_proposition(p);
    try {
        t = parse_trace(text, sig);
    } catch (const std::exception& e) {
        throw cli_failure(data, trace_path + ": " + e.what());
    }
    rational delta = opt.delta ? *opt.delta : m.delta;
    struct row {
        std::string side, name;
        std::optional<std::int64_t> fail;
    };
    std::vector<row> rows;
    auto run = [&](const std::string& side, const std::string& name, const discrete_formula& z) {
        rows.push_back({side, name, evaluator(sig, z).first_violation(t)});
    };
    auto sides = std::vector<std::pair<std::string, approx_kind>>{{"under", approx_kind::under},
                                                                 {"over", approx_kind::over}};
    for (const auto& [side_name, kind] : sides) {
        auto side = build_side(m, delta, kind, opt.naive_guards);
        for (std::size_t i = 0; i < side.globally.size(); ++i) run(side_name, side.labels[i], side.globally[i]);
    }
    for (const auto& p : m.properties) {
        run("under", "property " + p.name, under_approx(p.formula, delta));
        run("over", "property " + p.name, over_approx(p.formula, delta));
    }
    bool all_pass = true;
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows) {
        all_pass = all_pass && !r.fail;
        if (f.json) {
            nlohmann::json j{{"side", r.side}, {"name", r.name}, {"pass", !r.fail}};
            if (r.fail) j["position"] = *r.fail;
            out.push_back(j);
        } else {
            std::cout << r.side << "\t" << r.name << "\t" << (r.fail ? "fail@" + std::to_string(*r.fail) : "pass")
                      << "\n";
        }
    }
    if (f.json) std::cout << out.dump(2) << "\n";
    return all_pass ? ok : falsified;
}

int cmd_encode(const std::string& path, const std::string& prop, int check, const std::string& out_path,
               const common_flags& f) {
    auto m = load(path);
    auto opt = options_of(f);
    auto problem = prop.empty() ? consistency_check(m, check, opt)
                                : property_check(m, *m.property(property_name(m, prop)), check, opt);
    encoding enc;
    try {
        enc = encode(problem.request, problem.sig, problem.bound);
    } catch (const encode_error& e) {
        throw cli_failure(e.code() == encode_error::kind::contradiction ? falsified : usage, e.what());
    }
    auto text = to_dimacs(enc.cnf);
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream o(out_path, std::ios::binary);
        o << text;
        if (!o) throw cli_failure(internal, "cannot write " + out_path);
    }
    auto st = cnf_stats(enc.cnf);
    std::cerr << "k=" << problem.bound << ": " << st.vars << " variables, " << st.clauses << " clauses\n";
    return ok;
}

int cmd_sat(const std::string& path, double timeout, bool dpll) {
    cnf_problem p;
    try {
        p = parse_dimacs(read_file(path));
    } catch (const dimacs_error& e) {
        throw cli_failure(data, path + ": " + e.what());
    }
    auto r = dpll ? solve_dpll(p, timeout) : solve_cdcl(p, timeout);
    std::cout << format_solver_output(r) << std::flush;
    if (r.is_sat()) return 10;
    if (r.is_unsat()) return 20;
    return 0;
}

int cmd_corpus(int n, int t1, int t2, int t3, int bound, const std::string& out_path) {
    if (n < 1) throw cli_failure(usage, "--instances must be at least 1");
    auto text = corpus_protocol_text(n, t1, t2, t3, bound);
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream o(out_path, std::ios::binary);
        o << text;
        if (!o) throw cli_failure(internal, "cannot write " + out_path);
    }
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounded verification of timed automata and metric temporal logic through discretization"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "tamtl 1.0");

    common_flags flags;
    std::string model, trace, what, kind = "under", model_opt, out_path, cnf_path, property;
    std::vector<std::string> props, show_args;
    bool both = false, dpll = false;
    int check = 1;
    int n = 1, t1 = 3, t2 = 6, t3 = 18, bound = 30;
    double sat_timeout = 600;

    auto* verify = app.add_subcommand("verify", "check properties of a model (exit 0 verified, 1 falsified, 2 inconclusive)");
    verify->add_option("model", model, "model file")->required();
    verify->add_option("--property,-p", props, "property names (2 means p2, 3' means p3p); default: all");
    verify->add_flag("--both", both, "run the falsification check even after a proof");
    add_common(verify, flags);

    auto* check_cmd = app.add_subcommand("check", "check that the approximated axiom systems have runs");
    check_cmd->add_option("model", model, "model file")->required();
    add_common(check_cmd, flags);

    auto* show = app.add_subcommand("show", "print axioms, properties or approximations");
    show->add_option("what", what, "dense-axioms, under-axioms, over-axioms, axioms, properties or approx")
        ->required();
    show->add_option("args", show_args, "model file, or the formula for approx");
    show->add_option("--kind", kind, "axiom kind for 'show axioms'")
        ->check(CLI::IsMember({"dense", "under", "over"}));
    show->add_option("--model", model_opt, "model giving names and constants for 'show approx'");
    add_common(show, flags);

    auto* eval = app.add_subcommand("eval", "evaluate axioms and properties on a trace file");
    eval->add_option("model", model, "model file")->required();
    eval->add_option("trace", trace, "trace file")->required();
    add_common(eval, flags);

    auto* enc = app.add_subcommand("encode", "write the DIMACS problem of one check");
    enc->add_option("model", model, "model file")->required();
    enc->add_option("--property,-p", property, "property; without it the axiom system alone is encoded");
    enc->add_option("--check", check, "1: under side, 2: over side")->check(CLI::IsMember({1, 2}));
    enc->add_option("--output,-o", out_path, "output file (default: stdout)");
    add_common(enc, flags);

    auto* sat = app.add_subcommand("sat", "solve a DIMACS file with the built-in solver (exit 10 sat, 20 unsat)");
    sat->add_option("cnf", cnf_path, "DIMACS file")->required();
    sat->add_option("--timeout", sat_timeout, "seconds")->check(CLI::PositiveNumber);
    sat->add_flag("--dpll", dpll, "use the plain DPLL solver");

    auto* corpus = app.add_subcommand("corpus", "print the request/response protocol model");
    corpus->add_option("--instances,-n", n, "number of protocol instances");
    corpus->add_option("--t1", t1, "send timeout");
    corpus->add_option("--t2", t2, "answer timeout");
    corpus->add_option("--t3", t3, "whole-run timeout");
    corpus->add_option("--bound,-k", bound, "lasso length stored in the model");
    corpus->add_option("--output,-o", out_path, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }

    try {
        if (*verify) return cmd_verify(model, props, flags, both);
        if (*check_cmd) return cmd_check(model, flags);
        if (*show) return cmd_show(what, show_args, flags, kind, model_opt);
        if (*eval) return cmd_eval(model, trace, flags);
        if (*enc) return cmd_encode(model, property, check, out_path, flags);
        if (*sat) return cmd_sat(cnf_path, sat_timeout, dpll);
        if (*corpus) return cmd_corpus(n, t1, t2, t3, bound, out_path);
    } catch (const cli_failure& e) {
        std::cerr << "tamtl: " << e.what() << "\n";
        return e.code;
    } catch (const verify_error& e) {
        std::cerr << "tamtl: " << e.what() << "\n";
        return data;
    } catch (const parse_error& e) {
        std::cerr << "tamtl: " << e.what() << "\n";
        return data;
    } catch (const std::exception& e) {
        std::cerr << "tamtl: internal error: " << e.what() << "\n";
        return internal;
    }
    return usage;
}
