#include "tamtl/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "json.hpp"

#include "tamtl/eval.hpp"
#include "tamtl/kernel.hpp"

namespace tamtl {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

rational effective_delta(const model_file& m, const verify_options& opt) { return opt.delta ? *opt.delta : m.delta; }

void guard_bounds(const clock_constraint& g, std::vector<rational>& out) {
    if (g.k == clock_constraint::kind::lt || g.k == clock_constraint::kind::ge) out.push_back(g.bound);
    for (const auto& a : g.args) guard_bounds(a, out);
}

void check_model(const model_file& m, const rational& delta) {
    if (delta <= rational(0)) throw verify_error("delta must be positive");
    std::set<const timed_automaton*> seen;
    for (const auto& inst : m.instances) {
        if (!seen.insert(inst.automaton.get()).second) continue;
        auto problems = validate(*inst.automaton, delta);
        if (!problems.empty()) throw verify_error("automaton " + inst.automaton->name + ": " + problems.front());
    }
    try {
        for (const auto& a : m.axioms) require_granularity(a.formula, delta);
        for (const auto& p : m.properties) require_granularity(p.formula, delta);
    } catch (const granularity_error& e) {
        throw verify_error(e.what());
    }
}

int choose_bound(const model_file& m, const rational& delta, const verify_options& opt) {
    if (opt.bound) return *opt.bound;
    if (m.bound) return *m.bound;
    return default_bound(m, delta);
}

void add_warnings(std::vector<std::string>& out, const std::string& where, const discrete_formula& f) {
    for (const auto& w : vacuity_warnings(f)) {
        auto line = where + ": " + w;
        if (std::find(out.begin(), out.end(), line) == out.end()) out.push_back(line);
    }
}

// Adds the flattened formula's auxiliary propositions to side.sig and
// returns the flat formula; the definitions become system formulas.
dense_formula flatten_into(system_side& side, const dense_formula& f, const std::string& label, const rational& delta) {
    auto flat = flatten(f, side.sig);
    for (const auto& aux : flat.aux) {
        side.sig.add_proposition(aux.name);
        auto d = approx(aux.as_constraint(), delta, side.kind);
        add_warnings(side.warnings, label + " (" + aux.name + ")", d);
        side.globally.push_back(d);
        side.labels.push_back(label + ": definition of " + aux.name);
    }
    return flat.formula;
}

struct sat_outcome {
    solve_result result;
    std::optional<encoding> enc;
};

sat_outcome run_check(check_report& rep, const encode_request& req, const signature& sig, int k,
                      const solver_config& cfg) {
    rep.ran = true;
    sat_outcome out;
    auto t0 = clock_type::now();
    try {
        out.enc = encode(req, sig, k);
    } catch (const encode_error& e) {
        rep.times.cnf = seconds_since(t0);
        if (e.code() != encode_error::kind::contradiction) throw verify_error(e.what());
        rep.result = solve_result::status::unsat;
        rep.reason = std::string("contradiction while encoding: ") + e.what();
        out.result = {solve_result::status::unsat, {}, rep.reason};
        return out;
    }
    rep.times.cnf = seconds_since(t0);
    rep.size = cnf_stats(out.enc->cnf);
    t0 = clock_type::now();
    out.result = solve(out.enc->cnf, cfg);
    rep.times.sat = seconds_since(t0);
    rep.result = out.result.st;
    rep.reason = out.result.reason;
    return out;
}

nlohmann::json trace_json(const lasso_trace& t, const signature& sig) {
    nlohmann::json states = nlohmann::json::array();
    for (const auto& s : t.states()) {
        nlohmann::json st;
        for (std::size_t i = 0; i < s.values.size(); ++i)
            st["items"][sig.items()[i].name] = sig.items()[i].domain[s.values[i]];
        st["props"] = nlohmann::json::array();
        for (std::size_t i = 0; i < s.props.size(); ++i)
            if (s.props[i]) st["props"].push_back(sig.propositions()[i]);
        states.push_back(std::move(st));
    }
    return {{"k", t.k()}, {"loop", t.loop()}, {"states", std::move(states)}};
}

nlohmann::json check_json(const check_report& c) {
    return {{"name", c.name},
            {"ran", c.ran},
            {"result", c.ran ? to_string(c.result) : "SKIPPED"},
            {"reason", c.reason},
            {"variables", c.size.vars},
            {"clauses", c.size.clauses},
            {"seconds", {{"formula", c.times.build}, {"cnf", c.times.cnf}, {"sat", c.times.sat}}}};
}

std::string check_line(const check_report& c) {
    if (!c.ran) return "  " + c.name + ": skipped\n";
    char buf[256];
    std::snprintf(buf, sizeof buf, "  %s: %s, %d vars, %zu clauses, formula %.2fs, cnf %.2fs, sat %.2fs", c.name.c_str(),
                  to_string(c.result), c.size.vars, c.size.clauses, c.times.build, c.times.cnf, c.times.sat);
    std::string out = buf;
    if (!c.reason.empty()) out += " (" + c.reason + ")";
    return out + "\n";
}

const char* caveat =
    "verdicts are relative to lasso words of length k at sampling period delta and hold for dense behaviors "
    "that are non-Berkeley for delta with the first clock reset in (delta, 2*delta)";

} // namespace

int default_bound(const model_file& m, const rational& delta) {
    std::vector<rational> bounds;
    for (const auto& a : m.axioms)
        for (const auto& b : finite_bounds(a.formula)) bounds.push_back(b);
    for (const auto& p : m.properties)
        for (const auto& b : finite_bounds(p.formula)) bounds.push_back(b);
    for (const auto& inst : m.instances)
        for (const auto& e : inst.automaton->edges) guard_bounds(e.guard, bounds);
    rational largest(0);
    for (const auto& b : bounds) largest = std::max(largest, b);
    auto scaled = largest / delta;
    auto steps = scaled.numerator() / scaled.denominator() + (scaled.denominator() == 1 ? 0 : 1);
    return static_cast<int>(std::max<std::int64_t>(30, 2 * steps + 2));
}

system_side build_side(const model_file& m, const rational& delta, approx_kind kind, bool naive_guards) {
    system_side side;
    side.kind = kind;
    side.sig = m.sig;
    for (const auto& inst : m.instances) {
        auto axioms = kind == approx_kind::under ? under_axioms(inst, delta) : over_axioms(inst, delta, {naive_guards});
        for (auto& a : axioms) {
            auto label = inst.name + " " + to_string(a.family) + " " + a.label;
            add_warnings(side.warnings, label, a.formula);
            side.globally.push_back(std::move(a.formula));
            side.labels.push_back(std::move(label));
        }
    }
    for (const auto& a : m.axioms) {
        auto flat = flatten_into(side, a.formula, "axiom " + a.name, delta);
        auto d = approx(flat, delta, kind);
        add_warnings(side.warnings, "axiom " + a.name, d);
        side.globally.push_back(d);
        side.labels.push_back("axiom " + a.name);
    }
    return side;
}

const char* to_string(verdict::kind k) {
    switch (k) {
    case verdict::kind::verified: return "VERIFIED";
    case verdict::kind::falsified: return "FALSIFIED";
    case verdict::kind::inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

const char* to_string(consistency::status s) {
    switch (s) {
    case consistency::status::consistent: return "CONSISTENT";
    case consistency::status::inconsistent: return "INCONSISTENT";
    case consistency::status::unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

check_problem property_check(const model_file& m, const named_formula& property, int check,
                             const verify_options& opt) {
    if (check != 1 && check != 2) throw verify_error("check must be 1 or 2");
    auto delta = effective_delta(m, opt);
    check_model(m, delta);
    try {
        require_granularity(property.formula, delta);
    } catch (const granularity_error& e) {
        throw verify_error(e.what());
    }
    auto sys = check == 1 ? approx_kind::under : approx_kind::over;
    auto side = build_side(m, delta, sys, opt.naive_guards);
    auto flat = flatten_into(side, property.formula, "property " + property.name, delta);
    auto p = approx(flat, delta, check == 1 ? approx_kind::over : approx_kind::under);
    add_warnings(side.warnings, "property " + property.name, p);
    check_problem out;
    out.sig = std::move(side.sig);
    out.request = {side.globally, {discrete_formula::negation(p)}};
    out.property = p;
    out.system = std::move(side.globally);
    out.bound = choose_bound(m, delta, opt);
    out.warnings = std::move(side.warnings);
    return out;
}

check_problem consistency_check(const model_file& m, int check, const verify_options& opt) {
    if (check != 1 && check != 2) throw verify_error("check must be 1 or 2");
    auto delta = effective_delta(m, opt);
    check_model(m, delta);
    auto side = build_side(m, delta, check == 1 ? approx_kind::under : approx_kind::over, opt.naive_guards);
    check_problem out;
    out.sig = std::move(side.sig);
    out.request = {side.globally, {}};
    out.system = std::move(side.globally);
    out.bound = choose_bound(m, delta, opt);
    out.warnings = std::move(side.warnings);
    return out;
}

verdict check_property(const model_file& m, const named_formula& property, const verify_options& opt) {
    verdict v;
    v.property = property.name;
    v.delta = effective_delta(m, opt);
    v.solver = opt.solver.identity();
    v.prove.name = "check 1 (under-approximated system, over-approximated property)";
    v.refute.name = "check 2 (over-approximated system, under-approximated property)";
    auto merge_warnings = [&](const check_problem& c) {
        for (const auto& w : c.warnings)
            if (std::find(v.warnings.begin(), v.warnings.end(), w) == v.warnings.end()) v.warnings.push_back(w);
    };

    auto t0 = clock_type::now();
    auto first = property_check(m, property, 1, opt);
    v.prove.times.build = seconds_since(t0);
    v.bound = first.bound;
    merge_warnings(first);
    auto proof = run_check(v.prove, first.request, first.sig, v.bound, opt.solver);
    bool verified = proof.result.is_unsat();
    if (verified && !opt.run_both) {
        v.outcome = verdict::kind::verified;
        return v;
    }

    t0 = clock_type::now();
    auto second = property_check(m, property, 2, opt);
    v.refute.times.build = seconds_since(t0);
    merge_warnings(second);
    auto refutation = run_check(v.refute, second.request, second.sig, v.bound, opt.solver);
    if (refutation.result.is_sat()) {
        auto trace = decode(refutation.result.model, refutation.enc->vars);
        bool system_holds = std::all_of(second.system.begin(), second.system.end(),
                                        [&](const discrete_formula& f) { return eval_global(trace, second.sig, f); });
        auto violation = evaluator(second.sig, second.property).first_violation(trace);
        if (!system_holds || !violation) {
            v.refute.reason = "counterexample failed the independent re-check";
            v.warnings.push_back("internal: decoded counterexample does not re-check; verdict withheld");
        } else if (verified) {
            v.warnings.push_back("internal: both checks decided; verdict withheld");
        } else {
            v.outcome = verdict::kind::falsified;
            v.counterexample = std::move(trace);
            v.violation = violation;
            v.trace_sig = second.sig;
        }
        return v;
    }
    v.outcome = verified ? verdict::kind::verified : verdict::kind::inconclusive;
    return v;
}

verdict check_property(const model_file& m, const std::string& property, const verify_options& opt) {
    const auto* p = m.property(property);
    if (!p) throw verify_error("no property named " + property);
    return check_property(m, *p, opt);
}

consistency check_consistency(const model_file& m, const verify_options& opt) {
    consistency c;
    c.under.name = "under-approximated system";
    c.over.name = "over-approximated system";

    auto t0 = clock_type::now();
    auto under = consistency_check(m, 1, opt);
    c.under.times.build = seconds_since(t0);
    c.bound = under.bound;
    auto u = run_check(c.under, under.request, under.sig, c.bound, opt.solver);

    t0 = clock_type::now();
    auto over = consistency_check(m, 2, opt);
    c.over.times.build = seconds_since(t0);
    auto o = run_check(c.over, over.request, over.sig, c.bound, opt.solver);

    if (o.result.is_sat()) {
        c.witness = decode(o.result.model, o.enc->vars);
        c.trace_sig = over.sig;
    }
    if (u.result.is_unsat() || o.result.is_unsat()) {
        c.outcome = consistency::status::inconsistent;
        c.diagnostic = std::string(u.result.is_unsat() ? "the under-approximated" : "the over-approximated") +
                       " axiom system has no run of length " + std::to_string(c.bound) +
                       "; verdicts on this model would be vacuous";
    } else if (u.result.is_sat() && o.result.is_sat()) {
        c.outcome = consistency::status::consistent;
    } else {
        c.outcome = consistency::status::unknown;
        c.diagnostic = "solver gave no answer: " + (u.result.is_sat() ? o.result.reason : u.result.reason);
    }
    return c;
}

std::string format_report(const verdict& v) {
    std::string out = "property " + v.property + ": " + to_string(v.outcome) + " (k=" + std::to_string(v.bound) +
                      ", delta=" + to_string(v.delta) + ", solver " + v.solver + ")\n";
    out += check_line(v.prove);
    out += check_line(v.refute);
    for (const auto& w : v.warnings) out += "  warning: " + w + "\n";
    if (v.counterexample) {
        out += "counterexample (property fails at position " + std::to_string(*v.violation) + "):\n";
        out += format_trace(*v.counterexample, v.trace_sig);
    }
    out += std::string("note: ") + caveat + "\n";
    return out;
}

std::string to_json(const verdict& v, int indent) {
    nlohmann::json j{{"property", v.property},
                     {"verdict", to_string(v.outcome)},
                     {"bound", v.bound},
                     {"delta", to_string(v.delta)},
                     {"solver", v.solver},
                     {"checks", {check_json(v.prove), check_json(v.refute)}},
                     {"warnings", v.warnings},
                     {"caveat", caveat}};
    if (v.counterexample) {
        j["counterexample"] = trace_json(*v.counterexample, v.trace_sig);
        j["violation"] = *v.violation;
    }
    return j.dump(indent);
}

std::string format_report(const consistency& c) {
    std::string out = std::string("consistency: ") + to_string(c.outcome) + " (k=" + std::to_string(c.bound) + ")\n";
    out += check_line(c.under);
    out += check_line(c.over);
    if (!c.diagnostic.empty()) out += "  " + c.diagnostic + "\n";
    if (c.witness) out += "witness run:\n" + format_trace(*c.witness, c.trace_sig);
    return out;
}

std::string to_json(const consistency& c, int indent) {
    nlohmann::json j{{"consistency", to_string(c.outcome)},
                     {"bound", c.bound},
                     {"diagnostic", c.diagnostic},
                     {"checks", {check_json(c.under), check_json(c.over)}}};
    if (c.witness) j["witness"] = trace_json(*c.witness, c.trace_sig);
    return j.dump(indent);
}

} // namespace tamtl
