#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <cstdlib>

#include "tamtl/solver.hpp"

namespace tamtl {

namespace {

using lit = std::uint32_t;
using cref = std::uint32_t;
constexpr lit lit_undef = ~lit{0};
constexpr cref cref_undef = ~cref{0};

inline lit mk_lit(std::uint32_t v, bool negative) { return 2 * v + (negative ? 1 : 0); }
inline std::uint32_t var_of(lit l) { return l >> 1; }
inline bool is_neg(lit l) { return (l & 1) != 0; }
inline lit negate(lit l) { return l ^ 1; }

enum : std::uint8_t { v_true = 0, v_false = 1, v_undef = 2 };

struct watcher {
    cref c;
    lit blocker;
};

// Binary max-heap of variables ordered by activity.
class var_heap {
public:
    explicit var_heap(const std::vector<double>& act) : _act(act) {}

    void grow(std::size_t n) { _pos.resize(n, -1); }
    bool contains(std::uint32_t v) const { return _pos[v] >= 0; }
    bool empty() const { return _heap.empty(); }

    void insert(std::uint32_t v) {
        if (contains(v)) return;
        _pos[v] = static_cast<int>(_heap.size());
        _heap.push_back(v);
        up(_heap.size() - 1);
    }

    void increased(std::uint32_t v) {
        if (contains(v)) up(static_cast<std::size_t>(_pos[v]));
    }

    std::uint32_t pop() {
        auto top = _heap.front();
        _heap.front() = _heap.back();
        _pos[_heap.front()] = 0;
        _heap.pop_back();
        _pos[top] = -1;
        if (!_heap.empty()) down(0);
        return top;
    }

private:
    bool less(std::uint32_t a, std::uint32_t b) const { return _act[a] > _act[b]; }

    void up(std::size_t i) {
        auto v = _heap[i];
        while (i > 0) {
            auto parent = (i - 1) / 2;
            if (!less(v, _heap[parent])) break;
            _heap[i] = _heap[parent];
            _pos[_heap[i]] = static_cast<int>(i);
            i = parent;
        }
        _heap[i] = v;
        _pos[v] = static_cast<int>(i);
    }

    void down(std::size_t i) {
        auto v = _heap[i];
        for (;;) {
            auto child = 2 * i + 1;
            if (child >= _heap.size()) break;
            if (child + 1 < _heap.size() && less(_heap[child + 1], _heap[child])) ++child;
            if (!less(_heap[child], v)) break;
            _heap[i] = _heap[child];
            _pos[_heap[i]] = static_cast<int>(i);
            i = child;
        }
        _heap[i] = v;
        _pos[v] = static_cast<int>(i);
    }

    const std::vector<double>& _act;
    std::vector<std::uint32_t> _heap;
    std::vector<int> _pos;
};

double luby(double y, int x) {
    int size = 1, seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    double r = 1;
    for (int i = 0; i < seq; ++i) r *= y;
    return r;
}

class cdcl_solver {
public:
    explicit cdcl_solver(int n) : _heap(_activity) {
        auto vars = static_cast<std::size_t>(n) + 1;
        _value.assign(vars, v_undef);
        _level.assign(vars, 0);
        _reason.assign(vars, cref_undef);
        _activity.assign(vars, 0.0);
        _phase.assign(vars, 1);
        _seen.assign(vars, 0);
        _level_stamp.assign(vars + 1, 0);
        _watches.resize(2 * vars);
        _heap.grow(vars);
        for (std::uint32_t v = 1; v < vars; ++v) _heap.insert(v);
    }

    // False when the clause set is already contradictory.
    bool add_clause(const std::vector<int>& in) {
        if (!_ok) return false;
        std::vector<lit> c;
        c.reserve(in.size());
        for (int x : in) c.push_back(mk_lit(static_cast<std::uint32_t>(std::abs(x)), x < 0));
        std::sort(c.begin(), c.end());
        std::size_t j = 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i > 0 && c[i] == negate(c[i - 1])) return true; // tautology
            if (value(c[i]) == v_true) return true;
            if (value(c[i]) == v_false) continue;
            if (j > 0 && c[j - 1] == c[i]) continue;
            c[j++] = c[i];
        }
        c.resize(j);
        if (c.empty()) return _ok = false;
        if (c.size() == 1) {
            enqueue(c[0], cref_undef);
            return _ok = propagate() == cref_undef;
        }
        _originals.push_back(alloc(c, false));
        attach(_originals.back());
        return true;
    }

    solve_result::status run(std::chrono::steady_clock::time_point deadline) {
        if (!_ok) return solve_result::status::unsat;
        _max_learnts = std::max<double>(static_cast<double>(_originals.size()) / 3.0, 5000.0);
        for (int restart = 0;; ++restart) {
            auto budget = static_cast<long>(luby(2, restart) * 100);
            auto st = search(budget, deadline);
            if (st != v_undef) return st == v_true ? solve_result::status::sat : solve_result::status::unsat;
            if (_timed_out) return solve_result::status::unknown;
        }
    }

    assignment model() const {
        assignment a(_value.size(), false);
        for (std::size_t v = 1; v < _value.size(); ++v) a[v] = _value[v] == v_true;
        return a;
    }

private:
    // Clause layout in the arena: size, learnt flag | lbd << 1, activity bits, literals.
    cref alloc(const std::vector<lit>& c, bool learnt, std::uint32_t lbd = 0) {
        auto r = static_cast<cref>(_mem.size());
        _mem.push_back(static_cast<std::uint32_t>(c.size()));
        _mem.push_back((learnt ? 1u : 0u) | (lbd << 1));
        _mem.push_back(std::bit_cast<std::uint32_t>(0.0f));
        _mem.insert(_mem.end(), c.begin(), c.end());
        return r;
    }

    std::uint32_t size(cref c) const { return _mem[c]; }
    lit* lits(cref c) { return &_mem[c + 3]; }
    std::uint32_t lbd(cref c) const { return _mem[c + 1] >> 1; }
    float activity(cref c) const { return std::bit_cast<float>(_mem[c + 2]); }
    void set_activity(cref c, float a) { _mem[c + 2] = std::bit_cast<std::uint32_t>(a); }
    bool learnt(cref c) const { return (_mem[c + 1] & 1u) != 0; }

    void attach(cref c) {
        auto* l = lits(c);
        _watches[negate(l[0])].push_back({c, l[1]});
        _watches[negate(l[1])].push_back({c, l[0]});
    }

    std::uint8_t value(lit l) const {
        auto v = _value[var_of(l)];
        return v == v_undef ? std::uint8_t{v_undef} : static_cast<std::uint8_t>(v ^ (l & 1));
    }

    int decision_level() const { return static_cast<int>(_trail_lim.size()); }

    void enqueue(lit l, cref from) {
        auto v = var_of(l);
        _value[v] = is_neg(l) ? v_false : v_true;
        _level[v] = decision_level();
        _reason[v] = from;
        _trail.push_back(l);
    }

    cref propagate() {
        cref confl = cref_undef;
        while (_qhead < _trail.size()) {
            lit p = _trail[_qhead++];
            auto& ws = _watches[p];
            ++_propagations;
            std::size_t i = 0, j = 0, n = ws.size();
            lit false_lit = negate(p);
            while (i < n) {
                lit blocker = ws[i].blocker;
                if (value(blocker) == v_true) {
                    ws[j++] = ws[i++];
                    continue;
                }
                cref cr = ws[i].c;
                lit* c = lits(cr);
                if (c[0] == false_lit) std::swap(c[0], c[1]);
                ++i;
                lit first = c[0];
                watcher w{cr, first};
                if (first != blocker && value(first) == v_true) {
                    ws[j++] = w;
                    continue;
                }
                bool moved = false;
                auto sz = size(cr);
                for (std::uint32_t k = 2; k < sz; ++k) {
                    if (value(c[k]) != v_false) {
                        c[1] = c[k];
                        c[k] = false_lit;
                        _watches[negate(c[1])].push_back(w);
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[j++] = w;
                if (value(first) == v_false) {
                    confl = cr;
                    _qhead = _trail.size();
                    while (i < n) ws[j++] = ws[i++];
                } else {
                    enqueue(first, cr);
                }
            }
            ws.resize(j);
            if (confl != cref_undef) break;
        }
        return confl;
    }

    void bump_var(std::uint32_t v) {
        if ((_activity[v] += _var_inc) > 1e100) {
            for (auto& a : _activity) a *= 1e-100;
            _var_inc *= 1e-100;
        }
        _heap.increased(v);
    }

    void bump_clause(cref c) {
        float a = activity(c) + static_cast<float>(_cla_inc);
        set_activity(c, a);
        if (a > 1e20f) {
            for (auto l : _learnts) set_activity(l, activity(l) * 1e-20f);
            _cla_inc *= 1e-20;
        }
    }

    std::uint32_t abstract_level(std::uint32_t v) const { return 1u << (static_cast<std::uint32_t>(_level[v]) & 31); }

    bool redundant(lit p, std::uint32_t levels) {
        _stack.clear();
        _stack.push_back(p);
        auto top = _to_clear.size();
        while (!_stack.empty()) {
            auto q = _stack.back();
            _stack.pop_back();
            cref c = _reason[var_of(q)];
            auto* l = lits(c);
            for (std::uint32_t j = 1; j < size(c); ++j) {
                auto v = var_of(l[j]);
                if (_seen[v] || _level[v] == 0) continue;
                if (_reason[v] != cref_undef && (abstract_level(v) & levels) != 0) {
                    _seen[v] = 1;
                    _stack.push_back(l[j]);
                    _to_clear.push_back(l[j]);
                } else {
                    for (auto k = top; k < _to_clear.size(); ++k) _seen[var_of(_to_clear[k])] = 0;
                    _to_clear.resize(top);
                    return false;
                }
            }
        }
        return true;
    }

    void analyze(cref confl, std::vector<lit>& out, int& back_level, std::uint32_t& out_lbd) {
        out.clear();
        out.push_back(lit_undef);
        int paths = 0;
        lit p = lit_undef;
        auto idx = _trail.size();
        do {
            if (learnt(confl)) bump_clause(confl);
            auto* c = lits(confl);
            for (std::uint32_t j = (p == lit_undef ? 0 : 1); j < size(confl); ++j) {
                auto v = var_of(c[j]);
                if (_seen[v] || _level[v] == 0) continue;
                bump_var(v);
                _seen[v] = 1;
                if (_level[v] >= decision_level()) ++paths;
                else out.push_back(c[j]);
            }
            while (!_seen[var_of(_trail[--idx])]) {}
            p = _trail[idx];
            confl = _reason[var_of(p)];
            _seen[var_of(p)] = 0;
            --paths;
        } while (paths > 0);
        out[0] = negate(p);

        _to_clear.assign(out.begin(), out.end());
        std::uint32_t levels = 0;
        for (std::size_t i = 1; i < out.size(); ++i) levels |= abstract_level(var_of(out[i]));
        std::size_t j = 1;
        for (std::size_t i = 1; i < out.size(); ++i)
            if (_reason[var_of(out[i])] == cref_undef || !redundant(out[i], levels)) out[j++] = out[i];
        out.resize(j);
        for (auto l : _to_clear) _seen[var_of(l)] = 0;

        back_level = 0;
        if (out.size() > 1) {
            std::size_t best = 1;
            for (std::size_t i = 2; i < out.size(); ++i)
                if (_level[var_of(out[i])] > _level[var_of(out[best])]) best = i;
            std::swap(out[1], out[best]);
            back_level = _level[var_of(out[1])];
        }
        ++_stamp;
        out_lbd = 0;
        for (auto l : out) {
            auto lv = static_cast<std::size_t>(_level[var_of(l)]);
            if (_level_stamp[lv] != _stamp) {
                _level_stamp[lv] = _stamp;
                ++out_lbd;
            }
        }
    }

    void backtrack(int level) {
        if (decision_level() <= level) return;
        auto stop = _trail_lim[static_cast<std::size_t>(level)];
        for (auto i = _trail.size(); i > stop; --i) {
            auto v = var_of(_trail[i - 1]);
            _value[v] = v_undef;
            _reason[v] = cref_undef;
            _phase[v] = is_neg(_trail[i - 1]) ? 1 : 0;
            _heap.insert(v);
        }
        _trail.resize(stop);
        _trail_lim.resize(static_cast<std::size_t>(level));
        _qhead = _trail.size();
    }

    lit pick_branch() {
        while (!_heap.empty()) {
            auto v = _heap.pop();
            if (_value[v] == v_undef) return mk_lit(v, _phase[v] != 0);
        }
        return lit_undef;
    }

    bool locked(cref c) {
        auto l = lits(c)[0];
        return value(l) == v_true && _reason[var_of(l)] == c;
    }

    void reduce_db() {
        std::sort(_learnts.begin(), _learnts.end(), [&](cref a, cref b) {
            if (lbd(a) != lbd(b)) return lbd(a) > lbd(b);
            return activity(a) < activity(b);
        });
        std::vector<cref> keep;
        std::vector<char> drop(_learnts.size(), 0);
        auto half = _learnts.size() / 2;
        for (std::size_t i = 0; i < _learnts.size(); ++i)
            if (i < half && lbd(_learnts[i]) > 2 && size(_learnts[i]) > 2 && !locked(_learnts[i])) drop[i] = 1;
        // Rebuild the arena with the surviving clauses and relocate reasons.
        std::vector<std::uint32_t> fresh;
        fresh.reserve(_mem.size());
        auto move = [&](cref c) {
            auto r = static_cast<cref>(fresh.size());
            fresh.insert(fresh.end(), _mem.begin() + c, _mem.begin() + c + 3 + size(c));
            _mem[c + 2] = r; // forwarding address, the old copy is discarded
            return r;
        };
        for (auto& c : _originals) c = move(c);
        for (std::size_t i = 0; i < _learnts.size(); ++i)
            if (!drop[i]) keep.push_back(_learnts[i]);
        for (std::size_t i = 0; i < _learnts.size(); ++i)
            if (drop[i]) _mem[_learnts[i] + 2] = cref_undef;
        for (auto& c : keep) c = move(c);
        for (auto l : _trail) {
            auto v = var_of(l);
            if (_reason[v] != cref_undef) _reason[v] = _mem[_reason[v] + 2];
        }
        _mem.swap(fresh);
        _learnts.swap(keep);
        for (auto& ws : _watches) ws.clear();
        for (auto c : _originals) attach(c);
        for (auto c : _learnts) attach(c);
    }

    // v_true: model found, v_false: unsatisfiable, v_undef: restart or timeout.
    std::uint8_t search(long budget, std::chrono::steady_clock::time_point deadline) {
        std::vector<lit> learnt_clause;
        long conflicts = 0;
        for (;;) {
            cref confl = propagate();
            if (confl != cref_undef) {
                ++conflicts;
                if (decision_level() == 0) return v_false;
                int back = 0;
                std::uint32_t clause_lbd = 0;
                analyze(confl, learnt_clause, back, clause_lbd);
                backtrack(back);
                if (learnt_clause.size() == 1) {
                    enqueue(learnt_clause[0], cref_undef);
                } else {
                    auto c = alloc(learnt_clause, true, clause_lbd);
                    _learnts.push_back(c);
                    attach(c);
                    bump_clause(c);
                    enqueue(learnt_clause[0], c);
                }
                _var_inc /= 0.95;
                _cla_inc /= 0.999;
                if ((++_conflicts_total & 63) == 0 && std::chrono::steady_clock::now() > deadline) {
                    _timed_out = true;
                    backtrack(0);
                    return v_undef;
                }
                continue;
            }
            if (conflicts >= budget) {
                backtrack(0);
                return v_undef;
            }
            if (static_cast<double>(_learnts.size()) - static_cast<double>(_trail.size()) >= _max_learnts) {
                reduce_db();
                _max_learnts *= 1.1;
            }
            if ((++_decisions & 4095) == 0 && std::chrono::steady_clock::now() > deadline) {
                _timed_out = true;
                backtrack(0);
                return v_undef;
            }
            lit next = pick_branch();
            if (next == lit_undef) return v_true;
            _trail_lim.push_back(_trail.size());
            enqueue(next, cref_undef);
        }
    }

    std::vector<std::uint32_t> _mem;
    std::vector<cref> _originals;
    std::vector<cref> _learnts;
    std::vector<std::vector<watcher>> _watches;
    std::vector<std::uint8_t> _value;
    std::vector<int> _level;
    std::vector<cref> _reason;
    std::vector<double> _activity;
    std::vector<std::uint8_t> _phase;
    std::vector<std::uint8_t> _seen;
    std::vector<std::uint64_t> _level_stamp;
    std::uint64_t _stamp{0};
    std::vector<lit> _trail;
    std::vector<std::size_t> _trail_lim;
    std::size_t _qhead{0};
    std::vector<lit> _stack;
    std::vector<lit> _to_clear;
    var_heap _heap;
    double _var_inc{1};
    double _cla_inc{1};
    double _max_learnts{0};
    std::uint64_t _conflicts_total{0};
    std::uint64_t _decisions{0};
    std::uint64_t _propagations{0};
    bool _ok{true};
    bool _timed_out{false};
};

} // namespace

solve_result solve_cdcl(const cnf_problem& p, double timeout_seconds) {
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(timeout_seconds));
    cdcl_solver s(p.num_vars);
    for (const auto& c : p.clauses)
        if (!s.add_clause(c)) return {solve_result::status::unsat, {}, {}};
    auto st = s.run(deadline);
    if (st == solve_result::status::unknown) return solve_result::unknown("timeout");
    if (st == solve_result::status::unsat) return {st, {}, {}};
    return {st, s.model(), {}};
}

} // namespace tamtl
