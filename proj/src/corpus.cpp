#include "tamtl/corpus.hpp"

#include <sstream>
#include <stdexcept>

namespace tamtl {

std::string instance_name(int i) {
    std::string s(1, static_cast<char>('A' + i % 26));
    if (i >= 26) s += std::to_string(i / 26);
    return s;
}

namespace {

std::string st(const std::string& x, const std::string& v) { return "st_" + x + " = " + v; }

std::string either(const std::string& x, const std::string& a, const std::string& b) {
    return st(x, a) + " || " + st(x, b);
}

std::string sync_axiom(const std::string& i, const std::string& j) {
    auto good = [](const std::string& x) {
        return "until(!(" + either(x, "tout2", "ko2") + "), " + either(x, "ok1", "ok2") + ")";
    };
    auto bad = [](const std::string& x) {
        return "until(!(" + either(x, "ok1", "ok2") + "), " + either(x, "tout2", "ko2") + ")";
    };
    return "  " + st(i, "try") + " && " + st(j, "try") + " ->\n    " + good(i) + " && " + good(j) + " ||\n    " +
           bad(i) + " && " + bad(j) + "\n";
}

} // namespace

std::string corpus_protocol_text(int n, int t1, int t2, int t3, int bound) {
    if (n < 1) throw std::invalid_argument("at least one instance is needed");
    std::ostringstream o;
    o << "# Request/response protocol, " << n << (n == 1 ? " instance" : " instances") << ".\n\n";
    o << "param\n  delta = 1\n  bound = " << bound << "\n  T1 = " << t1 << "\n  T2 = " << t2 << "\n  T3 = " << t3
      << "\n\n";
    o << "automaton protocol\n"
         "  states idle, try, s1, ok1, ko1, tout1, s2, ok2, ko2, tout2\n"
         "  initial idle\n"
         "  clocks G, S, A\n"
         "  edge idle -> try reset G, S\n"
         "  edge try -> s1 when S < T1 reset A\n"
         "  edge s1 -> ok1 when A < T2\n"
         "  edge s1 -> ko1 when A < T2 reset S\n"
         "  edge s1 -> tout1 when A = T2 reset S\n"
         "  edge ko1 -> s2 when S < T1 reset A\n"
         "  edge tout1 -> s2 when S < T1 reset A\n"
         "  edge s2 -> ok2 when A < T2\n"
         "  edge s2 -> ko2 when A < T2\n"
         "  edge s2 -> tout2 when A = T2\n"
         "  edge ok1 -> idle when G < T3\n"
         "  edge ok2 -> idle when G < T3\n"
         "  edge ko2 -> idle when G < T3\n"
         "  edge tout2 -> idle when G < T3\n\n";
    for (int i = 0; i < n; ++i) o << "instance " << instance_name(i) << " of protocol\n";
    o << "\n";
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            auto a = instance_name(i), b = instance_name(j);
            o << "axiom sync_" << a << "_" << b << "\n" << sync_axiom(a, b) << "\n";
        }
    if (n == 1) {
        std::string a = instance_name(0);
        o << "property p1\n  " << either(a, "ok1", "ok2") << " -> until(!(" << either(a, "ko1", "ko2") << "), "
          << st(a, "idle") << ")\n\n";
        o << "property p2\n  " << either(a, "ko1", "ko2") << " -> until(!(" << either(a, "ok1", "ok2") << "), "
          << st(a, "idle") << ")\n\n";
        o << "property p3\n  " << st(a, "try") << " -> ev(0, T3){" << st(a, "idle") << "}\n\n";
        o << "property p3p\n  " << st(a, "try") << " -> ev(0, T3 + delta){" << st(a, "idle") << "}\n\n";
        o << "property p4\n  " << st(a, "s1") << " -> ev_p(0, 2*T1 + T2 + delta){" << st(a, "try") << "}\n\n";
        o << "property p5\n  " << st(a, "ok1") << " -> until(0, T3)(!(" << either(a, "ko1", "ko2") << "), "
          << st(a, "idle") << ")\n";
    } else {
        std::string a = instance_name(0), b = instance_name(1);
        std::string began = "since(0, T3)(!(" + st(a, "try") + " && " + st(b, "try") + "), " + st(a, "try") +
                            " || " + st(b, "try") + ")";
        o << "property p6\n  " << st(a, "ok2") << " && " << st(b, "ko2") << " -> " << began << "\n\n";
        o << "property p7\n  " << st(a, "ok2") << " && ev_p(0, T1){" << st(b, "ko2") << "} -> " << began << "\n";
    }
    return o.str();
}

model_file corpus_protocol(int n, int t1, int t2, int t3, int bound) {
    return parse_model(corpus_protocol_text(n, t1, t2, t3, bound));
}

} // namespace tamtl
