#include "tamtl/cnf.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <ostream>
#include <sstream>

namespace tamtl {

void write_dimacs(std::ostream& out, const cnf_problem& p) {
    for (const auto& [v, name] : p.comments) out << "c " << v << ' ' << name << '\n';
    out << "p cnf " << p.num_vars << ' ' << p.clauses.size() << '\n';
    std::string line;
    for (const auto& c : p.clauses) {
        line.clear();
        for (int l : c) {
            line += std::to_string(l);
            line += ' ';
        }
        line += "0\n";
        out << line;
    }
}

std::string to_dimacs(const cnf_problem& p) {
    std::ostringstream o;
    write_dimacs(o, p);
    return o.str();
}

namespace {

bool parse_int(std::string_view s, long long& v) {
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

std::vector<std::string_view> fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

} // namespace

cnf_problem parse_dimacs(std::string_view text) {
    cnf_problem p;
    bool header = false;
    long long declared = 0;
    std::vector<int> cur;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        auto fs = fields(line);
        if (fs.empty()) continue;
        auto where = "line " + std::to_string(line_no) + ": ";
        if (fs[0] == "c") {
            long long v = 0;
            if (fs.size() >= 3 && parse_int(fs[1], v) && v > 0) {
                auto pos = line.find(fs[2]);
                p.comments[static_cast<int>(v)] = std::string(line.substr(pos));
            }
            continue;
        }
        if (fs[0] == "%") break;
        if (fs[0] == "p") {
            long long n = 0;
            if (header || fs.size() != 4 || fs[1] != "cnf" || !parse_int(fs[2], n) || !parse_int(fs[3], declared) ||
                n < 0 || declared < 0)
                throw dimacs_error(where + "malformed problem line");
            p.num_vars = static_cast<int>(n);
            header = true;
            continue;
        }
        if (!header) throw dimacs_error(where + "clause before the problem line");
        for (auto f : fs) {
            long long l = 0;
            if (!parse_int(f, l)) throw dimacs_error(where + "bad literal '" + std::string(f) + "'");
            if (l == 0) {
                p.clauses.push_back(std::move(cur));
                cur.clear();
                continue;
            }
            if (std::llabs(l) > p.num_vars) throw dimacs_error(where + "literal " + std::to_string(l) + " out of range");
            cur.push_back(static_cast<int>(l));
        }
    }
    if (!header) throw dimacs_error("missing problem line");
    if (!cur.empty()) p.clauses.push_back(std::move(cur));
    if (static_cast<long long>(p.clauses.size()) != declared)
        throw dimacs_error("problem line declares " + std::to_string(declared) + " clauses, found " +
                           std::to_string(p.clauses.size()));
    return p;
}

bool verify_model(const cnf_problem& p, const assignment& a) {
    if (a.size() != static_cast<std::size_t>(p.num_vars) + 1) return false;
    for (const auto& c : p.clauses) {
        bool sat = false;
        for (int l : c) {
            bool v = a[static_cast<std::size_t>(std::abs(l))];
            if (l > 0 ? v : !v) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

} // namespace tamtl
