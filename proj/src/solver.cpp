#include "tamtl/solver.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

extern char** environ;

namespace tamtl {

const char* to_string(solve_result::status s) {
    switch (s) {
    case solve_result::status::sat: return "SATISFIABLE";
    case solve_result::status::unsat: return "UNSATISFIABLE";
    case solve_result::status::unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

std::string solver_config::identity() const {
    if (executable.empty()) return "builtin:cdcl";
    return executable;
}

solver_config default_solver_config() {
    solver_config cfg;
    if (const char* env = std::getenv("TAMTL_SOLVER"); env && *env) {
        std::istringstream in(env);
        in >> cfg.executable;
        for (std::string a; in >> a;) cfg.args.push_back(a);
    }
    return cfg;
}

namespace {

using clock_type = std::chrono::steady_clock;

clock_type::time_point deadline_after(double seconds) {
    return clock_type::now() +
           std::chrono::duration_cast<clock_type::duration>(std::chrono::duration<double>(seconds));
}

// Plain DPLL with unit propagation by clause scanning; meant for small problems.
class dpll {
public:
    dpll(const cnf_problem& p, clock_type::time_point deadline)
        : _p(p), _deadline(deadline), _value(static_cast<std::size_t>(p.num_vars) + 1, 0) {}

    // 1 sat, -1 unsat, 0 timeout
    int run() { return search(); }

    assignment model() const {
        assignment a(_value.size(), false);
        for (std::size_t v = 1; v < _value.size(); ++v) a[v] = _value[v] > 0;
        return a;
    }

private:
    int lit_value(int l) const {
        int v = _value[static_cast<std::size_t>(std::abs(l))];
        return l > 0 ? v : -v;
    }

    // false on conflict; assigned variables are appended to trail
    bool propagate(std::vector<int>& trail) {
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& c : _p.clauses) {
                int unassigned = 0, last = 0;
                bool sat = false;
                for (int l : c) {
                    int v = lit_value(l);
                    if (v > 0) {
                        sat = true;
                        break;
                    }
                    if (v == 0) {
                        ++unassigned;
                        last = l;
                    }
                }
                if (sat) continue;
                if (unassigned == 0) return false;
                if (unassigned == 1) {
                    _value[static_cast<std::size_t>(std::abs(last))] = last > 0 ? 1 : -1;
                    trail.push_back(std::abs(last));
                    changed = true;
                }
            }
        }
        return true;
    }

    int search() {
        if (clock_type::now() > _deadline) return 0;
        std::vector<int> trail;
        auto undo = [&] {
            for (int v : trail) _value[static_cast<std::size_t>(v)] = 0;
        };
        if (!propagate(trail)) {
            undo();
            return -1;
        }
        int branch = 0;
        for (const auto& c : _p.clauses) {
            bool sat = false;
            int free_var = 0;
            for (int l : c) {
                int v = lit_value(l);
                if (v > 0) sat = true;
                if (v == 0 && !free_var) free_var = std::abs(l);
            }
            if (!sat && free_var) {
                branch = free_var;
                break;
            }
        }
        if (!branch) return 1;
        for (int val : {1, -1}) {
            _value[static_cast<std::size_t>(branch)] = val;
            int r = search();
            if (r != -1) return r;
            _value[static_cast<std::size_t>(branch)] = 0;
        }
        undo();
        return -1;
    }

    const cnf_problem& _p;
    clock_type::time_point _deadline;
    std::vector<int> _value;
};

solve_result checked(solve_result r, const cnf_problem& p) {
    if (r.is_sat() && !verify_model(p, r.model))
        return solve_result::unknown("solver returned an assignment that violates the clauses");
    return r;
}

std::filesystem::path temp_file(const std::string& stem) {
    auto dir = std::filesystem::temp_directory_path();
    auto tmpl = (dir / (stem + "-XXXXXX")).string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    int fd = mkstemp(buf.data());
    if (fd < 0) throw std::runtime_error("cannot create a temporary file in " + dir.string());
    close(fd);
    return std::filesystem::path(buf.data());
}

struct temp_guard {
    std::filesystem::path path;
    ~temp_guard() {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
};

} // namespace

solve_result solve_dpll(const cnf_problem& p, double timeout_seconds) {
    dpll d(p, deadline_after(timeout_seconds));
    int r = d.run();
    if (r == 0) return solve_result::unknown("timeout");
    if (r < 0) return {solve_result::status::unsat, {}, {}};
    return checked({solve_result::status::sat, d.model(), {}}, p);
}

solve_result parse_solver_output(const std::string& out, int exit_code, int num_vars) {
    std::optional<solve_result::status> st;
    assignment model(static_cast<std::size_t>(num_vars) + 1, false);
    std::istringstream in(out);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("s ", 0) == 0) {
            auto word = line.substr(2);
            while (!word.empty() && word.back() == ' ') word.pop_back();
            if (word == "SATISFIABLE") st = solve_result::status::sat;
            else if (word == "UNSATISFIABLE") st = solve_result::status::unsat;
            else if (word == "UNKNOWN") st = solve_result::status::unknown;
            else return solve_result::unknown("malformed status line: " + line);
        } else if (line.rfind("v ", 0) == 0 || line == "v") {
            std::istringstream vs(line.substr(1));
            for (std::string tok; vs >> tok;) {
                long long l = 0;
                try {
                    std::size_t used = 0;
                    l = std::stoll(tok, &used);
                    if (used != tok.size()) throw std::invalid_argument(tok);
                } catch (const std::exception&) {
                    return solve_result::unknown("malformed value line: " + line);
                }
                if (l == 0) continue;
                if (std::llabs(l) > num_vars) return solve_result::unknown("value out of range: " + tok);
                model[static_cast<std::size_t>(std::llabs(l))] = l > 0;
            }
        }
    }
    if (!st) {
        if (exit_code == 10) st = solve_result::status::sat;
        else if (exit_code == 20) st = solve_result::status::unsat;
        else return solve_result::unknown("no result from solver (exit code " + std::to_string(exit_code) + ")");
    }
    if (*st == solve_result::status::unknown) return solve_result::unknown("solver answered UNKNOWN");
    if (*st == solve_result::status::unsat) return {*st, {}, {}};
    return {*st, std::move(model), {}};
}

std::string format_solver_output(const solve_result& r) {
    std::string out = "s ";
    out += to_string(r.st);
    out += '\n';
    if (!r.is_sat()) return out;
    std::string line = "v";
    for (std::size_t v = 1; v < r.model.size(); ++v) {
        auto lit = (r.model[v] ? "" : "-") + std::to_string(v);
        if (line.size() + lit.size() + 1 > 78) {
            out += line + '\n';
            line = "v";
        }
        line += ' ' + lit;
    }
    out += line + " 0\n";
    return out;
}

solve_result solve_external(const cnf_problem& p, const solver_config& cfg) {
    temp_guard input{temp_file("tamtl-cnf")};
    temp_guard output{temp_file("tamtl-out")};
    {
        std::ofstream f(input.path);
        write_dimacs(f, p);
        if (!f) return solve_result::unknown("cannot write " + input.path.string());
    }
    std::vector<std::string> argv_s{cfg.executable};
    argv_s.insert(argv_s.end(), cfg.args.begin(), cfg.args.end());
    argv_s.push_back(input.path.string());
    std::vector<char*> argv;
    for (auto& a : argv_s) argv.push_back(a.data());
    argv.push_back(nullptr);

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
    posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, output.path.c_str(), O_WRONLY | O_TRUNC, 0600);
    posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);
#if defined(__GLIBC__) && (__GLIBC__ > 2 || (__GLIBC__ == 2 && __GLIBC_MINOR__ >= 29))
    if (!cfg.working_directory.empty())
        posix_spawn_file_actions_addchdir_np(&actions, cfg.working_directory.c_str());
#endif
    pid_t pid = 0;
    int rc = posix_spawnp(&pid, cfg.executable.c_str(), &actions, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) return solve_result::unknown("cannot start " + cfg.executable + ": " + std::strerror(rc));

    auto deadline = deadline_after(cfg.timeout_seconds);
    int status = 0;
    for (;;) {
        pid_t w = waitpid(pid, &status, WNOHANG);
        if (w == pid) break;
        if (w < 0) return solve_result::unknown("lost the solver process");
        if (clock_type::now() > deadline) {
            kill(pid, SIGKILL);
            waitpid(pid, &status, 0);
            return solve_result::unknown("timeout");
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    if (WIFSIGNALED(status))
        return solve_result::unknown(cfg.executable + " terminated by signal " + std::to_string(WTERMSIG(status)));
    int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (exit_code == 127) return solve_result::unknown("cannot start " + cfg.executable);
    std::ifstream f(output.path);
    std::stringstream ss;
    ss << f.rdbuf();
    return checked(parse_solver_output(ss.str(), exit_code, p.num_vars), p);
}

solve_result solve(const cnf_problem& p, const solver_config& cfg) {
    if (cfg.timeout_seconds <= 0) return solve_result::unknown("timeout must be positive");
    if (cfg.executable.empty() || cfg.executable == "builtin:cdcl")
        return checked(solve_cdcl(p, cfg.timeout_seconds), p);
    if (cfg.executable == "builtin:dpll") return solve_dpll(p, cfg.timeout_seconds);
    return solve_external(p, cfg);
}

} // namespace tamtl
