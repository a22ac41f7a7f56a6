#include "tamtl/trace.hpp"

#include <sstream>

namespace tamtl {

lasso_trace::lasso_trace(int k, int loop, std::vector<position_state> states)
    : _k(k), _loop(loop), _states(std::move(states)) {
    if (k < 1) throw trace_error("trace length k must be at least 1");
    if (loop < 1 || loop > k) throw trace_error("loop position must lie in [1, k]");
    if (_states.size() != static_cast<std::size_t>(k) + 1) throw trace_error("trace must have k+1 positions");
}

void lasso_trace::check(const signature& sig) const {
    for (const auto& s : _states) {
        if (s.values.size() != sig.items().size() || s.props.size() != sig.propositions().size())
            throw trace_error("trace state does not match the signature");
        for (std::size_t i = 0; i < s.values.size(); ++i)
            if (s.values[i] >= sig.items()[i].domain.size()) throw trace_error("item value out of domain");
    }
}

namespace {

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

} // namespace

lasso_trace parse_trace(std::string_view text, const signature& sig) {
    int loop = -1;
    std::vector<position_state> states;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = trim(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        auto where = [&] { return "trace line " + std::to_string(line_no) + ": "; };
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        if (line.rfind("loop:", 0) == 0) {
            try {
                loop = std::stoi(std::string(line.substr(5)));
            } catch (const std::exception&) {
                throw trace_error(where() + "bad loop header");
            }
            continue;
        }
        auto bar1 = line.find('|');
        if (bar1 == std::string_view::npos) throw trace_error(where() + "expected 'pos | items | props'");
        auto bar2 = line.find('|', bar1 + 1);
        auto pos_s = trim(line.substr(0, bar1));
        auto items_s = bar2 == std::string_view::npos ? line.substr(bar1 + 1) : line.substr(bar1 + 1, bar2 - bar1 - 1);
        auto props_s = bar2 == std::string_view::npos ? std::string_view{} : line.substr(bar2 + 1);
        if (pos_s != std::to_string(states.size())) throw trace_error(where() + "positions must be listed in order from 0");
        position_state st;
        st.values.assign(sig.items().size(), UINT32_MAX);
        st.props.assign(sig.propositions().size(), 0);
        for (const auto& a : split_ws(items_s)) {
            auto eq = a.find('=');
            if (eq == std::string::npos) throw trace_error(where() + "expected item=value, got '" + a + "'");
            auto item = sig.item_index(a.substr(0, eq));
            if (!item) throw trace_error(where() + "unknown item '" + a.substr(0, eq) + "'");
            auto v = sig.value_index(*item, a.substr(eq + 1));
            if (!v) throw trace_error(where() + "value '" + a.substr(eq + 1) + "' not in domain");
            st.values[*item] = static_cast<std::uint32_t>(*v);
        }
        for (std::size_t i = 0; i < st.values.size(); ++i)
            if (st.values[i] == UINT32_MAX) throw trace_error(where() + "missing value for item '" + sig.items()[i].name + "'");
        for (const auto& p : split_ws(props_s)) {
            auto ix = sig.prop_index(p);
            if (!ix) throw trace_error(where() + "unknown proposition '" + p + "'");
            st.props[*ix] = 1;
        }
        states.push_back(std::move(st));
    }
    if (loop < 0) throw trace_error("trace has no 'loop:' header");
    if (states.empty()) throw trace_error("trace has no positions");
    int k = static_cast<int>(states.size()) - 1;
    return lasso_trace(k, loop, std::move(states));
}

std::string format_trace(const lasso_trace& t, const signature& sig) {
    std::string out = "loop: " + std::to_string(t.loop()) + "\n";
    for (std::size_t p = 0; p < t.states().size(); ++p) {
        const auto& s = t.states()[p];
        out += std::to_string(p) + " |";
        for (std::size_t i = 0; i < s.values.size(); ++i)
            out += " " + sig.items()[i].name + "=" + sig.items()[i].domain[s.values[i]];
        out += " |";
        for (std::size_t i = 0; i < s.props.size(); ++i)
            if (s.props[i]) out += " " + sig.propositions()[i];
        out += "\n";
    }
    return out;
}

} // namespace tamtl
