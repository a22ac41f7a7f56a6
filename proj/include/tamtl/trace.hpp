#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tamtl/signature.hpp"

namespace tamtl {

class trace_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct position_state {
    std::vector<std::uint32_t> values; // per item, index into its domain
    std::vector<std::uint8_t> props;   // per proposition, 0 or 1
    bool operator==(const position_state&) const = default;
};

// Ultimately periodic word w(0..k) (w(l..k))^omega with 1 <= loop <= k.
class lasso_trace {
public:
    lasso_trace() = default;
    lasso_trace(int k, int loop, std::vector<position_state> states);

    [[nodiscard]] int k() const { return _k; }
    [[nodiscard]] int loop() const { return _loop; }
    [[nodiscard]] int period() const { return _k - _loop + 1; }
    [[nodiscard]] const std::vector<position_state>& states() const { return _states; }

    // Index into states() of an arbitrary position of the infinite word.
    [[nodiscard]] std::size_t index_of(std::int64_t pos) const {
        if (pos <= _k) return static_cast<std::size_t>(pos);
        return static_cast<std::size_t>(_loop + (pos - _loop) % period());
    }
    [[nodiscard]] const position_state& at(std::int64_t pos) const { return _states[index_of(pos)]; }

    // Throws trace_error when the states do not fit the signature.
    void check(const signature& sig) const;

    bool operator==(const lasso_trace&) const = default;

private:
    int _k{0};
    int _loop{1};
    std::vector<position_state> _states;
};

// Text format:
//   loop: <l>
//   <pos> | item=value ... | prop ...
[[nodiscard]] lasso_trace parse_trace(std::string_view text, const signature& sig);
[[nodiscard]] std::string format_trace(const lasso_trace& t, const signature& sig);

} // namespace tamtl
