#pragma once

#include <string>

#include "tamtl/model.hpp"

namespace tamtl {

// Model file text for n instances of the request/response protocol with
// timing constants t1 (send), t2 (answer) and t3 (whole run), delta = 1.
// One instance carries properties p1..p5 and p3p; two or more carry the
// pairwise synchronization axioms and properties p6 and p7.
[[nodiscard]] std::string corpus_protocol_text(int n, int t1, int t2, int t3, int bound);
[[nodiscard]] model_file corpus_protocol(int n, int t1, int t2, int t3, int bound);

// Instance name for index i: A, B, ..., Z, A1, B1, ...
[[nodiscard]] std::string instance_name(int i);

} // namespace tamtl
