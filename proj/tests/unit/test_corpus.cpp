#include "doctest.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tamtl/corpus.hpp"
#include "tamtl/parser.hpp"
#include "tamtl/verifier.hpp"

using namespace tamtl;

namespace {

const std::string corpus_dir = std::string(TAMTL_SOURCE_DIR) + "/corpus/";

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const nlohmann::json& manifest() {
    static const nlohmann::json j = nlohmann::json::parse(slurp(corpus_dir + "manifest.json"));
    return j;
}

} // namespace

TEST_CASE("manifest lists every corpus file") {
    const auto& fixtures = manifest()["fixtures"];
    CHECK(fixtures.size() >= 6);
    for (const auto& fx : fixtures) {
        INFO(fx["file"].get<std::string>());
        CHECK_NOTHROW((void)load_model(corpus_dir + fx["file"].get<std::string>()));
        CHECK_FALSE(fx["verdicts"].empty());
    }
}

TEST_CASE("generated fixtures match the generator") {
    for (const auto& fx : manifest()["fixtures"]) {
        if (!fx.contains("generator")) continue;
        const auto& g = fx["generator"];
        INFO(fx["file"].get<std::string>());
        CHECK(slurp(corpus_dir + fx["file"].get<std::string>()) ==
              corpus_protocol_text(g["instances"], g["t1"], g["t2"], g["t3"], g["bound"]));
    }
}

TEST_CASE("formulas print and parse back unchanged") {
    for (const auto& fx : manifest()["fixtures"]) {
        auto m = load_model(corpus_dir + fx["file"].get<std::string>());
        for (const auto* group : {&m.axioms, &m.properties})
            for (const auto& f : *group) {
                INFO(fx["file"].get<std::string>(), " ", f.name);
                CHECK(parse_formula(to_string(f.formula), m.sig) == f.formula);
            }
    }
}

TEST_CASE("verdicts match the manifest") {
    for (const auto& fx : manifest()["fixtures"]) {
        auto file = fx["file"].get<std::string>();
        auto m = load_model(corpus_dir + file);
        for (const auto& [name, expected] : fx["verdicts"].items()) {
            auto v = check_property(m, name);
            INFO(file, " ", name);
            CHECK(to_string(v.outcome) == expected.get<std::string>());
            CHECK(v.counterexample.has_value() == (v.outcome == verdict::kind::falsified));
        }
        if (fx.contains("consistency")) {
            INFO(file);
            CHECK(to_string(check_consistency(m).outcome) == fx["consistency"].get<std::string>());
        }
        if (fx.contains("consistency_naive_guards")) {
            verify_options naive;
            naive.naive_guards = true;
            INFO(file);
            CHECK(to_string(check_consistency(m, naive).outcome) == fx["consistency_naive_guards"].get<std::string>());
        }
    }
}

TEST_CASE("the property 2 counterexample survives longer bounds") {
    auto m = load_model(corpus_dir + "protocol.tv");
    for (int k : {30, 36, 42}) {
        INFO("k=", k);
        auto v = check_property(m, "p2", {.bound = k});
        CHECK(v.outcome == verdict::kind::falsified);
        REQUIRE(v.counterexample);
        CHECK(v.counterexample->k() == k);
    }
}
