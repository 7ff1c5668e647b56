#include <cmath>

#include "doctest.h"
#include "logitpath/error.hpp"
#include "logitpath/spec_io.hpp"
#include "support.hpp"

using namespace logitpath;
using nlohmann::json;

namespace {

std::string data(const char* name) { return std::string(LOGITPATH_TEST_DATA) + "/" + name; }

json minimal() {
    return json::parse(R"({
        "schema_version": "1",
        "treatment": {"kind": "binary"},
        "mediators": [{"index": 1, "gamma0": 0.1, "gamma_x": 0.4}],
        "outcome": {"beta0": -0.2, "beta_x": 0.5, "beta_w": {"1": 0.9}}
    })");
}

ErrorKind kind_of(const json& doc) {
    try {
        parse_spec(doc);
    } catch (const Error& e) {
        return e.kind();
    }
    return static_cast<ErrorKind>(0);
}

// Both specs give the same outcome and mediator predictors everywhere.
void check_same_law(const SystemSpec& a, const SystemSpec& b) {
    REQUIRE(a.num_mediators() == b.num_mediators());
    const auto c = a.covariate_point();
    const std::size_t k = a.num_mediators();
    for (std::size_t mask = 0; mask < (std::size_t{2} << k); ++mask) {
        std::vector<int> w(k);
        for (std::size_t i = 0; i < k; ++i) w[i] = static_cast<int>((mask >> (i + 1)) & 1u);
        const double x = static_cast<double>(mask & 1u);
        CHECK(outcome_logit(a, x, w, c) == outcome_logit(b, x, w, c));
        for (std::size_t i = 0; i < k; ++i) {
            const std::vector<int> outer(w.begin() + static_cast<long>(i) + 1, w.end());
            const int index = a.mediators[i].index;
            CHECK(mediator_logit(a, index, x, outer, c) == mediator_logit(b, index, x, outer, c));
        }
    }
}

}  // namespace

TEST_CASE("fixtures load") {
    const auto collapsible = load_spec(data("collapsible.json"));
    CHECK(collapsible.system.treatment == TreatmentKind::continuous);
    CHECK(collapsible.x_grid == std::vector<double>{-1, 0, 1});
    CHECK(collapsible.options.sweep.gamma_x == std::vector<double>{-1, 0, 1});

    const auto nc = load_spec(data("noncollapsible.json"));
    REQUIRE(nc.system.covariates);
    CHECK(nc.system.covariates->names == std::vector<std::string>{"age"});
    CHECK(nc.system.outcome.beta_xc == std::vector<double>{0.15});
    REQUIRE(nc.system.confounder_view);
    CHECK(nc.system.confounder_view->delta_w == 0.8);

    const auto chain = load_spec(data("chain_k2.json"));
    CHECK(chain.system.num_mediators() == 2);
    CHECK(chain.system.outcome.beta_ww.at({1, 2}) == 0.45);
    CHECK(chain.system.mediators[0].gamma_xw.at(2) == -0.3);

    CHECK(load_spec(data("chain_k2_continuous.json")).options.taylor_x0 == 0.0);
}

TEST_CASE("round trip through the writer") {
    for (const char* name : {"collapsible.json", "noncollapsible.json", "chain_k2.json", "chain_k2_continuous.json"}) {
        const auto file = load_spec(data(name));
        const auto again = parse_spec(json::parse(spec_to_json(file).dump()));
        check_same_law(file.system, again.system);
        CHECK(again.x_grid == file.x_grid);
    }
    logitpath::testing::Draw d(71);
    for (int i = 0; i < 20; ++i) {
        SpecFile file;
        file.schema_version = schema_version;
        file.system = logitpath::testing::random_spec(d, {3, 2, TreatmentKind::binary, true, true});
        file.system.outcome.beta_higher[BinaryTerm{true, {1, 2, 3}}] = d.coef();
        const auto again = parse_spec(json::parse(spec_to_json(file).dump()));
        check_same_law(file.system, again.system);
    }
}

TEST_CASE("strict schema") {
    CHECK_NOTHROW(parse_spec(minimal()));

    auto doc = minimal();
    doc["outcome"]["beta_xx"] = 1.0;
    CHECK(kind_of(doc) == ErrorKind::parse);

    doc = minimal();
    doc["schema_version"] = "2";
    CHECK(kind_of(doc) == ErrorKind::parse);

    doc = minimal();
    doc.erase("schema_version");
    CHECK(kind_of(doc) == ErrorKind::parse);

    doc = minimal();
    doc["treatment"]["x"] = json::array({0, 1});
    CHECK(kind_of(doc) == ErrorKind::parse);

    doc = minimal();
    doc["treatment"]["kind"] = "ordinal";
    CHECK(kind_of(doc) == ErrorKind::parse);

    doc = minimal();
    doc["mediators"][0]["index"] = 2;
    CHECK(kind_of(doc) == ErrorKind::parse);

    doc = minimal();
    doc["outcome"]["beta_w"]["3"] = 1.0;
    CHECK(kind_of(doc) == ErrorKind::parse);

    doc = minimal();
    doc["outcome"]["beta_x"] = "0.5";
    CHECK(kind_of(doc) == ErrorKind::parse);

    doc = minimal();
    doc["outcome"]["beta_c"] = {{"age", 1.0}};
    CHECK(kind_of(doc) == ErrorKind::parse);

    doc = minimal();
    doc["covariates"] = {{"names", {"age"}}, {"values", {1.0, 2.0}}};
    CHECK(kind_of(doc) == ErrorKind::parse);

    doc = minimal();
    doc["extra"] = true;
    CHECK(kind_of(doc) == ErrorKind::parse);

    CHECK_THROWS_AS(load_spec(data("does_not_exist.json")), Error);
}
