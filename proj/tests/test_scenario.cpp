#include "qtheta/scenario.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <fstream>

using namespace qtheta;

namespace {

nlohmann::json small_scenario() {
    return nlohmann::json::parse(R"({
        "schema_version": 1,
        "name": "unit",
        "seed": 777,
        "lattice": {"N": 1, "generators": [[1, 0], [0, 1]]},
        "siegel": {"T_re": [[0]], "T_im": [[1]]},
        "checks": [
            {"name": "lattice_duality"},
            {"name": "classical_theta_value"},
            {"name": "eta_identities", "samples": 5}
        ]
    })");
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("runs and reports") {
    Report r = run_scenario(small_scenario());
    CHECK(r.all_pass);
    CHECK(r.checks.size() == 3);
    for (const auto& c : r.checks) {
        CHECK(c.pass);
        CHECK(c.residual <= c.tolerance + c.tail_bound);
    }
    CHECK(r.seed == 777);
}

TEST_CASE("reports are byte-identical for a fixed seed") {
    std::string a = report_to_json(run_scenario(small_scenario()), false).dump(2);
    std::string b = report_to_json(run_scenario(small_scenario()), false).dump(2);
    CHECK(a == b);
}

TEST_CASE("unknown checks and malformed scenarios are configuration errors") {
    nlohmann::json bad = small_scenario();
    bad["checks"][0]["name"] = "no_such_check";
    CHECK_THROWS_AS(run_scenario(bad), std::invalid_argument);

    nlohmann::json nochecks = small_scenario();
    nochecks.erase("checks");
    CHECK_THROWS_AS(run_scenario(nochecks), std::invalid_argument);

    // a check that needs data the scenario does not provide
    nlohmann::json nolattice = small_scenario();
    nolattice.erase("lattice");
    CHECK_THROWS_AS(run_scenario(nolattice), std::invalid_argument);
}

TEST_CASE("an unreachable tolerance fails the run without throwing") {
    nlohmann::json s = small_scenario();
    s["checks"] = nlohmann::json::array({nlohmann::json{{"name", "classical_theta_value"},
                                                        {"tolerance", 0.0}}});
    Report r = run_scenario(s);
    CHECK_FALSE(r.all_pass);
}

TEST_CASE("exercise the bundled scenario files") {
    for (const char* name : {"/scenarios/standard_n1.json", "/scenarios/poisson_2z.json"}) {
        std::ifstream in(std::string(QTHETA_SOURCE_DIR) + name);
        REQUIRE(in.good());
        nlohmann::json j;
        in >> j;
        Report r = run_scenario(j);
        for (const auto& c : r.checks) {
            INFO(c.name, ": ", c.error);
            CHECK(c.pass);
        }
        CHECK(r.all_pass);
    }
}

TEST_CASE("check registry is alphabetical and nonempty") {
    auto names = available_checks();
    CHECK(names.size() >= 15);
    CHECK(std::is_sorted(names.begin(), names.end()));
}

}  // TEST_SUITE
