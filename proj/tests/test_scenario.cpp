#include <doctest.h>

#include <algorithm>
#include <fstream>

#include "moltrap/scenario.hpp"

using namespace moltrap;
using namespace moltrap::scenario;

namespace {

const std::string kIonText =
    "kind = derive_ion\nN = 100\nB = 5 T\nnu_z = 318 kHz\nT = 4.2 K\n";

bool has_error(const ParseOutcome& out, const std::string& code) {
    return std::any_of(out.errors.begin(), out.errors.end(),
                       [&](const ParseError& e) { return e.code == code; });
}

}  // namespace

TEST_CASE("valid ion scenario parses with unit scaling") {
    const auto out = parse_scenario(kIonText);
    REQUIRE(out.ok());
    CHECK(out.scenario->kind == Kind::derive_ion);
    CHECK(out.scenario->get("N") == 100.0);
    CHECK(out.scenario->get("B") == 5.0);
    CHECK(out.scenario->get("nu_z") == 318e3);  // kHz converted to Hz
    CHECK(out.scenario->get("T") == 4.2);
}

TEST_CASE("missing required key") {
    const auto out = parse_scenario("kind = derive_ion\nN = 100\nnu_z = 318 kHz\n");
    CHECK_FALSE(out.ok());
    CHECK(has_error(out, "MissingKey"));
}

TEST_CASE("unit mismatch") {
    const auto out = parse_scenario("kind = derive_ion\nN = 100\nB = 5 kg\nnu_z = 318 kHz\n");
    CHECK_FALSE(out.ok());
    CHECK(has_error(out, "UnitMismatch"));
}

TEST_CASE("unknown key and malformed line, all errors reported with line numbers") {
    const auto out = parse_scenario(
        "kind = derive_ion\nN = 100\nB = 5 T\nnu_z = 318 kHz\nbogus = 3\nB 5 T\n");
    CHECK_FALSE(out.ok());
    REQUIRE(out.errors.size() == 2);
    CHECK(has_error(out, "UnknownKey"));
    CHECK(has_error(out, "MalformedLine"));
    for (const auto& e : out.errors) CHECK(e.line >= 5);
}

TEST_CASE("optical scenario must pick one stiffness route") {
    const auto both = parse_scenario(
        "kind = derive_optical\nM = 2e-16 kg\nk = 2e-16 N/m\nweight_fraction = 1e-6\n"
        "displacement = 10 um\n");
    CHECK_FALSE(both.ok());
    const auto neither = parse_scenario("kind = derive_optical\nM = 2e-16 kg\n");
    CHECK_FALSE(neither.ok());
}

TEST_CASE("render/parse round trip") {
    for (const auto& f : paper_fixtures()) {
        const auto first = parse_scenario(f.scenario_text);
        REQUIRE(first.ok());
        const auto again = parse_scenario(render_scenario(*first.scenario));
        REQUIRE(again.ok());
        CHECK(*again.scenario == *first.scenario);
    }
}

TEST_CASE("ion fixture report carries the headline values") {
    const auto out = parse_scenario(kIonText);
    REQUIRE(out.ok());
    const auto run = run_scenario(*out.scenario);
    CHECK(run.rep.value("nu_c") == doctest::Approx(76e3).epsilon(0.02));
    CHECK(run.rep.value("spring_k") == doctest::Approx(6.7e-12).epsilon(0.01));
    CHECK_FALSE(run.rep.notes.empty());  // radial-confinement warning
}

TEST_CASE("readout fixture report") {
    const auto out = parse_scenario(
        "kind = readout\nN = 100\nB = 5 T\nnu_z = 318 kHz\nT = 4.2 K\n"
        "gradient = 100 T/m\nduration = 30 s\nresolution = 3 um\n");
    REQUIRE(out.ok());
    const auto run = run_scenario(*out.scenario);
    CHECK(run.rep.value("spin_force_f") == doctest::Approx(5.05e-25).epsilon(1e-12));
    CHECK(run.rep.value("static_deflection") == doctest::Approx(7.56e-14).epsilon(0.01));
    CHECK(run.rep.value("delta_A") == doctest::Approx(3e-6).epsilon(0.05));
}

TEST_CASE("optical fixture report") {
    const auto out = parse_scenario(
        "kind = derive_optical\nM = 2e-16 kg\nk = 2e-16 N/m\ngradient = 500 T/m\n"
        "moment = 1.410e-26 J/T\n");
    REQUIRE(out.ok());
    const auto run = run_scenario(*out.scenario);
    CHECK(run.rep.value("nu_z") == doctest::Approx(0.159).epsilon(0.01));
    CHECK(run.rep.value("static_deflection") == doctest::Approx(3.5e-8).epsilon(0.02));
}

TEST_CASE("protocol scenario reports a cancelled background") {
    const auto out = parse_scenario(
        "kind = protocol\nN = 100\nB = 5 T\nnu_z = 318 kHz\ngradient = 100 T/m\n"
        "nu_flip = 3.18 kHz\nbackground = 50\nflip_periods = 10\nseed = 9\n");
    REQUIRE(out.ok());
    const auto run = run_scenario(*out.scenario);
    CHECK(run.rep.value("cancellation_ratio") <= 1e-10);
    CHECK(run.rep.value("amplitude_gain_m") > 0);
}

TEST_CASE("identical runs render identical bytes") {
    const auto out = parse_scenario(kIonText);
    REQUIRE(out.ok());
    const auto a = run_scenario(*out.scenario).rep;
    const auto b = run_scenario(*out.scenario).rep;
    CHECK(a.to_table() == b.to_table());
    CHECK(a.to_json() == b.to_json());
}

TEST_CASE("compare_to_fixture verdicts") {
    const auto out = parse_scenario(kIonText);
    REQUIRE(out.ok());
    auto rep = run_scenario(*out.scenario).rep;

    const auto& fixture = paper_fixtures()[0];
    CHECK(report::compare_to_fixture(rep, fixture.paper_tols).all_pass());

    // perturb one key: only that row fails
    for (auto& e : rep.entries) {
        if (e.key == "nu_c") *e.number *= 1.10;
    }
    const auto table = report::compare_to_fixture(rep, fixture.paper_tols);
    CHECK_FALSE(table.all_pass());
    for (const auto& row : table.rows) CHECK(row.pass == (row.key != "nu_c"));

    CHECK_THROWS_AS(report::compare_to_fixture(rep, {{"no_such_key", 1.0, 0.1}}),
                    KeyMismatch);
}

TEST_CASE("verify-paper passes under both tolerance profiles") {
    for (auto profile : {ToleranceProfile::paper, ToleranceProfile::strict}) {
        for (const auto& table : verify_paper(profile)) {
            INFO(table.name);
            CHECK(table.all_pass());
        }
    }
}
