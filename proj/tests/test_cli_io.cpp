#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gradflux/errors.hpp"
#include "gradflux/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gradflux;

namespace {

const char* kMinimalRiemann = R"({
  "flux": {
    "f": {"kind": "quadratic", "offset": 1.0},
    "g": {"kind": "quadratic", "offset": 0.0}
  },
  "problem": {
    "type": "riemann",
    "u_left": 2.0, "u_right": 0.0,
    "theta_left": 1, "theta_right": 0
  }
})";

} // namespace

TEST_CASE("minimal Riemann scenario parses with defaults materialized") {
    auto s = parse_scenario(kMinimalRiemann);
    CHECK(s.type == Scenario::Type::Riemann);
    CHECK(s.u_minus == 2.0);
    CHECK(s.horizon == 1.0);
    CHECK(s.seed == 42);
    CHECK(s.output.snapshot_times.size() == 2); // defaults
    CHECK(s.problem.initial_interfaces.positions ==
          std::vector<double>{0.0});
    // the case prediction: u- = 2 >= u* = sqrt(2), single shock
    auto fan = solve_riemann(*s.fluxes.pair, s.u_minus, s.u_plus,
                             s.theta_minus, s.theta_plus);
    CHECK(fan.dispatch == RiemannCase::C2A);
}

TEST_CASE("empty text and unknown keys are parse errors") {
    CHECK_THROWS_AS(parse_scenario(""), ParseError);
    CHECK_THROWS_AS(parse_scenario("{}"), ParseError);
    std::string bad = kMinimalRiemann;
    bad.insert(bad.size() - 2, ", \"extra_key\": 1");
    CHECK_THROWS_AS(parse_scenario(bad), ParseError);
}

TEST_CASE("equal fluxes violate the gap floor") {
    const char* text = R"({
      "flux": {
        "f": {"kind": "quadratic", "offset": 0.0},
        "g": {"kind": "quadratic", "offset": 0.0}
      },
      "problem": {"type": "riemann", "u_left": 1.0, "u_right": 0.0,
                  "theta_left": 1, "theta_right": 0}
    })";
    CHECK_THROWS_AS(parse_scenario(text), ValidationError);
}

TEST_CASE("round-trip: parse(emit(s)) is the identity on materialized form") {
    auto s = parse_scenario(kMinimalRiemann);
    auto s2 = parse_scenario(s.materialized);
    CHECK(s2.materialized == s.materialized);

    const char* cauchy_text = R"({
      "flux": {
        "f": {"kind": "quadratic", "offset": 1.0},
        "g": {"kind": "quadratic", "offset": 0.0}
      },
      "problem": {
        "type": "cauchy",
        "profile": {
          "breakpoints": [0.0, 1.0],
          "segments": [
            {"kind": "constant", "value": 0.0},
            {"kind": "affine", "left_value": 0.0, "right_value": 1.0},
            {"kind": "constant", "value": 1.0}
          ]
        },
        "theta": {"leftmost": 1, "jumps": []},
        "interfaces": []
      },
      "horizon": 0.5
    })";
    auto c = parse_scenario(cauchy_text);
    auto c2 = parse_scenario(c.materialized);
    CHECK(c2.materialized == c.materialized);
}

TEST_CASE("incompatible cauchy data is rejected with the violated clause") {
    const char* text = R"({
      "flux": {
        "f": {"kind": "quadratic", "offset": 1.0},
        "g": {"kind": "quadratic", "offset": 0.0}
      },
      "problem": {
        "type": "cauchy",
        "profile": {
          "breakpoints": [0.0],
          "segments": [
            {"kind": "constant", "value": 1.0},
            {"kind": "constant", "value": 0.0}
          ]
        },
        "theta": {"leftmost": 1, "jumps": []},
        "interfaces": []
      },
      "horizon": 1.0
    })";
    // downward jump with theta = 1 on both sides must be in the interfaces
    CHECK_THROWS_AS(parse_scenario(text), ValidationError);
}

TEST_CASE("snapshot emission is deterministic and grid-stable") {
    auto s = parse_scenario(kMinimalRiemann);
    auto tl = solve(s.problem);

    std::ostringstream a, b;
    GridSpec g{-1.0, 3.0, 401};
    emit_snapshot(a, tl, 0.5, g);
    emit_snapshot(b, tl, 0.5, g);
    CHECK(a.str() == b.str());

    // grid refinement leaves common points bit-identical
    std::ostringstream fine;
    GridSpec g2{-1.0, 3.0, 801};
    emit_snapshot(fine, tl, 0.5, g2);
    // x = -1.0 line appears identically in both
    auto first_data_line = [](const std::string& txt) {
        std::istringstream is(txt);
        std::string line;
        for (int i = 0; i < 4; ++i) std::getline(is, line);
        return line;
    };
    CHECK(first_data_line(a.str()) == first_data_line(fine.str()));
}

TEST_CASE("polynomial flux scenarios build and round-trip") {
    const char* text = R"({
      "flux": {
        "f": {"kind": "polynomial", "coefficients": [1.5, 0.0, 0.5, 0.0, 0.05]},
        "g": {"kind": "polynomial", "coefficients": [0.0, 0.0, 0.5]},
        "domain": [-3.0, 3.0],
        "convexity_floor": 0.9,
        "gap_floor": 1.0
      },
      "problem": {"type": "riemann", "u_left": 1.0, "u_right": 0.0,
                  "theta_left": 1, "theta_right": 0}
    })";
    auto s = parse_scenario(text);
    CHECK_FALSE(s.fluxes.f->is_quadratic());
    auto s2 = parse_scenario(s.materialized);
    CHECK(s2.materialized == s.materialized);
    auto fan = solve_riemann(*s.fluxes.pair, 1.0, 0.0, 1, 0);
    CHECK(check_fan(*s.fluxes.pair, fan).pass);
}

TEST_CASE("validate detects a tampered snapshot artifact") {
    namespace fs = std::filesystem;
    auto s = parse_scenario(kMinimalRiemann);
    fs::path dir = fs::temp_directory_path() / "gradflux_tamper_test";
    fs::remove_all(dir);

    std::ostringstream devnull;
    REQUIRE(run_cauchy(s, dir.string(), devnull) == 0);
    REQUIRE(run_validate(s, dir.string(), devnull) == 0);

    // flip one digit in the first snapshot
    fs::path snap = dir / "snapshot_0.csv";
    std::ifstream is(snap);
    std::stringstream buf;
    buf << is.rdbuf();
    is.close();
    std::string text = buf.str();
    auto pos = text.find("\n2");
    if (pos == std::string::npos) pos = text.rfind('0');
    text[pos + 1] = (text[pos + 1] == '9') ? '8' : '9';
    std::ofstream os(snap);
    os << text;
    os.close();

    std::ostringstream log;
    CHECK(run_validate(s, dir.string(), log) == 1);
    fs::remove_all(dir);
}

TEST_CASE("trajectory export carries the interface traces") {
    auto s = parse_scenario(kMinimalRiemann);
    auto tl = solve(s.problem);
    std::ostringstream os;
    emit_trajectory(os, tl, 0, 0);
    std::string txt = os.str();
    CHECK(txt.find("t,y,ydot,u_left,u_right") != std::string::npos);
    // the shock of this scenario moves at 1.5 with traces 2 and 0
    CHECK(txt.find(",1.5,2,0") != std::string::npos);
}
