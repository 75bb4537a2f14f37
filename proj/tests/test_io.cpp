#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "ergolab/system_io.hpp"
#include "helpers.hpp"

using namespace ergolab;
using nlohmann::json;

namespace {

json minimal_file() {
    return json::parse(R"({
      "group": {"kind": "trivial"},
      "points": ["p"],
      "weights": ["1/1"],
      "actions": [{"generators": {"e": [0]}}]
    })");
}

json z2_swap_file() {
    return json::parse(R"({
      "group": {"kind": "cyclic", "n": 2},
      "points": ["x0", "x1"],
      "weights": ["1/2", "1/2"],
      "actions": [{"generators": {"1": [1, 0]}}, {"generators": {"1": [1, 0]}}]
    })");
}

}  // namespace

TEST_CASE("minimal file parses") {
    GdSystem s = parse_system_json(minimal_file());
    CHECK(s.d() == 1);
    CHECK(s.points() == 1);
    CHECK_FALSE(s.lazy());
}

TEST_CASE("the swap fixture matches the hand-built system") {
    GdSystem s = parse_system_json(z2_swap_file());
    GdSystem hand = testutil::z2_swap_table(2);
    CHECK(s.d() == 2);
    CHECK(s.space()->same_as(*hand.space()));
    for (int i = 1; i <= 2; ++i)
        for (int g = 0; g < 2; ++g) CHECK(s.action(i, g) == hand.action(i, g));
}

TEST_CASE("homomorphism violations are rejected with a message") {
    json j = z2_swap_file();
    j["group"]["n"] = 3;  // swap has order 2, which does not divide... it
    // must satisfy perm^3 = id, and a transposition does not.
    CHECK_THROWS_AS(parse_system_json(j), Error);
    try {
        parse_system_json(j);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("generator") != std::string::npos);
    }
}

TEST_CASE("weights must be exact and sum to one") {
    json j = z2_swap_file();
    j["weights"] = {"1/2", "1/3"};
    CHECK_THROWS_AS(parse_system_json(j), Error);
    j["weights"] = {"0.5", "0.5"};
    CHECK_THROWS_AS(parse_system_json(j), Error);
}

TEST_CASE("integers mode") {
    json j = z2_swap_file();
    j["group"] = {{"kind", "integers"}};
    GdSystem s = parse_system_json(j);
    CHECK(s.lazy());
    CHECK(s.lazy_gen(1) == Perm{1, 0});
    // Exactly one generator with key "1".
    j["actions"][0]["generators"]["2"] = {0, 1};
    CHECK_THROWS_AS(parse_system_json(j), Error);
}

TEST_CASE("parse-serialize-parse is the identity on validated specs") {
    for (json j : {z2_swap_file(), minimal_file()}) {
        GdSystem a = parse_system_json(j);
        json ser = serialize_system(a);
        GdSystem b = parse_system_json(ser);
        CHECK(a.d() == b.d());
        CHECK(a.space()->same_as(*b.space()));
        if (!a.lazy())
            for (int i = 1; i <= a.d(); ++i)
                for (int g = 0; g < a.group()->size(); ++g)
                    CHECK(a.action(i, g) == b.action(i, g));
        // Determinism: serialize twice, identical bytes.
        CHECK(serialize_system(a).dump(2) == serialize_system(b).dump(2));
    }
    // Lazy round trip.
    json j = z2_swap_file();
    j["group"] = {{"kind", "integers"}};
    GdSystem a = parse_system_json(j);
    GdSystem b = parse_system_json(serialize_system(a));
    CHECK(b.lazy());
    CHECK(a.lazy_gen(1) == b.lazy_gen(1));
}

TEST_CASE("observable csv round trip and validation") {
    auto x = ProbSpace::uniform(2);
    Obs f(x, {GaussRat(Rat(1, 2), Rat(-1, 3)), GaussRat(1)});
    std::ostringstream os;
    write_obs_csv(os, f);
    CHECK(os.str() == "point,real,imag\nx0,1/2,-1/3\nx1,1/1,0/1\n");
    std::istringstream is(os.str());
    Obs g = parse_obs_csv(is, x);
    CHECK(f == g);

    std::istringstream missing("point,real,imag\nx0,1/2,0/1\n");
    CHECK_THROWS_AS(parse_obs_csv(missing, x), Error);
    std::istringstream unknown("point,real,imag\nzz,1/2,0/1\nx0,1,0\nx1,1,0\n");
    CHECK_THROWS_AS(parse_obs_csv(unknown, x), Error);
}

TEST_CASE("rational string forms") {
    CHECK(rat_from_string("3") == Rat(3));
    CHECK(rat_from_string("-4/6") == Rat(-2, 3));
    CHECK(rat_to_string(Rat(5)) == "5/1");
    CHECK_THROWS_AS(rat_from_string("1/0"), Error);
    CHECK_THROWS_AS(rat_from_string(""), Error);
    CHECK_THROWS_AS(rat_from_string("x"), Error);
    CHECK_THROWS_AS(rat_from_string("1.5"), Error);
}
