#include "../support/fixtures.hpp"

#include "omts/generator.hpp"
#include "omts/io.hpp"

#include <doctest.h>

using namespace omts;
using namespace omts::testing;

TEST_CASE("rationals parse and render canonically")
{
    CHECK(to_string(parse_rational("2/4")) == "1/2");
    CHECK(to_string(parse_rational("-6/3")) == "-2/1");
    CHECK(to_string(parse_rational("3")) == "3/1");
    CHECK(to_string(parse_rational("-1.25")) == "-5/4");
    CHECK(to_string(parse_rational(".5")) == "1/2");
    CHECK(to_string(ratio(4, -6)) == "-2/3");
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("abc"), Error);
    CHECK_THROWS_AS(parse_rational("1/-2"), Error);
    CHECK_THROWS_AS(parse_rational(""), Error);
    CHECK(to_decimal(q("1/3"), 3) == "0.333");
}

TEST_CASE("extended rationals order infinities and absorb them")
{
    Extended inf = Extended::infinity(), ninf = Extended::negative_infinity();
    CHECK(ninf < Extended{ -1000 });
    CHECK(Extended{ 1000 } < inf);
    CHECK(inf + Extended{ 3 } == inf);
    CHECK(ninf + Extended{ 3 } == ninf);
    CHECK(Extended{ q("1/2") } + Extended{ q("1/3") } == Extended{ q("5/6") });
    CHECK(inf.scaled(0) == Extended{ 0 });
    CHECK(inf.scaled(q("1/2")) == inf);
    CHECK(Extended{ 4 }.scaled(q("1/2")) == Extended{ 2 });
    CHECK_THROWS_AS(Extended{ 1 }.scaled(-1), Error);
    CHECK_THROWS_AS((void)inf.value(), Error);
    CHECK(to_string(inf) == "inf");
    CHECK(to_string(ninf) == "-inf");
    CHECK(parse_extended("inf") == inf);
    CHECK(parse_extended("3/6") == Extended{ q("1/2") });
}

namespace
{

Omts two_state()
{
    return make_omts({ { "q0", pt({ "0" }) }, { "q1", pt({ "1" }) } }, { "q0" },
                     { { "q0", lab("a", "1"), "q1", lab("b", "1") }, { "q1", lab("b", "1"), "q0", Label::empty() } });
}

} // namespace

TEST_CASE("validate accepts well-formed models and names every violation")
{
    CHECK(validate(two_state()).ok());
    CHECK(validate(materialize_empty_loops(two_state())).ok());

    Omts bad = two_state();
    bad.states.push_back("q0");
    bad.initial.push_back("z");
    bad.transitions.push_back({ "q0", Label::empty(), "q1", Label::empty() });
    bad.transitions.push_back({ "q1", lab("c", "1"), "q9", Label::empty() });
    bad.outputs["q1"] = pt({ "1", "2" });
    bad.alphabet.push_back(lab("@x", "0"));
    auto report = validate(bad);
    auto has = [&](const std::string& needle) {
        return std::any_of(report.violations.begin(), report.violations.end(),
                           [&](const std::string& v) { return v.find(needle) != std::string::npos; });
    };
    CHECK(has("duplicate state id 'q0'"));
    CHECK(has("initial state 'z'"));
    CHECK(has("must not change the state"));
    CHECK(has("unknown destination state id 'q9'"));
    CHECK(has("label is not in the alphabet"));
    CHECK(has("dimension"));
    CHECK(has("reserved"));
    CHECK_THROWS_AS(IndexedOmts{ bad }, Error);
}

TEST_CASE("post follows transitions with the given labels")
{
    Omts m = two_state();
    CHECK(post(m, "q0", { lab("a", "1") }) == std::set<StateId>{ "q1" });
    CHECK(post(m, "q0", { lab("b", "1") }).empty());
    CHECK(post(materialize_empty_loops(m), "q1", { Label::empty() }) == std::set<StateId>{ "q1" });
    CHECK_THROWS_AS(post(m, "zz", {}), Error);
}

TEST_CASE("empty self-loops are materialized with output ports")
{
    Omts m = materialize_empty_loops(two_state());
    int loops = 0;
    for (const auto& t : m.transitions)
        if (t.label.is_empty()) {
            ++loops;
            CHECK(t.src == t.dst);
            CHECK(t.port == nu_port(m.outputs.at(t.src)));
        }
    CHECK(loops == 2);
    CHECK(materialize_empty_loops(m) == m);

    IndexedOmts idx(two_state());
    CHECK(idx.labels().front().is_empty());
    for (std::size_t q = 0; q < idx.size(); ++q)
        CHECK(std::any_of(idx.outgoing(q).begin(), idx.outgoing(q).end(),
                          [&](const auto& e) { return idx.label(e).is_empty() && e.dst == q; }));
}

TEST_CASE("model files round-trip bit-exactly on canonical forms")
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Omts m = generate_random_omts(seed, 1 + seed % 5, 1 + seed % 3, seed % 4, { 1 + unsigned(seed % 2), 2, 4 });
        std::string text = serialize_omts(m);
        Omts back = parse_omts(text);
        CHECK(canonicalize(back) == canonicalize(m));
        CHECK(serialize_omts(back) == text);
    }
    Omts jumps = make_omts({ { "x", pt({ "0" }) } }, { "x" },
                           { { "x", Label::timed("h", q("3"), { q("1"), q("2") }), "x", Label::empty() } });
    CHECK(parse_omts(serialize_omts(jumps)) == canonicalize(jumps));
}

TEST_CASE("model parsing reports malformed documents")
{
    CHECK_THROWS_AS(parse_omts("{"), Error);
    CHECK_THROWS_AS(parse_omts(R"({"states":[]})"), Error);
    CHECK_THROWS_AS(
        parse_omts(R"({"states":["a"],"initial":["a"],"alphabet":[],"outputs":{"a":["x"]},"transitions":[]})"), Error);
    CHECK_THROWS_AS(
        parse_omts(R"({"states":["a"],"initial":["a"],"alphabet":["mu"],"outputs":{"a":["1"]},"transitions":[]})"),
        Error);
}

TEST_CASE("the generator is deterministic and produces valid models")
{
    CHECK(generate_random_omts(7, 4, 3, 2) == generate_random_omts(7, 4, 3, 2));
    CHECK(generate_random_omts(7, 4, 3, 2) != generate_random_omts(8, 4, 3, 2));
    Omts single = generate_random_omts(1, 1, 2, 0);
    REQUIRE(single.transitions.size() == 1);
    CHECK(single.transitions[0].label.is_empty());
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Omts m = generate_random_omts(seed, 1 + seed % 6, 1 + seed % 4, seed % 4);
        CHECK(validate(m).ok());
        CHECK(!m.initial.empty());
    }
}
