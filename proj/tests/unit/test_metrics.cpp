#include "../support/fixtures.hpp"

#include "omts/hybrid_time.hpp"
#include "omts/metrics.hpp"

#include <doctest.h>

#include <random>

using namespace omts;
using namespace omts::testing;

TEST_CASE("output metrics")
{
    MetricSuite sup;
    MetricSuite euclid{ OutputMetric::euclid, LabelMetric::timed, StringMetric::maxpos, {} };
    CHECK(d_pi(sup, pt({ "0", "0" }), pt({ "1", "-3/2" })) == Extended{ q("3/2") });
    CHECK(d_pi(sup, pt({ "1", "3" }), pt({ "2", "1" })) == Extended{ 2 });
    CHECK(d_pi(sup, pt({ "0" }), pt({ "1/2" })) == Extended{ q("1/2") });
    CHECK(d_pi(euclid, pt({ "0", "0" }), pt({ "3", "4" })) == Extended{ 25 });
    CHECK(d_pi(sup, pt({}), pt({})) == Extended{ 0 });
    CHECK_THROWS_AS(d_pi(sup, pt({ "0" }), pt({ "0", "1" })), Error);
    CHECK(output_threshold(euclid, Extended{ q("1/2") }) == Extended{ q("1/4") });
    CHECK(output_threshold(sup, Extended{ q("1/2") }) == Extended{ q("1/2") });
    CHECK(output_threshold(euclid, Extended::infinity()).is_infinity());
}

TEST_CASE("product output metrics combine the blocks")
{
    MetricSuite m{ OutputMetric::sup, LabelMetric::timed, StringMetric::maxpos, ProductLayout{ 1, Combiner::max } };
    MetricSuite s = m;
    s.product->combine = Combiner::sum;
    auto a = pt({ "0", "0" }), b = pt({ "1", "1/2" });
    CHECK(d_pi(m, a, b) == Extended{ 1 });
    CHECK(d_pi(s, a, b) == Extended{ q("3/2") });
    MetricSuite e = m;
    e.d_pi = OutputMetric::euclid;
    CHECK(d_pi(e, pt({ "0", "0", "0" }), pt({ "1", "1", "1" })) == Extended{ 2 });
    e.product->combine = Combiner::sum;
    CHECK_THROWS_AS(d_pi(e, a, b), Error);
    m.product->split = 3;
    CHECK_THROWS_AS(d_pi(m, a, b), Error);
}

TEST_CASE("label metrics")
{
    MetricSuite timed;
    MetricSuite hybrid{ OutputMetric::sup, LabelMetric::hybrid, StringMetric::hybridcat, {} };
    Label nu = Label::empty();
    CHECK(d_sigma(timed, nu, nu) == Extended{ 0 });
    CHECK(d_sigma(timed, nu, lab("a", "1")).is_infinity());
    CHECK(d_sigma(timed, lab("a", "1"), lab("a", "5/2")) == Extended{ q("3/2") });
    CHECK(d_sigma(timed, lab("a", "1"), lab("b", "1")).is_infinity());
    CHECK(d_sigma(hybrid, lab("a", "1"), lab("b", "3/2")) == Extended{ q("1/2") });
    CHECK(d_sigma(hybrid, nu, lab("a", "0")).is_infinity());
    CHECK(d_sigma(hybrid, Label::timed("a", q("2"), { q("1") }), lab("a", "2")).is_infinity());
}

TEST_CASE("string metrics")
{
    MetricSuite maxpos;
    MetricSuite cat{ OutputMetric::sup, LabelMetric::hybrid, StringMetric::hybridcat, {} };
    Label nu = Label::empty();
    std::vector<Label> s{ lab("a", "1"), nu, lab("b", "2") };
    std::vector<Label> a{ lab("a", "3/2"), lab("b", "2") };
    CHECK(d_sigma_star(maxpos, s, a) == Extended{ q("1/2") });
    CHECK(d_sigma_star(maxpos, s, std::vector<Label>{ lab("a", "1") }).is_infinity());
    CHECK(d_sigma_star(maxpos, std::vector<Label>{ nu }, std::vector<Label>{}) == Extended{ 0 });
    CHECK(d_sigma_star(cat, std::vector<Label>{ lab("a", "1"), lab("a", "1") },
                       std::vector<Label>{ lab("a", "3/2"), lab("a", "1") }) == Extended{ q("1/2") });
    CHECK(d_sigma_star(cat, std::vector<Label>{}, std::vector<Label>{ nu }) == Extended{ 0 });
    CHECK(d_sigma_star(cat, std::vector<Label>{}, std::vector<Label>{ lab("a", "1") }).is_infinity());
}

TEST_CASE("maxpos string distance is bounded by positionwise label distances")
{
    MetricSuite maxpos;
    std::mt19937_64 rng(3);
    const char* durations[] = { "1/2", "1", "3/2", "2" };
    for (int i = 0; i < 500; ++i) {
        std::size_t n = rng() % 5;
        std::vector<Label> s, a;
        Extended worst{ 0 };
        for (std::size_t k = 0; k < n; ++k) {
            s.push_back(lab("a", durations[rng() % 4]));
            a.push_back(lab("a", durations[rng() % 4]));
            worst = max(worst, d_sigma(maxpos, s.back(), a.back()));
        }
        CHECK(d_sigma_star(maxpos, s, a) <= worst);
    }
}

TEST_CASE("tau balls")
{
    MetricSuite timed;
    std::vector<Label> alphabet{ lab("a", "1"), lab("a", "3/2"), lab("a", "3"), lab("b", "1") };
    auto ball = tau_ball(timed, alphabet, lab("a", "1"), q("1/2"));
    CHECK(ball == std::vector<Label>{ lab("a", "1"), lab("a", "3/2") });
    std::vector<Label> small{ lab("a", "1"), lab("a", "3/2"), lab("b", "1") };
    CHECK(tau_ball(timed, small, lab("a", "1"), q("3/5")) == std::vector<Label>{ lab("a", "1"), lab("a", "3/2") });
    CHECK(tau_ball(timed, alphabet, Label::empty(), q("10")) == std::vector<Label>{ Label::empty() });
}

TEST_CASE("square root bounds")
{
    auto b = sqrt_bounds(q("2"));
    CHECK(b.lo * b.lo <= 2);
    CHECK(b.hi * b.hi >= 2);
    CHECK(b.hi - b.lo <= ratio(1, 1L << 40));
    auto z = sqrt_bounds(q("0"));
    CHECK(z.lo == 0);
    CHECK_THROWS_AS(sqrt_bounds(q("-1")), Error);
}

TEST_CASE("metric names parse")
{
    CHECK(parse_output_metric("euclid") == OutputMetric::euclid);
    CHECK(parse_label_metric("hybrid") == LabelMetric::hybrid);
    CHECK(parse_string_metric("hybridcat") == StringMetric::hybridcat);
    CHECK(parse_combiner("sum") == Combiner::sum);
    CHECK_THROWS_AS(parse_output_metric("l1"), Error);
    CHECK(to_string(StringMetric::maxpos) == "maxpos");
}
