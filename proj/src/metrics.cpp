#include "omts/metrics.hpp"

#include "omts/hybrid_time.hpp"

namespace omts
{

OutputMetric parse_output_metric(std::string_view text)
{
    if (text == "sup")
        return OutputMetric::sup;
    if (text == "euclid")
        return OutputMetric::euclid;
    throw Error("unknown output metric '" + std::string(text) + "' (expected sup or euclid)");
}

LabelMetric parse_label_metric(std::string_view text)
{
    if (text == "timed")
        return LabelMetric::timed;
    if (text == "hybrid")
        return LabelMetric::hybrid;
    throw Error("unknown label metric '" + std::string(text) + "' (expected timed or hybrid)");
}

StringMetric parse_string_metric(std::string_view text)
{
    if (text == "maxpos")
        return StringMetric::maxpos;
    if (text == "hybridcat")
        return StringMetric::hybridcat;
    throw Error("unknown string metric '" + std::string(text) + "' (expected maxpos or hybridcat)");
}

Combiner parse_combiner(std::string_view text)
{
    if (text == "max")
        return Combiner::max;
    if (text == "sum")
        return Combiner::sum;
    throw Error("unknown combiner '" + std::string(text) + "' (expected max or sum)");
}

std::string to_string(OutputMetric m) { return m == OutputMetric::sup ? "sup" : "euclid"; }
std::string to_string(LabelMetric m) { return m == LabelMetric::timed ? "timed" : "hybrid"; }
std::string to_string(StringMetric m) { return m == StringMetric::maxpos ? "maxpos" : "hybridcat"; }
std::string to_string(Combiner c) { return c == Combiner::max ? "max" : "sum"; }

Extended combine(Combiner c, const Extended& a, const Extended& b)
{
    return c == Combiner::max ? max(a, b) : a + b;
}

namespace
{

Rational block_distance(OutputMetric m, std::span<const Rational> p, std::span<const Rational> q)
{
    Rational d{ 0 };
    for (std::size_t i = 0; i < p.size(); ++i) {
        Rational diff = p[i] - q[i];
        if (m == OutputMetric::sup) {
            diff = abs(diff);
            if (diff > d)
                d = diff;
        } else {
            d += diff * diff;
        }
    }
    return d;
}

} // namespace

Extended d_pi(const MetricSuite& suite, const OutputPoint& p, const OutputPoint& q)
{
    if (p.dimension() != q.dimension())
        throw Error("output dimension mismatch: " + std::to_string(p.dimension()) + " vs " +
                    std::to_string(q.dimension()));
    std::span<const Rational> a(p.coords), b(q.coords);
    if (!suite.product)
        return Extended{ block_distance(suite.d_pi, a, b) };
    std::size_t split = suite.product->split;
    if (split > a.size())
        throw Error("product output split exceeds the output dimension");
    if (suite.d_pi == OutputMetric::euclid && suite.product->combine == Combiner::sum)
        throw Error("the euclidean output metric supports only the max combiner on products");
    return combine(suite.product->combine,
                   Extended{ block_distance(suite.d_pi, a.first(split), b.first(split)) },
                   Extended{ block_distance(suite.d_pi, a.subspan(split), b.subspan(split)) });
}

Extended d_sigma(const MetricSuite& suite, const Label& a, const Label& b)
{
    if (a.is_empty() || b.is_empty())
        return (a.is_empty() && b.is_empty()) ? Extended{ 0 } : Extended::infinity();
    if (suite.d_sigma == LabelMetric::hybrid)
        return d_sigma_hybrid(domain_of(a), domain_of(b));
    if (a.input() != b.input())
        return Extended::infinity();
    return Extended{ abs(Rational(a.chrono() - b.chrono())) };
}

Extended d_sigma_star(const MetricSuite& suite, std::span<const Label> s, std::span<const Label> a)
{
    std::vector<const Label*> xs, ys;
    for (const auto& l : s)
        if (!l.is_empty())
            xs.push_back(&l);
    for (const auto& l : a)
        if (!l.is_empty())
            ys.push_back(&l);

    if (suite.d_sigma_star == StringMetric::maxpos) {
        if (xs.size() != ys.size())
            return Extended::infinity();
        Extended d{ 0 };
        for (std::size_t i = 0; i < xs.size(); ++i) {
            d = max(d, d_sigma(suite, *xs[i], *ys[i]));
            if (d.is_infinity())
                break;
        }
        return d;
    }

    std::vector<HybridTimeDomain> ds, da;
    for (const auto* l : xs)
        ds.push_back(domain_of(*l));
    for (const auto* l : ys)
        da.push_back(domain_of(*l));
    return d_sigma_star_hybrid(std::span<const HybridTimeDomain>(ds), std::span<const HybridTimeDomain>(da));
}

std::vector<Label> tau_ball(const MetricSuite& suite, std::span<const Label> alphabet,
                            const Label& sigma, const Rational& tau)
{
    std::vector<Label> ball;
    if (sigma.is_empty()) {
        ball.push_back(sigma);
        return ball;
    }
    Extended radius{ tau };
    for (const auto& l : alphabet)
        if (d_sigma(suite, sigma, l) <= radius)
            ball.push_back(l);
    return ball;
}

Extended output_threshold(const MetricSuite& suite, const Extended& eps)
{
    if (suite.d_pi == OutputMetric::sup || !eps.is_finite())
        return eps;
    if (eps.value() < 0)
        return eps;
    return Extended{ Rational(eps.value() * eps.value()) };
}

SqrtBounds sqrt_bounds(const Rational& value, unsigned bits)
{
    if (value < 0)
        throw Error("square root of a negative value");
    Rational lo{ 0 };
    Rational hi = value > 1 ? value : Rational{ 1 };
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, bits);
    Rational target(mpz_class(1), scale);
    while (hi - lo > target) {
        Rational mid = (lo + hi) / 2;
        if (mid * mid <= value)
            lo = mid;
        else
            hi = mid;
    }
    return { lo, hi };
}

} // namespace omts
