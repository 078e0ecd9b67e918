#pragma once

#include "omts/extended.hpp"
#include "omts/model.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace omts
{

enum class OutputMetric { sup, euclid };
enum class LabelMetric { timed, hybrid };
enum class StringMetric { maxpos, hybridcat };
enum class Combiner { max, sum };

// Output distances on a product Pi1 x Pi2: the first `split` coordinates belong to Pi1 and
// the component distances are merged with `combine`.
struct ProductLayout
{
    std::size_t split = 0;
    Combiner combine = Combiner::max;
};

// Choice of output metric d_Pi, label pseudo-metric d_Sigma and string pseudo-metric d_Sigma*.
//
// The euclidean output metric works on squared distances so that every comparison stays
// exact: with OutputMetric::euclid, every d_Pi value, every precision eps passed to or
// returned by the algorithms, and every simulation function value is a squared distance.
// Use output_threshold() to square a user eps and sqrt_bounds() to report a value.
struct MetricSuite
{
    OutputMetric d_pi = OutputMetric::sup;
    LabelMetric d_sigma = LabelMetric::timed;
    StringMetric d_sigma_star = StringMetric::maxpos;
    std::optional<ProductLayout> product;
};

OutputMetric parse_output_metric(std::string_view text);   // "sup" | "euclid"
LabelMetric parse_label_metric(std::string_view text);     // "timed" | "hybrid"
StringMetric parse_string_metric(std::string_view text);   // "maxpos" | "hybridcat"
Combiner parse_combiner(std::string_view text);            // "max" | "sum"
std::string to_string(OutputMetric m);
std::string to_string(LabelMetric m);
std::string to_string(StringMetric m);
std::string to_string(Combiner c);

Extended combine(Combiner c, const Extended& a, const Extended& b);

// Throws omts::Error on a dimension mismatch.
Extended d_pi(const MetricSuite& suite, const OutputPoint& p, const OutputPoint& q);

// timed: 0 for (nu,nu); inf if exactly one is nu; |chrono - chrono'| for equal input symbols;
// inf otherwise. hybrid: Hausdorff distance of the chronological domains (input symbols are
// not compared); nu is handled as in timed.
Extended d_sigma(const MetricSuite& suite, const Label& a, const Label& b);

// maxpos: drop nu, inf on a length mismatch, else the positionwise maximum of d_sigma.
// hybridcat: drop nu, concatenate the domains and compare them with the hybrid d_sigma.
Extended d_sigma_star(const MetricSuite& suite, std::span<const Label> s, std::span<const Label> a);

// Alphabet members within tau of sigma, plus nu iff sigma is nu.
std::vector<Label> tau_ball(const MetricSuite& suite, std::span<const Label> alphabet,
                            const Label& sigma, const Rational& tau);

// A user precision in the internal scale of the output metric (squared for euclid).
Extended output_threshold(const MetricSuite& suite, const Extended& eps);

struct SqrtBounds
{
    Rational lo;
    Rational hi;
};

// Rational bounds lo <= sqrt(value) <= hi with hi - lo <= 2^-bits, for value >= 0.
SqrtBounds sqrt_bounds(const Rational& value, unsigned bits = 40);

} // namespace omts
