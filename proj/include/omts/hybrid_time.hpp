#pragma once

#include "omts/extended.hpp"
#include "omts/model.hpp"

#include <functional>
#include <istream>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace omts
{

struct Interval
{
    Rational lo;
    Rational hi;

    friend bool operator==(const Interval&, const Interval&) = default;
};

// Symmetric Hausdorff distance of two closed intervals: max(|a-c|, |b-d|).
Rational hausdorff_interval(const Interval& a, const Interval& b);

// A compact hybrid time domain E = U_{j<J} [t_j, t_{j+1}] x {j}, stored as the times
// 0 = t_0 <= t_1 <= ... <= t_J. J is the number of intervals and is at least 1.
class HybridTimeDomain
{
public:
    explicit HybridTimeDomain(std::vector<Rational> times);

    // The single-interval domain [0, duration] x {0}.
    static HybridTimeDomain flow(const Rational& duration);

    [[nodiscard]] std::size_t jump_count() const { return _times.size() - 1; }
    [[nodiscard]] Interval interval(std::size_t j) const { return { _times[j], _times[j + 1] }; }
    [[nodiscard]] const Rational& end_time() const { return _times.back(); }
    [[nodiscard]] const std::vector<Rational>& times() const { return _times; }
    [[nodiscard]] bool contains(const Rational& t, std::size_t j) const;

    friend bool operator==(const HybridTimeDomain&, const HybridTimeDomain&) = default;

private:
    std::vector<Rational> _times;
};

HybridTimeDomain concat_domains(const HybridTimeDomain& first, const HybridTimeDomain& second);

// Chronological component of a timed label read as a hybrid time domain.
HybridTimeDomain domain_of(const Label& label);

// Hybrid time domain rendered back into a label's chronological component.
Label label_with_domain(std::string input, const HybridTimeDomain& domain);

struct GridPoint
{
    Rational t;
    std::size_t j = 0;

    friend bool operator==(const GridPoint&, const GridPoint&) = default;
    friend bool operator<(const GridPoint& a, const GridPoint& b)
    {
        return a.j != b.j ? a.j < b.j : a.t < b.t;
    }
};

// A hybrid arc sampled on a grid of its domain.
class SampledArc
{
public:
    using Samples = std::map<GridPoint, std::vector<Rational>>;

    // The domain is inferred from the samples: jump levels 0..J-1 must all be present, level j
    // spans [min t, max t], level 0 starts at 0 and each level starts where the previous ended.
    explicit SampledArc(Samples samples);

    [[nodiscard]] const HybridTimeDomain& domain() const { return _domain; }
    [[nodiscard]] const Samples& samples() const { return _samples; }
    [[nodiscard]] std::size_t dimension() const { return _dimension; }
    [[nodiscard]] const std::vector<Rational>& at(const GridPoint& p) const { return _samples.at(p); }

    // The arc restricted to the samples of its domain up to and including `end`.
    [[nodiscard]] SampledArc prefix(const GridPoint& end) const;

private:
    Samples _samples;
    HybridTimeDomain _domain{ { Rational{ 0 }, Rational{ 0 } } };
    std::size_t _dimension = 0;
};

// Reads "t,j,x1,...,xn" rows with a header line.
SampledArc read_arc_csv(std::istream& in);

struct HybridLabel
{
    SampledArc arc;

    [[nodiscard]] const HybridTimeDomain& domain() const { return arc.domain(); }
};

// Both domains start at (0,0) by construction, so a common extension exists iff the jump
// counts agree.
bool common_extension(const HybridTimeDomain& a, const HybridTimeDomain& b);
bool common_extension(const HybridLabel& a, const HybridLabel& b);

Extended d_sigma_hybrid(const HybridTimeDomain& a, const HybridTimeDomain& b);
Extended d_sigma_hybrid(const HybridLabel& a, const HybridLabel& b);

// Concatenates the domains of each sequence and compares the results. Two empty sequences
// are at distance 0; an empty and a non-empty one at infinity.
Extended d_sigma_star_hybrid(std::span<const HybridTimeDomain> s, std::span<const HybridTimeDomain> a);
Extended d_sigma_star_hybrid(std::span<const HybridLabel> s, std::span<const HybridLabel> a);

struct TrajectoryPair
{
    SampledArc state;
    SampledArc input;
};

using OutputMap = std::function<OutputPoint(const std::vector<Rational>&)>;

// Builds the OMTS of a finite set of sampled solution pairs. States are the distinct state
// samples snapped to multiples of `grid_step`; from x(0,0) there is one transition to x(t,j)
// for every grid point, labelled by the input arc up to (t,j) and with the output arc over
// the same prefix as its port. Empty self-loops are materialized.
Omts embed_trajectories(std::span<const TrajectoryPair> pairs, const OutputMap& z, const Rational& grid_step);

struct InflatedPrecision
{
    Rational tau;
    Rational eps;
};

// (2 tau, eps + 2 tau L) for a flow-map norm bound L.
InflatedPrecision inflated_precision(const Rational& tau, const Rational& eps, const Rational& flow_bound);

} // namespace omts
