#pragma once

#include "omts/extended.hpp"
#include "omts/metrics.hpp"
#include "omts/model.hpp"
#include "omts/stas.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace omts
{

using LabelPair = std::pair<Label, Label>;
using TransitionPair = std::pair<Transition, Transition>;

// Feedback interconnection of two systems. Product states are named "q1|q2" and listed with
// the first component varying slowest; outputs are concatenated, so the first `split`
// output coordinates belong to the first component.
struct ComposedOmts
{
    Omts system;
    std::vector<StatePair> components; // aligned with system.states
    std::size_t split = 0;
    std::vector<Label> chrono_alphabet;
    std::set<LabelPair> lifted;
    std::map<Transition, std::vector<TransitionPair>> provenance;
};

std::string product_state_name(const StateId& a, const StateId& b);

// Admits (q1,q2) --chi--> (q1',q2') for each pair of non-nu component transitions with equal
// chronological components whose ports cross-match the other label exactly. Pairs of empty
// self-loops give the product's empty self-loops. Throws if product names collide.
ComposedOmts compose(const Omts& t1, const Omts& t2);

// Label pairs witnessed by admitted product transitions.
std::set<LabelPair> lift_labels(const Omts& t1, const Omts& t2);

// Output metrics of a product built with `combine` for the component distances.
MetricSuite product_suite(const MetricSuite& suite, std::size_t split, Combiner combine);

// Pointwise h(V13(q1,q3), V24(q2,q4)) on product state names, at tau = min of the two taus.
SimFunctionTable compose_sim_function(const SimFunctionTable& v13, const SimFunctionTable& v24, Combiner h);

// inf V / sup V over all pairs, with 0 when only the sup is infinite and 1 for V == 0, for an
// all-infinite V and for an empty table.
Rational compute_k(const SimFunctionTable& v);

// g(x) = c x, gamma_i(x) = k_i x.
struct GainSpec
{
    Combiner h = Combiner::max;
    Rational c{ 1 };
    Rational k1{ 1 };
    Rational k2{ 1 };
    Combiner h_tilde = Combiner::max;
};

// Throws when c < 1 or a slope lies outside [0, 1].
void validate_gain_spec(const GainSpec& spec);

bool check_sgc(const GainSpec& spec);

struct DistributivityCheck
{
    bool holds = true;
    bool analytic = true;
    std::string note;
    std::optional<std::pair<Rational, Rational>> counterexample;
};

// g(h(x, y)) == h(g(x), g(y)). Exact for the linear family with max or sum.
DistributivityCheck check_distributivity(const GainSpec& spec);

// Sampled check of the same identity for an arbitrary g over `samples` random pairs.
DistributivityCheck check_distributivity_sampled(Combiner h, const std::function<Rational(const Rational&)>& g,
                                                 unsigned samples, std::uint64_t seed);

struct HypothesisCheck
{
    bool passed = true;
    std::vector<std::string> witnesses;
};

// Inputs shared by the exhaustive small-gain checks.
struct GainInstance
{
    const IndexedOmts& t1;
    const IndexedOmts& t2;
    const IndexedOmts& t3;
    const IndexedOmts& t4;
    const SimFunctionTable& v13;
    const SimFunctionTable& v24;
    const MetricSuite& suite;
    Rational tau13;
    Rational tau24;
};

// At every pair ((q1,q2),(q3,q4)): the sup over all pairs of non-nu component moves of
// h(lower V13, lower V24) is at least g of the same sup restricted to label pairs in sigma12.
// The lower values are infima of V over the successors reachable by labels within the
// component tau of the played label (infinite when there is none).
HypothesisCheck check_g_condition(const GainInstance& in, const GainSpec& spec, const std::set<LabelPair>& sigma12);

// For every pair in sigma12, every (q3,q4) and every (q1',q2'): lower V13 >= k1 times the
// infimum of V13 over q3 moves whose label is the first component of a sigma34 pair with
// chronological component within tau of sigma1's, and symmetrically for V24.
HypothesisCheck check_gamma_conditions(const GainInstance& in, const GainSpec& spec,
                                       const std::set<LabelPair>& sigma12, const std::set<LabelPair>& sigma34,
                                       const Rational& tau);

struct SmallGainCertificate
{
    Rational tau;
    GainSpec spec;
    HypothesisCheck output_bound;
    DistributivityCheck distributivity;
    bool sgc = false;
    HypothesisCheck g_condition;
    HypothesisCheck gamma;
    SimFunctionCheck conclusion;
    Extended precision12;   // precision of the composed function
    Extended precision_bound; // h of the component precisions

    [[nodiscard]] bool hypotheses_hold() const
    {
        return output_bound.passed && distributivity.holds && sgc && g_condition.passed && gamma.passed;
    }
};

// Runs every hypothesis check and then verifies the composed function on the composed systems
// regardless of their outcome. Throws when V13 or V24 is not a simulation function of its pair.
SmallGainCertificate verify_small_gain(const Omts& t1, const Omts& t2, const Omts& t3, const Omts& t4,
                                       const SimFunctionTable& v13, const SimFunctionTable& v24,
                                       const MetricSuite& suite, const GainSpec& spec, const Rational& tau13,
                                       const Rational& tau24);

Extended composed_precision(const Extended& eps13, const Extended& eps24, Combiner h);

} // namespace omts
