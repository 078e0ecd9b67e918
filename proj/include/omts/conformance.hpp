#pragma once

#include "omts/extended.hpp"
#include "omts/metrics.hpp"
#include "omts/model.hpp"

#include <optional>
#include <vector>

namespace omts
{

struct Step
{
    Label label;
    std::size_t state;

    friend bool operator==(const Step&, const Step&) = default;
};

// A run q^0 --l_1--> q^1 ... --l_m--> q^m of one system, by state index.
struct Execution
{
    std::size_t start = 0;
    std::vector<Step> steps;

    [[nodiscard]] std::size_t length() const { return steps.size(); }
    [[nodiscard]] std::size_t state(std::size_t i) const { return i == 0 ? start : steps[i - 1].state; }
    // Labels l_1 ... l_i.
    [[nodiscard]] std::vector<Label> prefix(std::size_t i) const;

    friend bool operator==(const Execution&, const Execution&) = default;
};

// All executions from the initial state q0 with at most `depth` non-nu steps and at most
// `nu_budget` nu steps, in lexicographic order of their steps (nu first, then labels, then
// destination ids). Throws if q0 is not initial.
std::vector<Execution> enumerate_executions(const IndexedOmts& t, std::size_t q0, unsigned depth, unsigned nu_budget);

enum class MatchCondition { a, b };

struct MatchFailure
{
    MatchCondition condition;
    std::size_t index; // state index in the run the condition quantifies over
};

// The least eps for which the two runs satisfy both matching conditions with label slack
// tau: for every state q1^i (i >= 1) a partner q2^k whose label prefix is within tau, and
// symmetrically. Infinite when some state has no admissible partner.
Extended match_cost(const IndexedOmts& t1, const Execution& r1, const IndexedOmts& t2, const Execution& r2,
                    const MetricSuite& suite, const Rational& tau);

// First violated condition at precision eps, scanning condition (a) then (b) by index.
std::optional<MatchFailure> first_match_failure(const IndexedOmts& t1, const Execution& r1, const IndexedOmts& t2,
                                                const Execution& r2, const MetricSuite& suite, const Rational& tau,
                                                const Extended& eps);

// How the second system's matching runs are searched. `aligned` is a minimax dynamic program
// that is exact whenever d_Sigma* compares strings position by position (maxpos);
// `exhaustive` scores every candidate run with match_cost.
enum class SearchStrategy { automatic, aligned, exhaustive };

struct ConformanceOptions
{
    Rational tau{ 0 };
    unsigned depth = 1;
    std::optional<unsigned> nu_budget; // defaults to depth
    SearchStrategy strategy = SearchStrategy::automatic;
};

struct Counterexample
{
    StateId t1_start;
    StateId t2_start;
    Execution t1_run;
    std::optional<Execution> t2_closest; // best-scoring run of the second system, if any exists
    Extended closest_cost;
    MatchFailure failure;
};

struct ConformanceVerdict
{
    bool holds = false;
    Rational tau;
    Extended eps;
    unsigned depth = 0;
    unsigned nu_budget = 0;
    std::optional<Counterexample> counterexample;
};

// Depth-bounded check that t2 conforms to t1 with precision (tau, eps) and derivation
// relation d. Runs of the first system are considered up to nu-stuttering: nu steps after the
// first transition only repeat a state with an unchanged stripped prefix, so each class is
// represented by its nu-free run, preceded by one nu step when the budget allows it (which
// makes the initial state a matched state). Matching runs of the second system are nu-free
// for the same reason. The reported counterexample is the first failing representative in
// lexicographic order. Throws if d is empty or names non-initial states.
ConformanceVerdict check_conformance(const IndexedOmts& t1, const IndexedOmts& t2, const DerivationRelation& d,
                                     const MetricSuite& suite, const Extended& eps, const ConformanceOptions& options);

// sup over first-system runs of min over second-system runs of match_cost, maximized over d.
Extended conformance_degree(const IndexedOmts& t1, const IndexedOmts& t2, const DerivationRelation& d,
                            const MetricSuite& suite, const ConformanceOptions& options);

// {0, inf} together with every pairwise output distance, ascending.
std::vector<Extended> degree_candidates(const IndexedOmts& t1, const IndexedOmts& t2, const MetricSuite& suite);

// max over d of the initial output distance; a lower bound on any precision whose matching
// includes the initial states.
Extended initial_pair_bound(const IndexedOmts& t1, const IndexedOmts& t2, const DerivationRelation& d,
                            const MetricSuite& suite);

} // namespace omts
