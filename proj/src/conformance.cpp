#include "omts/conformance.hpp"

#include <algorithm>
#include <set>

namespace omts
{

std::vector<Label> Execution::prefix(std::size_t i) const
{
    std::vector<Label> labels;
    labels.reserve(i);
    for (std::size_t k = 0; k < i; ++k)
        labels.push_back(steps[k].label);
    return labels;
}

namespace
{

bool duplicate_of_previous(std::span<const IndexedOmts::Edge> edges, std::size_t i)
{
    return i > 0 && edges[i].label == edges[i - 1].label && edges[i].dst == edges[i - 1].dst;
}

void enumerate_from(const IndexedOmts& t, Execution& run, std::size_t q, unsigned depth, unsigned nu_budget,
                    unsigned used, unsigned nu_used, std::vector<Execution>& out)
{
    out.push_back(run);
    auto edges = t.outgoing(q);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (duplicate_of_previous(edges, i))
            continue;
        const auto& e = edges[i];
        bool nu = t.label(e).is_empty();
        if (nu ? nu_used >= nu_budget : used >= depth)
            continue;
        run.steps.push_back({ t.label(e), e.dst });
        enumerate_from(t, run, e.dst, depth, nu_budget, used + (nu ? 0 : 1), nu_used + (nu ? 1 : 0), out);
        run.steps.pop_back();
    }
}

// Label prefixes and pairwise admissibility of two runs.
struct Alignment
{
    std::vector<std::vector<char>> admissible; // [i][k]: prefix distance within tau

    Alignment(const Execution& r1, const Execution& r2, const MetricSuite& suite, const Rational& tau)
    {
        Extended radius{ tau };
        std::vector<std::vector<Label>> p1, p2;
        for (std::size_t i = 0; i <= r1.length(); ++i)
            p1.push_back(r1.prefix(i));
        for (std::size_t k = 0; k <= r2.length(); ++k)
            p2.push_back(r2.prefix(k));
        admissible.assign(p1.size(), std::vector<char>(p2.size(), 0));
        for (std::size_t i = 0; i < p1.size(); ++i)
            for (std::size_t k = 0; k < p2.size(); ++k)
                admissible[i][k] = d_sigma_star(suite, p1[i], p2[k]) <= radius ? 1 : 0;
    }
};

// Per-index best partner distances for condition (a) (side_a = true) or (b).
std::vector<Extended> partner_costs(const IndexedOmts& t1, const Execution& r1, const IndexedOmts& t2,
                                    const Execution& r2, const MetricSuite& suite, const Alignment& al, bool side_a)
{
    std::size_t outer = side_a ? r1.length() : r2.length();
    std::size_t inner = side_a ? r2.length() : r1.length();
    std::vector<Extended> costs;
    for (std::size_t i = 1; i <= outer; ++i) {
        Extended best = Extended::infinity();
        for (std::size_t k = 0; k <= inner; ++k) {
            bool ok = side_a ? al.admissible[i][k] : al.admissible[k][i];
            if (!ok)
                continue;
            const auto& p = t1.output(side_a ? r1.state(i) : r1.state(k));
            const auto& q = t2.output(side_a ? r2.state(k) : r2.state(i));
            best = min(best, d_pi(suite, p, q));
        }
        costs.push_back(best);
    }
    return costs;
}

struct ResolvedPair
{
    std::size_t q1;
    std::size_t q2;
};

std::vector<ResolvedPair> resolve(const IndexedOmts& t1, const IndexedOmts& t2, const DerivationRelation& d)
{
    if (d.pairs.empty())
        throw Error("derivation relation is empty");
    std::set<std::pair<StateId, StateId>> sorted(d.pairs.begin(), d.pairs.end());
    std::vector<ResolvedPair> out;
    for (const auto& [a, b] : sorted) {
        auto q1 = t1.find(a);
        auto q2 = t2.find(b);
        if (!q1 || !t1.is_initial(*q1))
            throw Error("derivation relation names '" + a + "', which is not an initial state of the first system");
        if (!q2 || !t2.is_initial(*q2))
            throw Error("derivation relation names '" + b + "', which is not an initial state of the second system");
        out.push_back({ *q1, *q2 });
    }
    return out;
}

class RunSearch
{
public:
    RunSearch(const IndexedOmts& t1, const IndexedOmts& t2, const MetricSuite& suite, const ConformanceOptions& opt)
        : _t1{ t1 }, _t2{ t2 }, _suite{ suite }, _tau{ opt.tau }, _depth{ opt.depth }
    {
        if (t1.output_dimension() != t2.output_dimension() && t1.size() > 0 && t2.size() > 0)
            throw Error("the two systems have different output dimensions");
        if (opt.tau < 0)
            throw Error("tau must be non-negative");
        _nu_budget = opt.nu_budget.value_or(opt.depth);
        _leading_nu = _nu_budget >= 1;
        _aligned = opt.strategy == SearchStrategy::aligned ||
                   (opt.strategy == SearchStrategy::automatic && suite.d_sigma_star == StringMetric::maxpos);
        if (_aligned && suite.d_sigma_star != StringMetric::maxpos)
            throw Error("the aligned search is exact only for the maxpos string metric");

        _dist.assign(t1.size(), std::vector<Extended>(t2.size()));
        for (std::size_t a = 0; a < t1.size(); ++a)
            for (std::size_t b = 0; b < t2.size(); ++b)
                _dist[a][b] = d_pi(suite, t1.output(a), t2.output(b));

        Extended radius{ _tau };
        _compat.assign(t1.labels().size(), std::vector<char>(t2.labels().size(), 0));
        for (std::size_t a = 0; a < t1.labels().size(); ++a)
            for (std::size_t b = 0; b < t2.labels().size(); ++b)
                _compat[a][b] = d_sigma(suite, t1.labels()[a], t2.labels()[b]) <= radius ? 1 : 0;
    }

    [[nodiscard]] unsigned nu_budget() const { return _nu_budget; }

    // Calls visit(run, cost) for every representative run from q1 in lexicographic order, where
    // cost is the best match_cost over second-system runs from q2. Stops when visit returns false.
    template <class Visit>
    bool search(std::size_t q1, std::size_t q2, Visit&& visit)
    {
        Execution run{ q1, {} };
        if (_leading_nu)
            run.steps.push_back({ Label::empty(), q1 });
        if (_aligned) {
            std::vector<Extended> best(_t2.size(), Extended::infinity());
            best[q2] = _leading_nu ? _dist[q1][q2] : Extended{ 0 };
            return aligned_dfs(run, q1, 0, best, visit);
        }
        _candidates.clear();
        Execution r2{ q2, {} };
        collect_nu_free(_t2, r2, q2, 0, _candidates);
        return exhaustive_dfs(run, q1, 0, visit);
    }

    // The best-scoring second-system run for r1 from q2, with its cost.
    std::pair<std::optional<Execution>, Extended> closest(const Execution& r1, std::size_t q2)
    {
        if (!_aligned) {
            _candidates.clear();
            Execution r2{ q2, {} };
            collect_nu_free(_t2, r2, q2, 0, _candidates);
            std::optional<Execution> best_run;
            Extended best = Extended::infinity();
            for (const auto& r2c : _candidates) {
                Extended c = match_cost(_t1, r1, _t2, r2c, _suite, _tau);
                if (!best_run || c < best) {
                    best = c;
                    best_run = r2c;
                }
            }
            return { best_run, best };
        }

        // Minimax over aligned second-system paths, keeping parents per level.
        std::size_t first = (!r1.steps.empty() && r1.steps[0].label.is_empty()) ? 1 : 0;
        std::size_t q1 = r1.start;
        std::vector<std::vector<Extended>> level;
        std::vector<std::vector<std::pair<std::size_t, std::size_t>>> parent; // (state, edge)
        level.emplace_back(_t2.size(), Extended::infinity());
        level[0][q2] = first == 1 ? _dist[q1][q2] : Extended{ 0 };
        parent.emplace_back(_t2.size(), std::pair{ std::size_t(-1), std::size_t(-1) });
        for (std::size_t s = first; s < r1.steps.size(); ++s) {
            const auto& step = r1.steps[s];
            std::size_t l1 = label_index(_t1, step.label);
            std::vector<Extended> next(_t2.size(), Extended::infinity());
            std::vector<std::pair<std::size_t, std::size_t>> par(_t2.size(), { std::size_t(-1), std::size_t(-1) });
            const auto& cur = level.back();
            for (std::size_t b = 0; b < _t2.size(); ++b) {
                if (cur[b].is_infinity())
                    continue;
                auto edges = _t2.outgoing(b);
                for (std::size_t k = 0; k < edges.size(); ++k) {
                    const auto& e2 = edges[k];
                    if (_t2.label(e2).is_empty() || !_compat[l1][e2.label])
                        continue;
                    Extended v = max(cur[b], _dist[step.state][e2.dst]);
                    if (v < next[e2.dst]) {
                        next[e2.dst] = v;
                        par[e2.dst] = { b, k };
                    }
                }
            }
            level.push_back(std::move(next));
            parent.push_back(std::move(par));
        }

        std::size_t depth = level.size() - 1;
        while (depth > 0 && std::all_of(level[depth].begin(), level[depth].end(),
                                        [](const Extended& v) { return v.is_infinity(); }))
            --depth;
        std::size_t end = static_cast<std::size_t>(
            std::min_element(level[depth].begin(), level[depth].end()) - level[depth].begin());
        std::vector<Step> rev;
        std::size_t at = end;
        for (std::size_t l = depth; l > 0; --l) {
            auto [prev, k] = parent[l][at];
            rev.push_back({ _t2.label(_t2.outgoing(prev)[k]), at });
            at = prev;
        }
        Execution r2{ q2, { rev.rbegin(), rev.rend() } };
        return { r2, match_cost(_t1, r1, _t2, r2, _suite, _tau) };
    }

private:
    static std::size_t label_index(const IndexedOmts& t, const Label& l)
    {
        auto it = std::lower_bound(t.labels().begin(), t.labels().end(), l);
        return static_cast<std::size_t>(it - t.labels().begin());
    }

    void collect_nu_free(const IndexedOmts& t, Execution& run, std::size_t q, unsigned used,
                         std::vector<Execution>& out) const
    {
        out.push_back(run);
        if (used >= _depth)
            return;
        auto edges = t.outgoing(q);
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (duplicate_of_previous(edges, i) || t.label(edges[i]).is_empty())
                continue;
            run.steps.push_back({ t.label(edges[i]), edges[i].dst });
            collect_nu_free(t, run, edges[i].dst, used + 1, out);
            run.steps.pop_back();
        }
    }

    template <class Visit>
    bool aligned_dfs(Execution& run, std::size_t q1, unsigned used, const std::vector<Extended>& best, Visit& visit)
    {
        if (!visit(static_cast<const Execution&>(run), *std::min_element(best.begin(), best.end())))
            return false;
        if (used >= _depth)
            return true;
        auto edges = _t1.outgoing(q1);
        std::vector<Extended> next(_t2.size());
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const auto& e = edges[i];
            if (duplicate_of_previous(edges, i) || _t1.label(e).is_empty())
                continue;
            std::fill(next.begin(), next.end(), Extended::infinity());
            for (std::size_t b = 0; b < _t2.size(); ++b) {
                if (best[b].is_infinity())
                    continue;
                for (const auto& e2 : _t2.outgoing(b)) {
                    if (_t2.label(e2).is_empty() || !_compat[e.label][e2.label])
                        continue;
                    Extended v = max(best[b], _dist[e.dst][e2.dst]);
                    if (v < next[e2.dst])
                        next[e2.dst] = std::move(v);
                }
            }
            run.steps.push_back({ _t1.label(e), e.dst });
            bool go_on = aligned_dfs(run, e.dst, used + 1, std::vector<Extended>(next), visit);
            run.steps.pop_back();
            if (!go_on)
                return false;
        }
        return true;
    }

    template <class Visit>
    bool exhaustive_dfs(Execution& run, std::size_t q1, unsigned used, Visit& visit)
    {
        Extended best = Extended::infinity();
        for (const auto& r2 : _candidates) {
            best = min(best, match_cost(_t1, run, _t2, r2, _suite, _tau));
            if (best == Extended{ 0 })
                break;
        }
        if (!visit(static_cast<const Execution&>(run), best))
            return false;
        if (used >= _depth)
            return true;
        auto edges = _t1.outgoing(q1);
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const auto& e = edges[i];
            if (duplicate_of_previous(edges, i) || _t1.label(e).is_empty())
                continue;
            run.steps.push_back({ _t1.label(e), e.dst });
            bool go_on = exhaustive_dfs(run, e.dst, used + 1, visit);
            run.steps.pop_back();
            if (!go_on)
                return false;
        }
        return true;
    }

    const IndexedOmts& _t1;
    const IndexedOmts& _t2;
    const MetricSuite& _suite;
    Rational _tau;
    unsigned _depth;
    unsigned _nu_budget = 0;
    bool _leading_nu = false;
    bool _aligned = true;
    std::vector<std::vector<Extended>> _dist;
    std::vector<std::vector<char>> _compat;
    std::vector<Execution> _candidates;
};

} // namespace

std::vector<Execution> enumerate_executions(const IndexedOmts& t, std::size_t q0, unsigned depth, unsigned nu_budget)
{
    if (q0 >= t.size() || !t.is_initial(q0))
        throw Error("executions must start from an initial state");
    std::vector<Execution> out;
    Execution run{ q0, {} };
    enumerate_from(t, run, q0, depth, nu_budget, 0, 0, out);
    return out;
}

Extended match_cost(const IndexedOmts& t1, const Execution& r1, const IndexedOmts& t2, const Execution& r2,
                    const MetricSuite& suite, const Rational& tau)
{
    Alignment al(r1, r2, suite, tau);
    Extended cost{ 0 };
    for (bool side_a : { true, false })
        for (const auto& c : partner_costs(t1, r1, t2, r2, suite, al, side_a))
            cost = max(cost, c);
    return cost;
}

std::optional<MatchFailure> first_match_failure(const IndexedOmts& t1, const Execution& r1, const IndexedOmts& t2,
                                                const Execution& r2, const MetricSuite& suite, const Rational& tau,
                                                const Extended& eps)
{
    Alignment al(r1, r2, suite, tau);
    for (bool side_a : { true, false }) {
        auto costs = partner_costs(t1, r1, t2, r2, suite, al, side_a);
        for (std::size_t i = 0; i < costs.size(); ++i)
            if (costs[i] > eps)
                return MatchFailure{ side_a ? MatchCondition::a : MatchCondition::b, i + 1 };
    }
    return std::nullopt;
}

ConformanceVerdict check_conformance(const IndexedOmts& t1, const IndexedOmts& t2, const DerivationRelation& d,
                                     const MetricSuite& suite, const Extended& eps, const ConformanceOptions& options)
{
    auto pairs = resolve(t1, t2, d);
    RunSearch search(t1, t2, suite, options);

    ConformanceVerdict verdict;
    verdict.tau = options.tau;
    verdict.eps = eps;
    verdict.depth = options.depth;
    verdict.nu_budget = search.nu_budget();
    verdict.holds = true;

    for (const auto& [q1, q2] : pairs) {
        std::optional<Execution> failing;
        search.search(q1, q2, [&](const Execution& run, const Extended& cost) {
            if (cost <= eps)
                return true;
            failing = run;
            return false;
        });
        if (!failing)
            continue;
        auto [closest, cost] = search.closest(*failing, q2);
        MatchFailure failure{ MatchCondition::a, 1 };
        if (closest)
            if (auto f = first_match_failure(t1, *failing, t2, *closest, suite, options.tau, eps))
                failure = *f;
        verdict.holds = false;
        verdict.counterexample = Counterexample{ t1.name(q1), t2.name(q2), *failing, closest, cost, failure };
        break;
    }
    return verdict;
}

Extended conformance_degree(const IndexedOmts& t1, const IndexedOmts& t2, const DerivationRelation& d,
                            const MetricSuite& suite, const ConformanceOptions& options)
{
    auto pairs = resolve(t1, t2, d);
    RunSearch search(t1, t2, suite, options);
    Extended degree{ 0 };
    for (const auto& [q1, q2] : pairs) {
        search.search(q1, q2, [&](const Execution&, const Extended& cost) {
            degree = max(degree, cost);
            return !degree.is_infinity();
        });
        if (degree.is_infinity())
            break;
    }
    return degree;
}

std::vector<Extended> degree_candidates(const IndexedOmts& t1, const IndexedOmts& t2, const MetricSuite& suite)
{
    std::set<Extended> values{ Extended{ 0 }, Extended::infinity() };
    for (std::size_t a = 0; a < t1.size(); ++a)
        for (std::size_t b = 0; b < t2.size(); ++b)
            values.insert(d_pi(suite, t1.output(a), t2.output(b)));
    return { values.begin(), values.end() };
}

Extended initial_pair_bound(const IndexedOmts& t1, const IndexedOmts& t2, const DerivationRelation& d,
                            const MetricSuite& suite)
{
    Extended bound = Extended::negative_infinity();
    for (const auto& [q1, q2] : resolve(t1, t2, d))
        bound = max(bound, d_pi(suite, t1.output(q1), t2.output(q2)));
    return bound;
}

} // namespace omts
