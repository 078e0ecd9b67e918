#include "omts/hybrid_time.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>

namespace omts
{

Rational hausdorff_interval(const Interval& a, const Interval& b)
{
    if (a.lo > a.hi || b.lo > b.hi)
        throw Error("malformed interval [" + to_string(a.lo) + "," + to_string(a.hi) + "] or [" +
                    to_string(b.lo) + "," + to_string(b.hi) + "]");
    Rational lo = abs(Rational(a.lo - b.lo));
    Rational hi = abs(Rational(a.hi - b.hi));
    return lo < hi ? hi : lo;
}

HybridTimeDomain::HybridTimeDomain(std::vector<Rational> times) : _times{ std::move(times) }
{
    if (_times.size() < 2)
        throw Error("a hybrid time domain needs at least one interval");
    if (_times.front() != 0)
        throw Error("a hybrid time domain must start at t = 0");
    for (std::size_t i = 1; i < _times.size(); ++i)
        if (_times[i] < _times[i - 1])
            throw Error("hybrid time domain times must be nondecreasing");
}

HybridTimeDomain HybridTimeDomain::flow(const Rational& duration)
{
    return HybridTimeDomain{ { Rational{ 0 }, duration } };
}

bool HybridTimeDomain::contains(const Rational& t, std::size_t j) const
{
    return j < jump_count() && _times[j] <= t && t <= _times[j + 1];
}

HybridTimeDomain concat_domains(const HybridTimeDomain& first, const HybridTimeDomain& second)
{
    std::vector<Rational> times = first.times();
    const Rational& shift = first.end_time();
    for (std::size_t i = 1; i < second.times().size(); ++i)
        times.emplace_back(second.times()[i] + shift);
    return HybridTimeDomain{ std::move(times) };
}

HybridTimeDomain domain_of(const Label& label)
{
    if (label.is_empty())
        throw Error("the empty label has no hybrid time domain");
    std::vector<Rational> times{ Rational{ 0 } };
    times.insert(times.end(), label.jumps().begin(), label.jumps().end());
    times.push_back(label.chrono());
    return HybridTimeDomain{ std::move(times) };
}

Label label_with_domain(std::string input, const HybridTimeDomain& domain)
{
    const auto& t = domain.times();
    return Label::timed(std::move(input), t.back(), std::vector<Rational>(t.begin() + 1, t.end() - 1));
}

SampledArc::SampledArc(Samples samples) : _samples{ std::move(samples) }
{
    if (_samples.empty())
        throw Error("a sampled arc needs at least one sample");
    _dimension = _samples.begin()->second.size();
    for (const auto& [p, x] : _samples) {
        if (x.size() != _dimension)
            throw Error("arc samples have inconsistent dimensions");
        if (p.t < 0)
            throw Error("arc sample at negative time " + to_string(p.t));
    }

    std::size_t levels = _samples.rbegin()->first.j + 1;
    std::vector<std::optional<std::pair<Rational, Rational>>> span(levels);
    for (const auto& [p, x] : _samples) {
        auto& s = span[p.j];
        if (!s)
            s = std::pair{ p.t, p.t };
        else {
            if (p.t < s->first)
                s->first = p.t;
            if (p.t > s->second)
                s->second = p.t;
        }
    }
    std::vector<Rational> times{ Rational{ 0 } };
    for (std::size_t j = 0; j < levels; ++j) {
        if (!span[j])
            throw Error("arc has no samples at jump index " + std::to_string(j));
        if (span[j]->first != times.back())
            throw Error("arc samples at jump index " + std::to_string(j) + " start at t = " +
                        to_string(span[j]->first) + ", expected " + to_string(times.back()));
        times.push_back(span[j]->second);
    }
    _domain = HybridTimeDomain{ std::move(times) };
}

SampledArc SampledArc::prefix(const GridPoint& end) const
{
    if (!_samples.contains(end))
        throw Error("prefix end (" + to_string(end.t) + "," + std::to_string(end.j) + ") is not a sample");
    Samples kept;
    for (const auto& [p, x] : _samples)
        if (p.j < end.j || (p.j == end.j && p.t <= end.t))
            kept.emplace(p, x);
    return SampledArc{ std::move(kept) };
}

SampledArc read_arc_csv(std::istream& in)
{
    std::string line;
    SampledArc::Samples samples;
    bool header = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');)
            cells.push_back(cell);
        if (header) {
            header = false;
            if (cells.size() < 2 || cells[0] != "t" || cells[1] != "j")
                throw Error("arc CSV must start with a 't,j,...' header");
            continue;
        }
        if (cells.size() < 3)
            throw Error("arc CSV line " + std::to_string(lineno) + ": expected t,j and at least one value");
        GridPoint p{ parse_rational(cells[0]), 0 };
        Rational j = parse_rational(cells[1]);
        if (j < 0 || j.get_den() != 1)
            throw Error("arc CSV line " + std::to_string(lineno) + ": jump index must be a non-negative integer");
        p.j = j.get_num().get_ui();
        std::vector<Rational> x;
        for (std::size_t i = 2; i < cells.size(); ++i)
            x.push_back(parse_rational(cells[i]));
        if (!samples.emplace(p, std::move(x)).second)
            throw Error("arc CSV line " + std::to_string(lineno) + ": duplicate sample point");
    }
    return SampledArc{ std::move(samples) };
}

bool common_extension(const HybridTimeDomain& a, const HybridTimeDomain& b)
{
    return a.jump_count() == b.jump_count();
}

bool common_extension(const HybridLabel& a, const HybridLabel& b)
{
    return common_extension(a.domain(), b.domain());
}

Extended d_sigma_hybrid(const HybridTimeDomain& a, const HybridTimeDomain& b)
{
    if (!common_extension(a, b))
        return Extended::infinity();
    Rational d{ 0 };
    for (std::size_t j = 0; j < a.jump_count(); ++j) {
        Rational h = hausdorff_interval(a.interval(j), b.interval(j));
        if (h > d)
            d = h;
    }
    return Extended{ d };
}

Extended d_sigma_hybrid(const HybridLabel& a, const HybridLabel& b)
{
    return d_sigma_hybrid(a.domain(), b.domain());
}

namespace
{

std::optional<HybridTimeDomain> concat_all(std::span<const HybridTimeDomain> s)
{
    if (s.empty())
        return std::nullopt;
    HybridTimeDomain acc = s.front();
    for (std::size_t i = 1; i < s.size(); ++i)
        acc = concat_domains(acc, s[i]);
    return acc;
}

} // namespace

Extended d_sigma_star_hybrid(std::span<const HybridTimeDomain> s, std::span<const HybridTimeDomain> a)
{
    auto cs = concat_all(s);
    auto ca = concat_all(a);
    if (!cs || !ca)
        return (!cs && !ca) ? Extended{ 0 } : Extended::infinity();
    return d_sigma_hybrid(*cs, *ca);
}

Extended d_sigma_star_hybrid(std::span<const HybridLabel> s, std::span<const HybridLabel> a)
{
    std::vector<HybridTimeDomain> ds, da;
    for (const auto& l : s)
        ds.push_back(l.domain());
    for (const auto& l : a)
        da.push_back(l.domain());
    return d_sigma_star_hybrid(std::span<const HybridTimeDomain>(ds), std::span<const HybridTimeDomain>(da));
}

namespace
{

std::vector<Rational> snap(const std::vector<Rational>& x, const Rational& step)
{
    std::vector<Rational> out;
    out.reserve(x.size());
    for (const auto& v : x)
        out.emplace_back(floor(Rational(v / step + ratio(1, 2))) * step);
    return out;
}

std::string encode_samples(char tag, const SampledArc::Samples& samples,
                           const std::function<std::vector<Rational>(const std::vector<Rational>&)>& f)
{
    std::string s(1, tag);
    s += "{";
    bool first = true;
    for (const auto& [p, x] : samples) {
        if (!first)
            s += ";";
        first = false;
        s += to_string(p.t) + "@" + std::to_string(p.j) + "=";
        auto y = f(x);
        for (std::size_t i = 0; i < y.size(); ++i)
            s += (i ? "," : "") + to_string(y[i]);
    }
    return s + "}";
}

std::string state_id(const std::vector<Rational>& x)
{
    return to_string(OutputPoint{ x });
}

} // namespace

Omts embed_trajectories(std::span<const TrajectoryPair> pairs, const OutputMap& z, const Rational& grid_step)
{
    if (grid_step <= 0)
        throw Error("grid step must be positive");

    std::set<std::vector<Rational>> values;
    for (const auto& pair : pairs) {
        if (!(pair.state.domain() == pair.input.domain()))
            throw Error("state and input arcs of a solution pair have different domains");
        for (const auto& [p, x] : pair.state.samples()) {
            if (!pair.input.samples().contains(p))
                throw Error("input arc has no sample at (" + to_string(p.t) + "," + std::to_string(p.j) + ")");
            values.insert(snap(x, grid_step));
        }
    }

    Omts omts;
    for (const auto& x : values) {
        omts.states.push_back(state_id(x));
        omts.outputs.emplace(state_id(x), z(x));
    }

    auto identity = [](const std::vector<Rational>& x) { return x; };
    auto output = [&z](const std::vector<Rational>& x) { return z(x).coords; };

    std::set<Label> alphabet;
    std::set<Transition> transitions;
    std::set<StateId> initial;
    for (const auto& pair : pairs) {
        GridPoint origin{ Rational{ 0 }, 0 };
        StateId src = state_id(snap(pair.state.at(origin), grid_step));
        initial.insert(src);
        for (const auto& [p, x] : pair.state.samples()) {
            SampledArc input = pair.input.prefix(p);
            SampledArc state = pair.state.prefix(p);
            Label label = label_with_domain(encode_samples('u', input.samples(), identity), input.domain());
            Label port = label_with_domain(encode_samples('y', state.samples(), output), state.domain());
            alphabet.insert(label);
            alphabet.insert(port);
            transitions.insert({ src, label, state_id(snap(x, grid_step)), port });
        }
    }
    omts.initial.assign(initial.begin(), initial.end());
    omts.alphabet.assign(alphabet.begin(), alphabet.end());
    omts.transitions.assign(transitions.begin(), transitions.end());
    return materialize_empty_loops(std::move(omts));
}

InflatedPrecision inflated_precision(const Rational& tau, const Rational& eps, const Rational& flow_bound)
{
    if (tau < 0 || eps < 0 || flow_bound < 0)
        throw Error("inflated precision needs non-negative tau, eps and flow bound");
    Rational two_tau = 2 * tau;
    return { two_tau, Rational(eps + two_tau * flow_bound) };
}

} // namespace omts
