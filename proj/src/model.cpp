#include "omts/model.hpp"

#include <algorithm>

namespace omts
{

namespace
{

std::strong_ordering compare(const Rational& a, const Rational& b)
{
    int c = cmp(a, b);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

bool well_formed_chrono(const Label& l)
{
    if (l.is_empty())
        return true;
    if (l.chrono() < 0)
        return false;
    Rational prev{ 0 };
    for (const auto& t : l.jumps()) {
        if (t < prev || t > l.chrono())
            return false;
        prev = t;
    }
    return true;
}

} // namespace

Label Label::timed(std::string input, Rational chrono, std::vector<Rational> jumps)
{
    Label l;
    l._empty = false;
    l._input = std::move(input);
    l._chrono = std::move(chrono);
    l._jumps = std::move(jumps);
    return l;
}

bool operator==(const Label& a, const Label& b)
{
    return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Label& a, const Label& b)
{
    if (a._empty || b._empty)
        return b._empty <=> a._empty; // nu sorts first
    if (auto c = a._input <=> b._input; c != 0)
        return c;
    if (auto c = compare(a._chrono, b._chrono); c != 0)
        return c;
    std::size_t n = std::min(a._jumps.size(), b._jumps.size());
    for (std::size_t i = 0; i < n; ++i)
        if (auto c = compare(a._jumps[i], b._jumps[i]); c != 0)
            return c;
    return a._jumps.size() <=> b._jumps.size();
}

std::string to_string(const Label& label)
{
    if (label.is_empty())
        return "nu";
    std::string s = "(" + label.input() + "," + to_string(label.chrono());
    for (std::size_t i = 0; i < label.jumps().size(); ++i)
        s += (i == 0 ? ";" : ",") + to_string(label.jumps()[i]);
    return s + ")";
}

bool same_chrono(const Label& a, const Label& b)
{
    return !a.is_empty() && !b.is_empty() && a.chrono() == b.chrono() && a.jumps() == b.jumps();
}

Label chrono_part(const Label& label)
{
    if (label.is_empty())
        return label;
    return Label::timed("", label.chrono(), label.jumps());
}

std::string to_string(const OutputPoint& point)
{
    std::string s = "(";
    for (std::size_t i = 0; i < point.coords.size(); ++i)
        s += (i ? "," : "") + to_string(point.coords[i]);
    return s + ")";
}

Label nu_port(const OutputPoint& out)
{
    return Label::timed("@out" + to_string(out), Rational{ 0 });
}

std::strong_ordering operator<=>(const Transition& a, const Transition& b)
{
    if (auto c = a.src <=> b.src; c != 0)
        return c;
    if (auto c = a.label <=> b.label; c != 0)
        return c;
    if (auto c = a.dst <=> b.dst; c != 0)
        return c;
    return a.port <=> b.port;
}

ValidationReport validate(const Omts& omts)
{
    ValidationReport report;
    auto& v = report.violations;

    std::set<StateId> states;
    for (const auto& s : omts.states)
        if (!states.insert(s).second)
            v.push_back("duplicate state id '" + s + "'");

    for (const auto& s : omts.initial)
        if (!states.contains(s))
            v.push_back("initial state '" + s + "' is not a declared state");

    std::set<Label> alphabet;
    for (const auto& l : omts.alphabet) {
        if (l.is_empty())
            v.push_back("alphabet contains the empty label nu");
        else if (l.is_reserved())
            v.push_back("alphabet symbol '" + l.input() + "' uses the reserved '@' prefix");
        else if (!well_formed_chrono(l))
            v.push_back("alphabet label " + to_string(l) + " has a malformed chronological component");
        alphabet.insert(l);
    }

    std::optional<std::size_t> dimension;
    for (const auto& s : omts.states) {
        auto it = omts.outputs.find(s);
        if (it == omts.outputs.end()) {
            v.push_back("state '" + s + "' has no output");
            continue;
        }
        if (!dimension)
            dimension = it->second.dimension();
        else if (*dimension != it->second.dimension())
            v.push_back("output of state '" + s + "' has dimension " +
                        std::to_string(it->second.dimension()) + ", expected " +
                        std::to_string(*dimension));
    }
    for (const auto& [s, out] : omts.outputs)
        if (!states.contains(s))
            v.push_back("output given for unknown state id '" + s + "'");

    for (const auto& t : omts.transitions) {
        std::string where = "transition " + t.src + " --" + to_string(t.label) + "--> " + t.dst;
        if (!states.contains(t.src))
            v.push_back(where + ": unknown source state id '" + t.src + "'");
        if (!states.contains(t.dst))
            v.push_back(where + ": unknown destination state id '" + t.dst + "'");
        if (t.label.is_empty()) {
            if (t.src != t.dst)
                v.push_back(where + ": the empty label nu must not change the state");
            if (!t.port.is_empty() && !t.port.is_reserved() && !alphabet.contains(t.port))
                v.push_back(where + ": port " + to_string(t.port) + " is not in the alphabet");
            if (t.port.is_reserved() && t.port.chrono() != 0)
                v.push_back(where + ": port of an empty transition must have zero duration");
        } else {
            if (!alphabet.contains(t.label))
                v.push_back(where + ": label is not in the alphabet");
            if (!t.port.is_empty() && !alphabet.contains(t.port))
                v.push_back(where + ": port " + to_string(t.port) + " is not in the alphabet");
        }
    }
    return report;
}

std::set<StateId> post(const Omts& omts, const StateId& q, const std::set<Label>& labels)
{
    if (std::find(omts.states.begin(), omts.states.end(), q) == omts.states.end())
        throw Error("unknown state id '" + q + "'");
    std::set<StateId> result;
    for (const auto& t : omts.transitions)
        if (t.src == q && labels.contains(t.label))
            result.insert(t.dst);
    return result;
}

Omts materialize_empty_loops(Omts omts)
{
    std::set<StateId> looped;
    for (const auto& t : omts.transitions)
        if (t.label.is_empty() && t.src == t.dst)
            looped.insert(t.src);
    for (const auto& s : omts.states) {
        if (looped.contains(s))
            continue;
        auto it = omts.outputs.find(s);
        OutputPoint out = it == omts.outputs.end() ? OutputPoint{} : it->second;
        omts.transitions.push_back({ s, Label::empty(), s, nu_port(out) });
        looped.insert(s);
    }
    return omts;
}

Omts canonicalize(Omts omts)
{
    auto sort_unique = [](auto& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    sort_unique(omts.states);
    sort_unique(omts.initial);
    sort_unique(omts.alphabet);
    sort_unique(omts.transitions);
    return omts;
}

IndexedOmts::IndexedOmts(const Omts& omts)
{
    auto report = validate(omts);
    if (!report.ok()) {
        std::string msg = "malformed model:";
        for (const auto& v : report.violations)
            msg += "\n  " + v;
        throw Error(msg);
    }
    _model = materialize_empty_loops(omts);

    for (std::size_t i = 0; i < _model.states.size(); ++i)
        _index.emplace(_model.states[i], i);
    _outputs.reserve(size());
    for (const auto& s : _model.states)
        _outputs.push_back(_model.outputs.at(s));
    _dimension = _outputs.empty() ? 0 : _outputs.front().dimension();

    std::set<Label> used;
    for (const auto& t : _model.transitions)
        used.insert(t.label);
    _labels.assign(used.begin(), used.end());

    _edges.resize(size());
    for (std::size_t k = 0; k < _model.transitions.size(); ++k) {
        const auto& t = _model.transitions[k];
        std::size_t src = _index.at(t.src);
        std::size_t dst = _index.at(t.dst);
        auto label = static_cast<std::size_t>(
            std::lower_bound(_labels.begin(), _labels.end(), t.label) - _labels.begin());
        _edges[src].push_back({ label, dst, t.port, k });
    }
    for (auto& edges : _edges) {
        std::stable_sort(edges.begin(), edges.end(), [this](const Edge& a, const Edge& b) {
            if (a.label != b.label)
                return a.label < b.label;
            if (a.dst != b.dst)
                return _model.states[a.dst] < _model.states[b.dst];
            return a.port < b.port;
        });
    }

    _is_initial.assign(size(), false);
    for (const auto& s : _model.initial) {
        std::size_t q = _index.at(s);
        if (!_is_initial[q]) {
            _is_initial[q] = true;
            _initial.push_back(q);
        }
    }
    std::sort(_initial.begin(), _initial.end());
}

std::optional<std::size_t> IndexedOmts::find(const StateId& id) const
{
    auto it = _index.find(id);
    if (it == _index.end())
        return std::nullopt;
    return it->second;
}

std::size_t IndexedOmts::index(const StateId& id) const
{
    auto it = _index.find(id);
    if (it == _index.end())
        throw Error("unknown state id '" + id + "'");
    return it->second;
}

} // namespace omts
