#pragma once

#include "omts/rational.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace omts
{

// A transition label: either the empty label nu, or a pair (input symbol, chronological
// component). The chronological component is a compact hybrid time domain given by its
// final time `chrono` and the interior jump times; a plain duration has no jumps.
class Label
{
public:
    Label() = default; // nu

    static Label empty() { return Label{}; }
    static Label timed(std::string input, Rational chrono, std::vector<Rational> jumps = {});

    [[nodiscard]] bool is_empty() const { return _empty; }
    [[nodiscard]] const std::string& input() const { return _input; }
    [[nodiscard]] const Rational& chrono() const { return _chrono; }
    [[nodiscard]] const std::vector<Rational>& jumps() const { return _jumps; }

    // Symbols starting with '@' are reserved for ports of nu transitions.
    [[nodiscard]] bool is_reserved() const { return !_empty && !_input.empty() && _input[0] == '@'; }

    friend bool operator==(const Label& a, const Label& b);
    friend std::strong_ordering operator<=>(const Label& a, const Label& b);

private:
    bool _empty = true;
    std::string _input;
    Rational _chrono{ 0 };
    std::vector<Rational> _jumps;
};

// "nu", "(a,1/2)" or "(a,3/1;1/1,2/1)" when jump times are present.
std::string to_string(const Label& label);

// Same chronological component (final time and jump times). nu has none.
bool same_chrono(const Label& a, const Label& b);

// The label carrying only the chronological component of `label`, used on product systems.
Label chrono_part(const Label& label);

struct OutputPoint
{
    std::vector<Rational> coords;

    [[nodiscard]] std::size_t dimension() const { return coords.size(); }
    friend bool operator==(const OutputPoint&, const OutputPoint&) = default;
};

std::string to_string(const OutputPoint& point);

// Port of the empty self-loop at a state with output `out`: a zero-duration label with a
// reserved symbol that renders the output.
Label nu_port(const OutputPoint& out);

using StateId = std::string;

struct Transition
{
    StateId src;
    Label label;
    StateId dst;
    Label port;

    friend bool operator==(const Transition&, const Transition&) = default;
    friend std::strong_ordering operator<=>(const Transition& a, const Transition& b);
};

// A finite open metric transition system as declared in a model file.
struct Omts
{
    std::vector<StateId> states;
    std::vector<StateId> initial;
    std::vector<Label> alphabet;
    std::vector<Transition> transitions;
    std::map<StateId, OutputPoint> outputs;

    friend bool operator==(const Omts&, const Omts&) = default;
};

struct DerivationRelation
{
    std::vector<std::pair<StateId, StateId>> pairs;
};

struct ValidationReport
{
    std::vector<std::string> violations;

    [[nodiscard]] bool ok() const { return violations.empty(); }
};

ValidationReport validate(const Omts& omts);

// Destinations of transitions leaving `q` whose label is in `labels`.
std::set<StateId> post(const Omts& omts, const StateId& q, const std::set<Label>& labels);

// Adds q --nu--> q with port nu_port(<q>) for every state lacking an empty self-loop.
Omts materialize_empty_loops(Omts omts);

// Sorted, duplicate-free form used for serialization.
Omts canonicalize(Omts omts);

// Validated, index-based view of an Omts with empty self-loops materialized. This is the
// form every algorithm works on. Outgoing edges are ordered by (label, destination id),
// which fixes the enumeration order of executions.
class IndexedOmts
{
public:
    struct Edge
    {
        std::size_t label; // index into labels()
        std::size_t dst;
        Label port;
        std::size_t transition; // index into model().transitions
    };

    // Throws omts::Error listing the violations when the model is malformed.
    explicit IndexedOmts(const Omts& omts);

    [[nodiscard]] const Omts& model() const { return _model; }
    [[nodiscard]] std::size_t size() const { return _model.states.size(); }
    [[nodiscard]] const StateId& name(std::size_t q) const { return _model.states[q]; }
    [[nodiscard]] std::optional<std::size_t> find(const StateId& id) const;
    [[nodiscard]] std::size_t index(const StateId& id) const; // throws on unknown ids

    [[nodiscard]] const OutputPoint& output(std::size_t q) const { return _outputs[q]; }
    [[nodiscard]] std::size_t output_dimension() const { return _dimension; }
    [[nodiscard]] std::span<const Edge> outgoing(std::size_t q) const { return _edges[q]; }
    [[nodiscard]] const std::vector<std::size_t>& initial() const { return _initial; }
    [[nodiscard]] bool is_initial(std::size_t q) const { return _is_initial[q]; }

    // Distinct labels used by transitions (nu included), sorted.
    [[nodiscard]] const std::vector<Label>& labels() const { return _labels; }
    [[nodiscard]] const Label& label(const Edge& e) const { return _labels[e.label]; }

private:
    Omts _model;
    std::unordered_map<StateId, std::size_t> _index;
    std::vector<OutputPoint> _outputs;
    std::size_t _dimension = 0;
    std::vector<std::vector<Edge>> _edges;
    std::vector<std::size_t> _initial;
    std::vector<bool> _is_initial;
    std::vector<Label> _labels;
};

} // namespace omts
