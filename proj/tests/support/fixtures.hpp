#pragma once

#include "omts/generator.hpp"
#include "omts/model.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace omts::testing
{

inline Rational q(const char* text)
{
    return parse_rational(text);
}

inline Label lab(const std::string& u, const char* chi)
{
    return Label::timed(u, parse_rational(chi));
}

inline OutputPoint pt(std::initializer_list<const char*> coords)
{
    OutputPoint p;
    for (const char* c : coords)
        p.coords.push_back(parse_rational(c));
    return p;
}

struct Edge
{
    std::string src;
    Label label;
    std::string dst;
    Label port;
};

// A model whose alphabet is the set of non-nu labels and non-nu ports used by `edges`.
inline Omts make_omts(const std::vector<std::pair<std::string, OutputPoint>>& states,
                      const std::vector<std::string>& initial, const std::vector<Edge>& edges)
{
    Omts m;
    for (const auto& [s, out] : states) {
        m.states.push_back(s);
        m.outputs.emplace(s, out);
    }
    m.initial = initial;
    std::set<Label> alphabet;
    for (const auto& e : edges) {
        m.transitions.push_back({ e.src, e.label, e.dst, e.port });
        if (!e.label.is_empty())
            alphabet.insert(e.label);
        if (!e.port.is_empty() && !e.port.is_reserved())
            alphabet.insert(e.port);
    }
    m.alphabet.assign(alphabet.begin(), alphabet.end());
    return m;
}

// Same transition structure, every output coordinate shifted by a random multiple of 1/2 in
// [-max_halves/2, max_halves/2].
inline Omts perturb_outputs(Omts m, std::uint64_t seed, int max_halves = 1)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> shift(-max_halves, max_halves);
    for (auto& [s, out] : m.outputs)
        for (auto& x : out.coords)
            x += ratio(shift(rng), 2);
    // empty self-loop ports render the output; rebuild them
    for (auto& t : m.transitions)
        if (t.label.is_empty() && t.port.is_reserved())
            t.port = nu_port(m.outputs.at(t.src));
    return m;
}

// Adds copies of some transitions whose labels keep their symbol and shift their duration by
// +-1/2 (when it stays positive), so that matching needs label slack.
inline Omts jitter_labels(Omts m, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.3);
    std::vector<Transition> extra;
    std::set<Label> alphabet(m.alphabet.begin(), m.alphabet.end());
    for (const auto& t : m.transitions) {
        if (t.label.is_empty() || !coin(rng))
            continue;
        Rational chi = t.label.chrono() + (coin(rng) ? ratio(1, 2) : ratio(-1, 2));
        if (chi <= 0)
            continue;
        Label l = Label::timed(t.label.input(), chi);
        alphabet.insert(l);
        extra.push_back({ t.src, l, t.dst, t.port });
    }
    m.transitions.insert(m.transitions.end(), extra.begin(), extra.end());
    m.alphabet.assign(alphabet.begin(), alphabet.end());
    return canonicalize(std::move(m));
}

// Random pair in which the second system is usually a close relative of the first.
inline std::pair<Omts, Omts> random_pair(std::uint64_t seed, unsigned max_states = 5, unsigned max_labels = 3)
{
    std::mt19937_64 rng(seed);
    unsigned n = 1 + static_cast<unsigned>(rng() % max_states);
    unsigned l = 1 + static_cast<unsigned>(rng() % max_labels);
    unsigned b = 1 + static_cast<unsigned>(rng() % 3);
    Omts t1 = generate_random_omts(rng(), n, l, b);
    Omts t2;
    switch (rng() % 3) {
    case 0:
        t2 = perturb_outputs(t1, rng());
        break;
    case 1:
        t2 = jitter_labels(perturb_outputs(t1, rng()), rng());
        break;
    default:
        t2 = generate_random_omts(rng(), 1 + static_cast<unsigned>(rng() % max_states), l, b);
        break;
    }
    return { t1, t2 };
}

// Rewrites most ports so that a move labelled (u, x) in either system feeds a move labelled
// (swap(u), x) in the other, where swap exchanges a and b. Alphabets become the union.
inline void wire_ports(Omts& t1, Omts& t2, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution keep(0.2);
    auto swap = [](const std::string& u) { return u == "a" ? std::string("b") : u == "b" ? std::string("a") : u; };
    std::set<Label> alphabet(t1.alphabet.begin(), t1.alphabet.end());
    alphabet.insert(t2.alphabet.begin(), t2.alphabet.end());
    for (Omts* m : { &t1, &t2 })
        for (auto& t : m->transitions) {
            if (t.label.is_empty() || keep(rng))
                continue;
            t.port = Label::timed(swap(t.label.input()), t.label.chrono());
            alphabet.insert(t.port);
        }
    for (Omts* m : { &t1, &t2 }) {
        m->alphabet.assign(alphabet.begin(), alphabet.end());
        *m = canonicalize(std::move(*m));
    }
}

struct Quadruple
{
    Omts t1, t2, t3, t4;
};

// Composable pair with output-perturbed copies as the approximating systems.
inline Quadruple random_quadruple(std::uint64_t seed, unsigned max_states = 3)
{
    std::mt19937_64 rng(seed);
    auto draw = [&] {
        return generate_random_omts(rng(), 1 + static_cast<unsigned>(rng() % max_states),
                                    1 + static_cast<unsigned>(rng() % 2), 1 + static_cast<unsigned>(rng() % 2));
    };
    Quadruple q{ draw(), draw(), {}, {} };
    // relabel the second system onto the swapped first alphabet so that wiring finds partners
    std::vector<Label> partner;
    for (const auto& l : q.t1.alphabet)
        partner.push_back(Label::timed(l.input() == "a" ? "b" : l.input() == "b" ? "a" : l.input(), l.chrono()));
    auto relabel = [&](Label& l) {
        if (l.is_empty() || l.is_reserved())
            return;
        auto at = std::find(q.t2.alphabet.begin(), q.t2.alphabet.end(), l) - q.t2.alphabet.begin();
        l = partner[static_cast<std::size_t>(at) % partner.size()];
    };
    for (auto& t : q.t2.transitions) {
        relabel(t.label);
        relabel(t.port);
    }
    q.t2.alphabet = partner;
    wire_ports(q.t1, q.t2, rng());
    q.t3 = perturb_outputs(q.t1, rng());
    q.t4 = perturb_outputs(q.t2, rng());
    return q;
}

} // namespace omts::testing
