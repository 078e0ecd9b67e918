#include "omts/generator.hpp"

#include <algorithm>
#include <random>

namespace omts
{

Omts generate_random_omts(std::uint64_t seed, unsigned n_states, unsigned n_labels, unsigned branching,
                          const GeneratorOptions& options)
{
    if (n_states == 0)
        throw Error("a generated system needs at least one state");
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)); };

    std::vector<Label> pool;
    for (const char* u : { "a", "b", "c" })
        for (int half = 1; half <= 4; ++half)
            pool.push_back(Label::timed(u, ratio(half, 2)));
    std::shuffle(pool.begin(), pool.end(), rng);
    n_labels = std::min<unsigned>(n_labels, static_cast<unsigned>(pool.size()));

    Omts m;
    m.alphabet.assign(pool.begin(), pool.begin() + n_labels);
    for (unsigned i = 0; i < n_states; ++i) {
        StateId s = "q" + std::to_string(i);
        m.states.push_back(s);
        OutputPoint p;
        for (unsigned d = 0; d < options.dimension; ++d)
            p.coords.push_back(ratio(static_cast<long>(pick(options.lattice + 1)), 2));
        m.outputs.emplace(s, std::move(p));
    }
    unsigned initial = 1 + static_cast<unsigned>(pick(std::max(1u, std::min(options.max_initial, n_states))));
    std::vector<StateId> shuffled = m.states;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    m.initial.assign(shuffled.begin(), shuffled.begin() + initial);

    if (!m.alphabet.empty())
        for (const auto& s : m.states)
            for (unsigned b = 0; b < branching; ++b) {
                const Label& l = m.alphabet[pick(m.alphabet.size())];
                const StateId& dst = m.states[pick(m.states.size())];
                std::size_t p = pick(m.alphabet.size() + 1);
                Label port = p == m.alphabet.size() ? Label::empty() : m.alphabet[p];
                m.transitions.push_back({ s, l, dst, port });
            }
    return canonicalize(materialize_empty_loops(std::move(m)));
}

} // namespace omts
