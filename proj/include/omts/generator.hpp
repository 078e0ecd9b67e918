#pragma once

#include "omts/model.hpp"

#include <cstdint>

namespace omts
{

struct GeneratorOptions
{
    unsigned dimension = 1;
    unsigned max_initial = 2;
    unsigned lattice = 4; // output coordinates are k/2 for k in [0, lattice]
};

// Random system with states q0..q{n-1}, n_labels alphabet labels drawn from symbols {a,b,c}
// and durations {1/2, 1, 3/2, 2}, `branching` random transitions per state with ports from
// the alphabet or nu, and materialized empty self-loops. Deterministic in the seed.
Omts generate_random_omts(std::uint64_t seed, unsigned n_states, unsigned n_labels, unsigned branching,
                          const GeneratorOptions& options = {});

} // namespace omts
