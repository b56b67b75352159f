#pragma once

#include <random>

#include "elimvote/election.hpp"

namespace elimvote {

enum class RosterNaming {
  Letters,   // a, b, c, ... then c27, c28, ... past the alphabet
  Numerals,  // 0, 1, 2, ...
};

// Uniform random profile: total_weight unit ballots drawn independently,
// equal rankings merged in first-seen order. Deterministic for a given rng
// state.
Profile random_profile(std::mt19937_64& rng, int num_candidates, Weight total_weight,
                       RosterNaming naming = RosterNaming::Letters);

}  // namespace elimvote
