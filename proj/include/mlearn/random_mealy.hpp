#pragma once

#include <cstdint>
#include <random>

#include "mlearn/mealy.hpp"

namespace mlearn {

/// Uniformly random complete machine: inputs i0..i(k-1) as single letters
/// a, b, c, ..., outputs "0".."m-1", every (state, input) drawn independently.
MealyMachine random_mealy(std::uint64_t seed, int states, int inputs, int outputs);

/// As random_mealy but each edge is kept with the given percentage (at least
/// one edge stays defined overall).
MealyMachine random_partial_mealy(std::uint64_t seed, int states, int inputs, int outputs,
                                  int keep_percent);

/// Deterministically searches seeds derived from `seed` until the generated
/// machine is strongly connected.
MealyMachine random_strongly_connected(std::uint64_t seed, int states, int inputs, int outputs);

std::vector<std::string> letter_inputs(int k);

}  // namespace mlearn
