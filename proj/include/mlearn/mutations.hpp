#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mlearn/mealy.hpp"

namespace mlearn {

/// Seeded mutation operators mut1..mut14 for generating SUL/reference pairs.
/// Identical spec and input machine always produce the identical output
/// machine. Composite operators (mut8, mut9, mut14) derive their inner
/// mutated copy from the same stream, so mutate(m, {mut13, seed}) reproduces
/// the component embedded by mutate(m, {mut8, seed}).
struct MutationSpec {
    std::string op;  // "mut1" .. "mut14"
    std::uint64_t seed = 0;
    /// Attachment state for mut8/mut9; defaults to the state farthest from
    /// the initial state (an automatable stand-in for a hand-picked end state).
    std::optional<int> attach_index;
    /// Attempt cap for the redraw loop of mut5.
    int redraw_cap = 10000;
};

MealyMachine mutate(const MealyMachine& m, const MutationSpec& spec);

}  // namespace mlearn
