#pragma once

#include <stdexcept>
#include <string>

#include "mlearn/mealy.hpp"

namespace mlearn {

struct DotParseError : std::runtime_error {
    int line;
    int column;
    DotParseError(const std::string& msg, int line_, int column_)
        : std::runtime_error(msg + " at line " + std::to_string(line_) + ", column " +
                             std::to_string(column_)),
          line(line_),
          column(column_) {}
};

/// Parses a digraph whose edges are labeled "input / output" (whitespace
/// around the slash is ignored). The initial state is the target of an edge
/// from a pseudo-node whose name starts with "__start"; without one, the
/// first declared node is initial. Duplicate (state, input) edges are
/// rejected as nondeterminism. Inputs are ordered lexicographically.
MealyMachine parse_dot(const std::string& text);

std::string write_dot(const MealyMachine& m);

MealyMachine load_dot_file(const std::string& path);
void save_dot_file(const MealyMachine& m, const std::string& path);

}  // namespace mlearn
