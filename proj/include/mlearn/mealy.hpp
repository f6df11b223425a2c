#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mlearn/word.hpp"

namespace mlearn {

/// A possibly-partial deterministic Mealy machine. States are dense indices,
/// input and output symbols are strings interned per machine. The transition
/// and output maps are always defined together, so dom(trans) = dom(out) holds
/// by construction.
///
/// The order of the `inputs()` vector is the machine's canonical input order;
/// every breadth-first construction and tie-break in this library follows it.
class MealyMachine {
public:
    MealyMachine() = default;
    MealyMachine(std::vector<std::string> inputs, int state_count, int initial);

    int state_count() const { return static_cast<int>(trans_.size()); }
    int input_count() const { return static_cast<int>(inputs_.size()); }
    int output_count() const { return static_cast<int>(outputs_.size()); }
    int initial() const { return initial_; }
    void set_initial(int q);

    const std::vector<std::string>& inputs() const { return inputs_; }
    const std::vector<std::string>& outputs() const { return outputs_; }
    const std::string& input_symbol(int i) const { return inputs_[i]; }
    const std::string& output_symbol(int o) const { return outputs_[o]; }
    /// -1 when the symbol is not part of the alphabet.
    int input_index(const std::string& sym) const;
    int output_index(const std::string& sym) const;
    int intern_output(const std::string& sym);

    int add_state();

    /// Defines transition and output together.
    void set_edge(int q, int i, int target, int o);
    void set_edge_syms(int q, const std::string& in, int target, const std::string& out);
    void clear_edge(int q, int i);

    bool defined(int q, int i) const { return trans_[q][i] >= 0; }
    int next(int q, int i) const { return trans_[q][i]; }
    int output(int q, int i) const { return out_[q][i]; }

    bool is_complete() const;

    /// Final state and outputs of running `w` from `q`; absent at the first
    /// undefined step or unknown symbol.
    std::optional<std::pair<int, OutputWord>> run(int q, const Word& w) const;
    /// State reached by an index word, absent if some step is undefined.
    std::optional<int> run_state(int q, const std::vector<int>& iw) const;
    /// Outputs of an index word (by output index), absent if undefined.
    std::optional<std::vector<int>> run_outputs(int q, const std::vector<int>& iw) const;

    std::vector<int> to_index_word(const Word& w) const;  // throws on unknown symbol
    Word to_symbol_word(const std::vector<int>& iw) const;

    /// Optional display names for states (kept by the DOT parser); empty
    /// entries fall back to "s<index>".
    std::vector<std::string> state_names;

private:
    std::vector<std::string> inputs_;
    std::vector<std::string> outputs_;
    std::map<std::string, int> input_idx_;
    std::map<std::string, int> output_idx_;
    std::vector<std::vector<int>> trans_;
    std::vector<std::vector<int>> out_;
    int initial_ = 0;
};

/// Runs `w` on `m` from state `q`. Absent iff some step is undefined or a
/// symbol is outside the alphabet; partiality is the contract, not an error.
std::optional<std::pair<int, OutputWord>> walk(const MealyMachine& m, int q, const Word& w);

/// Restriction to `allowed`: inputs become m.inputs ∩ allowed, in the order
/// given by `allowed`; states are unchanged.
MealyMachine restrict_inputs(const MealyMachine& m, const std::vector<std::string>& allowed);

struct Minimized {
    MealyMachine machine;       // quotient of the reachable part, minimal and complete
    std::vector<int> class_of;  // original state -> quotient state, -1 for classes with no reachable member
};

/// Quotient of restrict_inputs(m, allowed) by language equivalence, computed
/// with partition refinement. Quotient states are numbered in breadth-first
/// order from the initial class, so state_cover on the result is canonical.
/// Throws std::invalid_argument when the restriction is not complete (a
/// malformed reference).
Minimized minimize_restricted(const MealyMachine& m, const std::vector<std::string>& allowed);

/// Shortest input word on which the two machines' outputs differ, or absent
/// when they are language equivalent. Both machines must be complete over the
/// same alphabet; a mismatch throws std::invalid_argument.
std::optional<Word> language_equivalent(const MealyMachine& m1, const MealyMachine& m2);

/// One shortest access sequence per state, indexed by state, from a BFS that
/// expands inputs in the machine's canonical order. The set of words is
/// prefix-closed. Requires every state reachable (call after minimization).
std::vector<Word> state_cover(const MealyMachine& m);

struct SeparatingFamily {
    /// Per-state identifier sets, each sorted by length then by input order.
    std::vector<std::vector<Word>> identifiers;
};

/// Separating family via a splitting tree driven by partition refinement.
/// With total=false the machine must be complete. With total=true an
/// undefined input is refined as a distinguished pseudo-output, so the family
/// also separates states whose defined input sets differ.
SeparatingFamily separating_family(const MealyMachine& m, bool total);

/// Witness that p (in m1) and q (in m2) are total apart: a word over the
/// common alphabet with differing outputs, or defined on exactly one side.
/// BFS over the state product, so any returned witness is shortest.
std::optional<Word> total_apart(const MealyMachine& m1, int p, const MealyMachine& m2, int q);

/// Plain apartness across machines (Def. of matching): a common word defined
/// on both sides with differing outputs.
std::optional<Word> apart_states(const MealyMachine& m1, int p, const MealyMachine& m2, int q);

/// Outputs of an index word where an undefined step emits -2 and the run
/// stays in a pseudo-sink from then on.
std::vector<int> run_outputs_bot(const MealyMachine& m, int q, const std::vector<int>& iw);

/// Exact same states/alphabet/edges; input order may differ between the two.
bool structurally_equal(const MealyMachine& a, const MealyMachine& b);

/// Reorders the input alphabet: symbols listed in `order` come first (in that
/// order), remaining symbols keep lexicographic order. Used for the CLI
/// input-order override.
MealyMachine reorder_inputs(const MealyMachine& m, const std::vector<std::string>& order);

/// True iff every state reaches every other state.
bool strongly_connected(const MealyMachine& m);

}  // namespace mlearn
