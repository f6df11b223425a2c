#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mlearn/mealy.hpp"

namespace mlearn {

/// Per-run precomputation over reference models. Each reference is restricted
/// to the SUL alphabet and minimized; the pack holds the union state cover,
/// the (total) separating family over the disjoint union of the references,
/// and a separator table restricted to state pairs within one reference.
/// Immutable after construction, safe to share across concurrent runs.
struct ReferencePack {
    /// Disjoint union of the minimized restricted references; partial when
    /// references have different alphabets. Initial = first reference's initial.
    MealyMachine merged;
    std::vector<int> scope_of;       // merged state -> reference index
    std::vector<int> scope_initial;  // reference index -> merged state
    std::vector<int> class_count;    // equivalence classes per reference
    std::vector<std::string> ref_names;

    /// Union of per-reference covers, prefix-closed, sorted by length then by
    /// the merged machine's input order.
    std::vector<Word> cover;

    /// Identifier set per merged state (total variant when several references).
    std::vector<std::vector<Word>> identifiers;

    /// sep(p,p') for same-scope apart pairs: the shortest separating member of
    /// W_p ∩ W_p', ties broken lexicographically. Key is (min,max).
    std::map<std::pair<int, int>, Word> sep_table;

    int scope_count() const { return static_cast<int>(scope_initial.size()); }
    bool empty() const { return merged.state_count() == 0; }

    bool cover_contains(const Word& w) const;

    /// Throws std::logic_error when p, p' are not an apart pair within one
    /// reference scope (caller bug).
    const Word& sep(int p, int p2) const;

    /// State reached by `w` from the given reference's initial state, absent
    /// when the word leaves the reference's alphabet.
    std::optional<int> ref_state(int scope, const Word& w) const;

    /// Merged-machine outputs of `w` from state p, with -2 marking undefined
    /// steps (total-apartness semantics). Used to test whether a word separates.
    std::vector<int> outputs_bot(int p, const Word& w) const;
};

/// Builds the pack. References must be complete over their own alphabets.
/// An empty list yields an empty pack; a reference whose alphabet is disjoint
/// from the SUL's is kept but contributes only the empty word to the cover.
ReferencePack build_reference_pack(const std::vector<std::pair<std::string, MealyMachine>>& refs,
                                   const std::vector<std::string>& sul_inputs);

}  // namespace mlearn
