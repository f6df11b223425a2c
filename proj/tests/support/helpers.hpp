#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "mlearn/mealy.hpp"
#include "mlearn/obstree.hpp"
#include "mlearn/oracle.hpp"

namespace testsupport {

using mlearn::MealyMachine;
using mlearn::ObservationTree;
using mlearn::OutputWord;
using mlearn::Word;

/// Word of single-letter symbols: W("abc") = {"a","b","c"}.
inline Word W(const std::string& letters) {
    Word w;
    for (char c : letters) w.push_back(std::string(1, c));
    return w;
}

/// All words over `alphabet` of length 1..max_len, in length-then-lex order.
inline std::vector<Word> all_words(const std::vector<std::string>& alphabet, int max_len) {
    std::vector<Word> words;
    std::vector<Word> layer{Word{}};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<Word> next;
        for (const auto& w : layer)
            for (const auto& sym : alphabet) {
                Word nw = w;
                nw.push_back(sym);
                words.push_back(nw);
                next.push_back(std::move(nw));
            }
        layer = std::move(next);
    }
    return words;
}

/// Brute-force shortest separating word between two states of one complete
/// machine: plain enumeration of all words up to the state-count bound.
/// Independent of the BFS separator implementations under test.
inline std::optional<Word> brute_shortest_separator(const MealyMachine& m, int p, int q,
                                                    int max_len) {
    for (const auto& w : all_words(m.inputs(), max_len)) {
        auto op = m.run(p, w), oq = m.run(q, w);
        if (op && oq && op->second != oq->second) return w;
    }
    return std::nullopt;
}

/// Brute-force total-apartness witness across two partial machines: word
/// enumeration over the common alphabet, flagging output differences and
/// one-sided definedness.
inline std::optional<Word> brute_total_separator(const MealyMachine& m1, int p,
                                                 const MealyMachine& m2, int q, int max_len) {
    std::vector<std::string> common;
    for (const auto& sym : m1.inputs())
        if (m2.input_index(sym) >= 0) common.push_back(sym);
    for (const auto& w : all_words(common, max_len)) {
        auto o1 = m1.run(p, w), o2 = m2.run(q, w);
        if (o1.has_value() != o2.has_value()) return w;
        if (o1 && o2 && o1->second != o2->second) return w;
    }
    return std::nullopt;
}

/// Exhaustive disagreement search between a tree node and a reference state:
/// walks every tree path below the node (no pruning, no caches) and compares
/// outputs on commonly defined steps.
inline bool exhaustive_tree_ref_disagreement(const ObservationTree& t, int node,
                                             const MealyMachine& r, int p) {
    for (int i = 0; i < t.input_count(); ++i) {
        int c = t.child(node, i);
        if (c < 0) continue;
        int ri = r.input_index(t.input_symbol(i));
        if (ri < 0 || !r.defined(p, ri)) continue;
        if (t.output_symbol(t.edge_output(node, i)) != r.output_symbol(r.output(p, ri))) return true;
        if (exhaustive_tree_ref_disagreement(t, c, r, r.next(p, ri))) return true;
    }
    return false;
}

/// Observation tree populated by replaying the given words on the SUL.
inline ObservationTree tree_from_words(const MealyMachine& sul, const std::vector<Word>& words) {
    ObservationTree t(sul.inputs());
    for (const auto& w : words) {
        auto res = sul.run(sul.initial(), w);
        t.add_observation(w, res->second);
    }
    return t;
}

/// Two-state machine used across tests:
///   s0 --a/1--> s1, s1 --a/0--> s0, b self-loops with output 0 at s0 and 1 at s1.
inline MealyMachine toggle_machine() {
    MealyMachine m({"a", "b"}, 2, 0);
    m.set_edge_syms(0, "a", 1, "1");
    m.set_edge_syms(0, "b", 0, "0");
    m.set_edge_syms(1, "a", 0, "0");
    m.set_edge_syms(1, "b", 1, "1");
    return m;
}

/// Three-state machine whose separating family has the shape
/// W(s0) = W(s1) = {c, ac}, W(s2) = {c}; its state cover is {eps, a, aa}.
inline MealyMachine chain_family_machine() {
    MealyMachine m({"a", "b", "c"}, 3, 0);
    m.set_edge_syms(0, "a", 1, "0");
    m.set_edge_syms(0, "b", 0, "0");
    m.set_edge_syms(0, "c", 0, "0");
    m.set_edge_syms(1, "a", 2, "0");
    m.set_edge_syms(1, "b", 1, "0");
    m.set_edge_syms(1, "c", 1, "0");
    m.set_edge_syms(2, "a", 0, "0");
    m.set_edge_syms(2, "b", 2, "0");
    m.set_edge_syms(2, "c", 2, "1");
    return m;
}

/// Three-state machine with cover {eps, c, ca} where sep of the states at c
/// and at eps is "ac": rebuilding from the root with input c poses the
/// queries "cac" and "ac".
inline MealyMachine cover_via_c_machine() {
    MealyMachine m({"a", "b", "c"}, 3, 0);
    m.set_edge_syms(0, "a", 0, "0");
    m.set_edge_syms(0, "b", 0, "0");
    m.set_edge_syms(0, "c", 1, "0");
    m.set_edge_syms(1, "a", 2, "0");
    m.set_edge_syms(1, "b", 1, "0");
    m.set_edge_syms(1, "c", 1, "0");
    m.set_edge_syms(2, "a", 2, "0");
    m.set_edge_syms(2, "b", 2, "0");
    m.set_edge_syms(2, "c", 2, "1");
    return m;
}

}  // namespace testsupport
