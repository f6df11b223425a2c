#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mlearn/mealy.hpp"
#include "mlearn/refpack.hpp"

namespace mlearn {

enum class FrontierStatus { isolated, identified, undetermined };

struct FrontierEntry {
    int node;
    FrontierStatus status;
    int identified_with;  // basis node, only for identified
};

/// Prefix tree of observed SUL behavior. Nodes are dense indices, the root is
/// node 0 and is always the first basis state. Inputs are the SUL alphabet in
/// canonical order; outputs are interned strings.
///
/// Apartness witnesses are cached. New observations can only create apartness,
/// never destroy it, so positive entries are kept forever; negative entries
/// are stamped with subtree versions and rechecked after growth.
class ObservationTree {
public:
    explicit ObservationTree(std::vector<std::string> inputs);

    int root() const { return 0; }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    int input_count() const { return static_cast<int>(inputs_.size()); }
    const std::vector<std::string>& inputs() const { return inputs_; }
    const std::string& input_symbol(int i) const { return inputs_[i]; }
    int input_index(const std::string& sym) const;
    const std::string& output_symbol(int o) const { return out_syms_[o]; }

    int child(int node, int i) const { return nodes_[node].child[i]; }
    int edge_output(int node, int i) const { return nodes_[node].out[i]; }
    bool defined(int node, int i) const { return nodes_[node].child[i] >= 0; }
    int parent(int node) const { return nodes_[node].parent; }
    int parent_input(int node) const { return nodes_[node].parent_input; }
    int depth(int node) const { return nodes_[node].depth; }
    std::uint64_t subtree_version(int node) const { return nodes_[node].version; }

    /// Unique input word from the root to the node.
    std::vector<int> access(int node) const;
    Word access_word(int node) const;

    std::optional<int> run_state(int node, const std::vector<int>& iw) const;
    std::optional<std::vector<int>> run_outputs(int node, const std::vector<int>& iw) const;

    /// Adds a trace from the root; |w| = |outs| required. Existing outputs
    /// must agree: a conflict means a nondeterministic SUL and throws
    /// std::runtime_error. Returns the final node.
    int add_observation(const Word& w, const OutputWord& outs);
    int add_observation(const std::vector<int>& iw, const std::vector<int>& outs);
    int intern_output(const std::string& sym);

    /// Whole input word fully present in the tree?
    bool contains(const std::vector<int>& iw) const;

    const std::vector<int>& basis() const { return basis_; }
    bool in_basis(int node) const { return nodes_[node].basis; }
    /// Non-basis immediate successors of basis states, in node-creation order.
    std::vector<int> frontier() const;
    bool in_frontier(int node) const;
    void promote(int node);

    /// Cached apartness between two tree nodes: the shortest word defined from
    /// both with differing outputs, ties broken by input order.
    std::optional<std::vector<int>> apart(int a, int b) const;
    /// Installs an externally discovered witness (must replay to a difference).
    void record_witness(int a, int b, const std::vector<int>& witness) const;

    std::vector<FrontierEntry> frontier_status() const;
    /// All basis inputs defined, every frontier state identified, none isolated.
    bool adequate() const;

    Word to_symbol_word(const std::vector<int>& iw) const;
    OutputWord to_output_word(const std::vector<int>& ow) const;

private:
    struct Node {
        int parent = -1;
        int parent_input = -1;
        int depth = 0;
        bool basis = false;
        std::uint64_t version = 0;
        std::vector<int> child;
        std::vector<int> out;
    };

    struct ApartEntry {
        bool apart = false;
        std::vector<int> witness;
        std::uint64_t va = 0, vb = 0;  // versions at (min,max) when not apart
    };

    int new_node(int parent, int via);

    std::vector<std::string> inputs_;
    std::unordered_map<std::string, int> input_idx_;
    std::vector<std::string> out_syms_;
    std::unordered_map<std::string, int> out_idx_;
    std::vector<Node> nodes_;
    std::vector<int> basis_;
    mutable std::unordered_map<std::uint64_t, ApartEntry> apart_cache_;
};

/// Apartness between a tree node and a reference state: shortest word over
/// the common alphabet, defined in the tree from `node` and in `r` from `p`,
/// on which outputs differ.
std::optional<std::vector<int>> apart_ref(const ObservationTree& t, int node, const MealyMachine& r,
                                          int p);

/// Complete machine folded back from an adequate-minus-isolation tree:
/// hypothesis states are the basis nodes, frontier transitions are redirected
/// to the identifying basis state.
struct Hypothesis {
    MealyMachine machine;             // states indexed by basis position, inputs = tree inputs
    std::vector<int> node_of_state;   // hypothesis state -> basis node
    std::unordered_map<int, int> state_of_node;

    int state_after(const std::vector<int>& iw) const;
    std::vector<int> outputs_of(const std::vector<int>& iw) const;
};

Hypothesis fold_hypothesis(const ObservationTree& t);

/// Shortest tree word on which the hypothesis' outputs differ from the tree's.
std::optional<std::vector<int>> check_consistency(const ObservationTree& t, const Hypothesis& h);

struct NormBreakdown {
    long long basis_quad = 0;       // |B|(|B|+1)
    long long basis_defined = 0;    // defined basis transitions
    long long basis_frontier = 0;   // apart basis-frontier pairs
    long long sep_triples = 0;      // (q,p,p') with the reference separator defined from q
    long long ref_apart = 0;        // (B ∪ F) × reference apart pairs
    long long bf_sep = 0;           // basis-frontier pairs with both access-image separators defined
    long long total() const {
        return basis_quad + basis_defined + basis_frontier + sep_triples + ref_apart + bf_sep;
    }
};

/// Progress norm over the tree and reference pack. Every learning rule
/// application strictly increases it (single-reference packs; with several
/// references it is computed over the merged machine as a diagnostic).
NormBreakdown compute_norm_breakdown(const ObservationTree& t, const ReferencePack& pack);
long long compute_norm(const ObservationTree& t, const ReferencePack& pack);

/// Debug dump with basis/frontier annotations.
std::string write_tree_dot(const ObservationTree& t);

}  // namespace mlearn
