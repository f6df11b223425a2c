#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "mlearn/obstree.hpp"
#include "mlearn/refpack.hpp"

namespace mlearn {

/// Matching degrees between basis states and reference states, maintained
/// incrementally: a row is recomputed only when the basis state's subtree has
/// grown since it was last computed, which is equivalent to recomputation
/// from scratch. Also caches tree-state/reference-state apartness, which is
/// monotone, so positive entries are permanent.
class MatchTable {
public:
    explicit MatchTable(const ReferencePack& pack) : pack_(&pack) {}

    /// Brings all basis rows up to date with the tree.
    void refresh(const ObservationTree& t);

    /// |WI(q)|: defined prefix-suffix pairs below q over the common alphabet.
    long long wi_size(int basis_node) const;
    long long agreements(int basis_node, int p) const;
    /// Vacuously 1 when WI(q) is empty.
    double mdeg(int basis_node, int p) const;

    /// Approximate match: p attains the maximum matching degree for q.
    bool approx_match(int basis_node, int p) const;
    std::vector<int> approx_matches(int basis_node) const;

    /// Exact match on all commonly defined sequences (no apartness witness).
    bool exact_match(const ObservationTree& t, int node, int p);
    std::optional<std::vector<int>> ref_witness(const ObservationTree& t, int node, int p);

    /// Recomputes every row from scratch and compares with the incremental
    /// state; throws std::logic_error on any difference. Debug aid.
    void verify_against_scratch(const ObservationTree& t) const;

private:
    struct Row {
        std::uint64_t version = UINT64_MAX;  // subtree version the row reflects
        long long wi = 0;
        std::vector<long long> agree;
    };
    struct RefApart {
        bool apart = false;
        std::vector<int> witness;
        std::uint64_t version = 0;
    };

    Row compute_row(const ObservationTree& t, int basis_node) const;

    const ReferencePack* pack_;
    std::map<int, Row> rows_;
    mutable std::map<std::pair<int, int>, RefApart> ref_apart_;
};

}  // namespace mlearn
