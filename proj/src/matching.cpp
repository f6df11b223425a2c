#include "mlearn/matching.hpp"

#include <stdexcept>

namespace mlearn {

MatchTable::Row MatchTable::compute_row(const ObservationTree& t, int basis_node) const {
    const MealyMachine& r = pack_->merged;
    const int o = r.state_count();
    Row row;
    row.version = t.subtree_version(basis_node);
    row.agree.assign(o, 0);
    if (o == 0) return row;

    std::vector<int> into_r(t.input_count());
    for (int i = 0; i < t.input_count(); ++i) into_r[i] = r.input_index(t.input_symbol(i));

    struct Frame {
        int node;
        std::vector<int> ref;  // per reference state: current image, -1 when undefined
    };
    std::vector<int> start(o);
    for (int p = 0; p < o; ++p) start[p] = p;
    std::vector<Frame> stack{{basis_node, std::move(start)}};
    while (!stack.empty()) {
        Frame fr = std::move(stack.back());
        stack.pop_back();
        for (int i = 0; i < t.input_count(); ++i) {
            int ri = into_r[i];
            if (ri < 0) continue;  // outside the common alphabet
            int c = t.child(fr.node, i);
            if (c < 0) continue;
            ++row.wi;
            std::vector<int> nxt(o, -1);
            for (int p = 0; p < o; ++p) {
                int s = fr.ref[p];
                if (s < 0 || !r.defined(s, ri)) continue;  // undefined disagrees
                if (t.output_symbol(t.edge_output(fr.node, i)) == r.output_symbol(r.output(s, ri)))
                    ++row.agree[p];
                nxt[p] = r.next(s, ri);
            }
            stack.push_back({c, std::move(nxt)});
        }
    }
    return row;
}

void MatchTable::refresh(const ObservationTree& t) {
    for (int b : t.basis()) {
        auto it = rows_.find(b);
        if (it != rows_.end() && it->second.version == t.subtree_version(b)) continue;
        rows_[b] = compute_row(t, b);
    }
}

long long MatchTable::wi_size(int basis_node) const { return rows_.at(basis_node).wi; }

long long MatchTable::agreements(int basis_node, int p) const {
    return rows_.at(basis_node).agree[p];
}

double MatchTable::mdeg(int basis_node, int p) const {
    const Row& row = rows_.at(basis_node);
    if (row.wi == 0) return 1.0;  // vacuous agreement
    return static_cast<double>(row.agree[p]) / static_cast<double>(row.wi);
}

bool MatchTable::approx_match(int basis_node, int p) const {
    const Row& row = rows_.at(basis_node);
    if (row.wi == 0) return true;
    long long best = 0;
    for (long long a : row.agree) best = std::max(best, a);
    return row.agree[p] == best;
}

std::vector<int> MatchTable::approx_matches(int basis_node) const {
    std::vector<int> out;
    for (int p = 0; p < pack_->merged.state_count(); ++p)
        if (approx_match(basis_node, p)) out.push_back(p);
    return out;
}

std::optional<std::vector<int>> MatchTable::ref_witness(const ObservationTree& t, int node, int p) {
    auto key = std::make_pair(node, p);
    auto it = ref_apart_.find(key);
    if (it != ref_apart_.end()) {
        if (it->second.apart) return it->second.witness;
        if (it->second.version == t.subtree_version(node)) return std::nullopt;
    }
    auto witness = apart_ref(t, node, pack_->merged, p);
    RefApart entry;
    if (witness) {
        entry.apart = true;
        entry.witness = *witness;
    } else {
        entry.version = t.subtree_version(node);
    }
    ref_apart_[key] = std::move(entry);
    return witness;
}

bool MatchTable::exact_match(const ObservationTree& t, int node, int p) {
    return !ref_witness(t, node, p).has_value();
}

void MatchTable::verify_against_scratch(const ObservationTree& t) const {
    for (int b : t.basis()) {
        auto it = rows_.find(b);
        if (it == rows_.end()) continue;
        Row scratch = compute_row(t, b);
        if (it->second.version != scratch.version) continue;  // stale row, not comparable
        if (it->second.wi != scratch.wi || it->second.agree != scratch.agree)
            throw std::logic_error("match table diverged from recomputation");
    }
}

}  // namespace mlearn
