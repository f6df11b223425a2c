#include "mlearn/refpack.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace mlearn {

namespace {

struct WordLess {
    const MealyMachine* m;
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        for (std::size_t i = 0; i < a.size(); ++i) {
            int ia = m->input_index(a[i]), ib = m->input_index(b[i]);
            if (ia != ib) return ia < ib;
        }
        return false;
    }
};

}  // namespace

bool ReferencePack::cover_contains(const Word& w) const {
    return std::binary_search(cover.begin(), cover.end(), w, WordLess{&merged});
}

const Word& ReferencePack::sep(int p, int p2) const {
    auto it = sep_table.find({std::min(p, p2), std::max(p, p2)});
    if (it == sep_table.end())
        throw std::logic_error("sep: states are not an apart pair within one reference");
    return it->second;
}

std::optional<int> ReferencePack::ref_state(int scope, const Word& w) const {
    int q = scope_initial[scope];
    for (const auto& sym : w) {
        int i = merged.input_index(sym);
        if (i < 0 || !merged.defined(q, i)) return std::nullopt;
        q = merged.next(q, i);
    }
    return q;
}

std::vector<int> ReferencePack::outputs_bot(int p, const Word& w) const {
    return run_outputs_bot(merged, p, merged.to_index_word(w));
}

ReferencePack build_reference_pack(const std::vector<std::pair<std::string, MealyMachine>>& refs,
                                   const std::vector<std::string>& sul_inputs) {
    ReferencePack pack;

    std::vector<Minimized> minimized;
    std::set<std::string> merged_inputs_seen;
    std::vector<std::string> merged_inputs;  // union of intersections, in SUL order
    for (const auto& [name, ref] : refs) {
        if (!ref.is_complete())
            throw std::invalid_argument("reference '" + name + "' is not complete over its alphabet");
        minimized.push_back(minimize_restricted(ref, sul_inputs));
        pack.ref_names.push_back(name);
    }
    for (const auto& sym : sul_inputs) {
        for (const auto& mz : minimized) {
            if (mz.machine.input_index(sym) >= 0 && merged_inputs_seen.insert(sym).second)
                merged_inputs.push_back(sym);
        }
    }

    pack.merged = MealyMachine(merged_inputs, 0, 0);
    for (std::size_t j = 0; j < minimized.size(); ++j) {
        const MealyMachine& mj = minimized[j].machine;
        int base = pack.merged.state_count();
        pack.scope_initial.push_back(base + mj.initial());
        pack.class_count.push_back(mj.state_count());
        for (int q = 0; q < mj.state_count(); ++q) {
            pack.merged.add_state();
            pack.scope_of.push_back(static_cast<int>(j));
        }
        for (int q = 0; q < mj.state_count(); ++q)
            for (int i = 0; i < mj.input_count(); ++i)
                pack.merged.set_edge(base + q, pack.merged.input_index(mj.input_symbol(i)),
                                     base + mj.next(q, i),
                                     pack.merged.intern_output(mj.output_symbol(mj.output(q, i))));
    }
    if (!pack.scope_initial.empty()) pack.merged.set_initial(pack.scope_initial.front());

    // union cover, re-prefix-closed
    {
        std::set<Word, WordLess> words{WordLess{&pack.merged}};
        for (const auto& mz : minimized)
            for (const auto& w : state_cover(mz.machine))
                for (std::size_t len = 0; len <= w.size(); ++len) words.insert(prefix_of(w, len));
        pack.cover.assign(words.begin(), words.end());
    }

    if (!pack.empty()) {
        pack.identifiers = separating_family(pack.merged, /*total=*/true).identifiers;

        // same-scope separators: shortest member of the identifier intersection
        // that separates, ties lexicographic
        WordLess less{&pack.merged};
        for (int p = 0; p < pack.merged.state_count(); ++p) {
            for (int p2 = p + 1; p2 < pack.merged.state_count(); ++p2) {
                if (pack.scope_of[p] != pack.scope_of[p2]) continue;
                std::vector<Word> common;
                std::set_intersection(pack.identifiers[p].begin(), pack.identifiers[p].end(),
                                      pack.identifiers[p2].begin(), pack.identifiers[p2].end(),
                                      std::back_inserter(common), less);
                const Word* best = nullptr;
                for (const auto& w : common) {
                    if (pack.outputs_bot(p, w) == pack.outputs_bot(p2, w)) continue;
                    if (!best || less(w, *best)) best = &w;
                }
                if (best) pack.sep_table.emplace(std::make_pair(p, p2), *best);
            }
        }
    }
    return pack;
}

}  // namespace mlearn
