#include "mlearn/obstree.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace mlearn {

ObservationTree::ObservationTree(std::vector<std::string> inputs) : inputs_(std::move(inputs)) {
    for (int i = 0; i < static_cast<int>(inputs_.size()); ++i) input_idx_.emplace(inputs_[i], i);
    nodes_.emplace_back();
    nodes_[0].child.assign(inputs_.size(), -1);
    nodes_[0].out.assign(inputs_.size(), -1);
    nodes_[0].basis = true;
    basis_.push_back(0);
}

int ObservationTree::input_index(const std::string& sym) const {
    auto it = input_idx_.find(sym);
    return it == input_idx_.end() ? -1 : it->second;
}

int ObservationTree::intern_output(const std::string& sym) {
    auto it = out_idx_.find(sym);
    if (it != out_idx_.end()) return it->second;
    int idx = static_cast<int>(out_syms_.size());
    out_syms_.push_back(sym);
    out_idx_.emplace(sym, idx);
    return idx;
}

int ObservationTree::new_node(int parent, int via) {
    int idx = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    nodes_[idx].parent = parent;
    nodes_[idx].parent_input = via;
    nodes_[idx].depth = nodes_[parent].depth + 1;
    nodes_[idx].child.assign(inputs_.size(), -1);
    nodes_[idx].out.assign(inputs_.size(), -1);
    return idx;
}

std::vector<int> ObservationTree::access(int node) const {
    std::vector<int> rev;
    for (int at = node; at != 0; at = nodes_[at].parent) rev.push_back(nodes_[at].parent_input);
    std::reverse(rev.begin(), rev.end());
    return rev;
}

Word ObservationTree::access_word(int node) const { return to_symbol_word(access(node)); }

std::optional<int> ObservationTree::run_state(int node, const std::vector<int>& iw) const {
    for (int i : iw) {
        node = nodes_[node].child[i];
        if (node < 0) return std::nullopt;
    }
    return node;
}

std::optional<std::vector<int>> ObservationTree::run_outputs(int node, const std::vector<int>& iw) const {
    std::vector<int> outs;
    outs.reserve(iw.size());
    for (int i : iw) {
        if (nodes_[node].child[i] < 0) return std::nullopt;
        outs.push_back(nodes_[node].out[i]);
        node = nodes_[node].child[i];
    }
    return outs;
}

int ObservationTree::add_observation(const std::vector<int>& iw, const std::vector<int>& outs) {
    if (iw.size() != outs.size())
        throw std::invalid_argument("add_observation: input/output length mismatch");
    int at = 0;
    bool grew = false;
    for (std::size_t step = 0; step < iw.size(); ++step) {
        int i = iw[step];
        if (nodes_[at].child[i] >= 0) {
            if (nodes_[at].out[i] != outs[step])
                throw std::runtime_error(
                    "add_observation: output conflict on existing edge (nondeterministic SUL)");
            at = nodes_[at].child[i];
        } else {
            int child = new_node(at, i);
            nodes_[at].child[i] = child;
            nodes_[at].out[i] = outs[step];
            at = child;
            grew = true;
        }
    }
    if (grew) {
        // one bump along the deepest path covers every ancestor of every new node
        for (int up = at; up >= 0; up = nodes_[up].parent) ++nodes_[up].version;
    }
    return at;
}

int ObservationTree::add_observation(const Word& w, const OutputWord& outs) {
    if (w.size() != outs.size())
        throw std::invalid_argument("add_observation: input/output length mismatch");
    std::vector<int> iw;
    iw.reserve(w.size());
    for (const auto& sym : w) {
        int i = input_index(sym);
        if (i < 0) throw std::invalid_argument("add_observation: symbol outside alphabet: " + sym);
        iw.push_back(i);
    }
    std::vector<int> ow;
    ow.reserve(outs.size());
    for (const auto& sym : outs) ow.push_back(intern_output(sym));
    return add_observation(iw, ow);
}

bool ObservationTree::contains(const std::vector<int>& iw) const {
    return run_state(0, iw).has_value();
}

std::vector<int> ObservationTree::frontier() const {
    std::vector<int> f;
    for (int b : basis_)
        for (int i = 0; i < input_count(); ++i) {
            int c = nodes_[b].child[i];
            if (c >= 0 && !nodes_[c].basis) f.push_back(c);
        }
    std::sort(f.begin(), f.end());
    return f;
}

bool ObservationTree::in_frontier(int node) const {
    if (node == 0 || nodes_[node].basis) return false;
    return nodes_[nodes_[node].parent].basis;
}

void ObservationTree::promote(int node) {
    if (!in_frontier(node)) throw std::logic_error("promote: node is not in the frontier");
    nodes_[node].basis = true;
    basis_.push_back(node);
}

std::optional<std::vector<int>> ObservationTree::apart(int a, int b) const {
    if (a == b) return std::nullopt;
    std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
                        static_cast<std::uint32_t>(std::max(a, b));
    auto it = apart_cache_.find(key);
    if (it != apart_cache_.end()) {
        const ApartEntry& e = it->second;
        if (e.apart) return e.witness;
        if (e.va == nodes_[std::min(a, b)].version && e.vb == nodes_[std::max(a, b)].version)
            return std::nullopt;
    }
    // BFS over common defined suffixes; first hit is the shortest witness with
    // lexicographic tie-break by input order
    struct Entry {
        int x, y, pred, via;
    };
    std::vector<Entry> bfs{{std::min(a, b), std::max(a, b), -1, -1}};
    std::optional<std::vector<int>> found;
    for (std::size_t head = 0; head < bfs.size() && !found; ++head) {
        Entry e = bfs[head];
        for (int i = 0; i < input_count(); ++i) {
            int cx = nodes_[e.x].child[i], cy = nodes_[e.y].child[i];
            if (cx < 0 || cy < 0) continue;
            if (nodes_[e.x].out[i] != nodes_[e.y].out[i]) {
                std::vector<int> rev{i};
                for (int at = static_cast<int>(head); bfs[at].pred >= 0; at = bfs[at].pred)
                    rev.push_back(bfs[at].via);
                std::reverse(rev.begin(), rev.end());
                found = std::move(rev);
                break;
            }
            bfs.push_back({cx, cy, static_cast<int>(head), i});
        }
    }
    ApartEntry entry;
    if (found) {
        entry.apart = true;
        entry.witness = *found;
    } else {
        entry.va = nodes_[std::min(a, b)].version;
        entry.vb = nodes_[std::max(a, b)].version;
    }
    apart_cache_[key] = std::move(entry);
    return found;
}

void ObservationTree::record_witness(int a, int b, const std::vector<int>& witness) const {
    auto oa = run_outputs(a, witness), ob = run_outputs(b, witness);
    if (!oa || !ob || *oa == *ob)
        throw std::logic_error("record_witness: word does not witness apartness");
    std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
                        static_cast<std::uint32_t>(std::max(a, b));
    auto it = apart_cache_.find(key);
    if (it != apart_cache_.end() && it->second.apart) return;
    ApartEntry entry;
    entry.apart = true;
    entry.witness = witness;
    apart_cache_[key] = std::move(entry);
}

std::vector<FrontierEntry> ObservationTree::frontier_status() const {
    std::vector<FrontierEntry> result;
    for (int f : frontier()) {
        int not_apart_from = -1;
        int not_apart_count = 0;
        for (int b : basis_) {
            if (!apart(f, b)) {
                ++not_apart_count;
                not_apart_from = b;
            }
            if (not_apart_count > 1) break;
        }
        if (not_apart_count == 0)
            result.push_back({f, FrontierStatus::isolated, -1});
        else if (not_apart_count == 1)
            result.push_back({f, FrontierStatus::identified, not_apart_from});
        else
            result.push_back({f, FrontierStatus::undetermined, -1});
    }
    return result;
}

bool ObservationTree::adequate() const {
    for (int b : basis_)
        for (int i = 0; i < input_count(); ++i)
            if (nodes_[b].child[i] < 0) return false;
    for (const auto& e : frontier_status())
        if (e.status != FrontierStatus::identified) return false;
    return true;
}

Word ObservationTree::to_symbol_word(const std::vector<int>& iw) const {
    Word w;
    w.reserve(iw.size());
    for (int i : iw) w.push_back(inputs_[i]);
    return w;
}

OutputWord ObservationTree::to_output_word(const std::vector<int>& ow) const {
    OutputWord w;
    w.reserve(ow.size());
    for (int o : ow) w.push_back(out_syms_[o]);
    return w;
}

std::optional<std::vector<int>> apart_ref(const ObservationTree& t, int node, const MealyMachine& r,
                                          int p) {
    if (r.state_count() == 0) return std::nullopt;
    // map tree inputs into r once; -1 marks symbols outside the common alphabet
    std::vector<int> into_r(t.input_count());
    for (int i = 0; i < t.input_count(); ++i) into_r[i] = r.input_index(t.input_symbol(i));
    struct Entry {
        int x, s, pred, via;
    };
    std::vector<Entry> bfs{{node, p, -1, -1}};
    for (std::size_t head = 0; head < bfs.size(); ++head) {
        Entry e = bfs[head];
        for (int i = 0; i < t.input_count(); ++i) {
            int ri = into_r[i];
            int cx = t.child(e.x, i);
            if (cx < 0 || ri < 0 || !r.defined(e.s, ri)) continue;
            if (t.output_symbol(t.edge_output(e.x, i)) != r.output_symbol(r.output(e.s, ri))) {
                std::vector<int> rev{i};
                for (int at = static_cast<int>(head); bfs[at].pred >= 0; at = bfs[at].pred)
                    rev.push_back(bfs[at].via);
                std::reverse(rev.begin(), rev.end());
                return rev;
            }
            bfs.push_back({cx, r.next(e.s, ri), static_cast<int>(head), i});
        }
    }
    return std::nullopt;
}

int Hypothesis::state_after(const std::vector<int>& iw) const {
    int s = machine.initial();
    for (int i : iw) s = machine.next(s, i);
    return s;
}

std::vector<int> Hypothesis::outputs_of(const std::vector<int>& iw) const {
    return *machine.run_outputs(machine.initial(), iw);
}

Hypothesis fold_hypothesis(const ObservationTree& t) {
    const auto& basis = t.basis();
    for (int b : basis)
        for (int i = 0; i < t.input_count(); ++i)
            if (!t.defined(b, i))
                throw std::logic_error("fold_hypothesis: basis state with undefined input");
    std::unordered_map<int, int> identified;
    for (const auto& e : t.frontier_status()) {
        if (e.status != FrontierStatus::identified)
            throw std::logic_error("fold_hypothesis: frontier state not identified");
        identified[e.node] = e.identified_with;
    }

    Hypothesis h;
    h.machine = MealyMachine(t.inputs(), static_cast<int>(basis.size()), 0);
    h.node_of_state = basis;
    for (int s = 0; s < static_cast<int>(basis.size()); ++s) h.state_of_node[basis[s]] = s;
    for (int s = 0; s < static_cast<int>(basis.size()); ++s) {
        int b = basis[s];
        for (int i = 0; i < t.input_count(); ++i) {
            int c = t.child(b, i);
            int target = t.in_basis(c) ? c : identified.at(c);
            h.machine.set_edge(s, i, h.state_of_node.at(target),
                               h.machine.intern_output(t.output_symbol(t.edge_output(b, i))));
        }
    }
    return h;
}

std::optional<std::vector<int>> check_consistency(const ObservationTree& t, const Hypothesis& h) {
    struct Entry {
        int node, state, pred, via;
    };
    std::vector<Entry> bfs{{t.root(), h.machine.initial(), -1, -1}};
    for (std::size_t head = 0; head < bfs.size(); ++head) {
        Entry e = bfs[head];
        for (int i = 0; i < t.input_count(); ++i) {
            int c = t.child(e.node, i);
            if (c < 0) continue;
            if (t.output_symbol(t.edge_output(e.node, i)) !=
                h.machine.output_symbol(h.machine.output(e.state, i))) {
                std::vector<int> rev{i};
                for (int at = static_cast<int>(head); bfs[at].pred >= 0; at = bfs[at].pred)
                    rev.push_back(bfs[at].via);
                std::reverse(rev.begin(), rev.end());
                return rev;
            }
            bfs.push_back({c, h.machine.next(e.state, i), static_cast<int>(head), i});
        }
    }
    return std::nullopt;
}

namespace {

// apart_ref for every (tree node, reference state) pair in one bottom-up pass
// (children always carry larger indices than their parents). Output symbols
// are pre-translated between the two intern tables.
std::vector<char> apart_ref_table(const ObservationTree& t, const MealyMachine& r,
                                  const std::vector<int>& into_r) {
    const int o = r.state_count();
    const int n = t.node_count();
    std::vector<char> apart(static_cast<std::size_t>(n) * o, 0);
    for (int x = n - 1; x >= 0; --x) {
        for (int i = 0; i < t.input_count(); ++i) {
            int c = t.child(x, i);
            int ri = into_r[i];
            if (c < 0 || ri < 0) continue;
            const std::string& tree_out = t.output_symbol(t.edge_output(x, i));
            for (int p = 0; p < o; ++p) {
                if (apart[static_cast<std::size_t>(x) * o + p]) continue;
                if (!r.defined(p, ri)) continue;
                if (tree_out != r.output_symbol(r.output(p, ri)) ||
                    apart[static_cast<std::size_t>(c) * o + r.next(p, ri)])
                    apart[static_cast<std::size_t>(x) * o + p] = 1;
            }
        }
    }
    return apart;
}

}  // namespace

NormBreakdown compute_norm_breakdown(const ObservationTree& t, const ReferencePack& pack) {
    NormBreakdown n;
    const auto& basis = t.basis();
    std::vector<int> frontier = t.frontier();
    const long long nb = static_cast<long long>(basis.size());
    n.basis_quad = nb * (nb + 1);
    for (int b : basis)
        for (int i = 0; i < t.input_count(); ++i)
            if (t.defined(b, i)) ++n.basis_defined;
    for (int b : basis)
        for (int f : frontier)
            if (t.apart(b, f)) ++n.basis_frontier;

    if (pack.empty()) return n;
    const MealyMachine& r = pack.merged;
    std::vector<int> into_r(t.input_count());
    for (int i = 0; i < t.input_count(); ++i) into_r[i] = r.input_index(t.input_symbol(i));

    // ordered (p,p') triples whose separator is defined in the tree from q
    auto to_tree_word = [&](const Word& w, std::vector<int>& iw) {
        iw.clear();
        for (const auto& sym : w) {
            int i = t.input_index(sym);
            if (i < 0) return false;
            iw.push_back(i);
        }
        return true;
    };
    {
        std::vector<int> sep_iw;
        for (const auto& [pp, w] : pack.sep_table) {
            (void)pp;
            if (!to_tree_word(w, sep_iw)) continue;
            for (int b : basis)
                if (t.run_state(b, sep_iw)) n.sep_triples += 2;  // (p,p') and (p',p)
        }
    }

    {
        const int o = r.state_count();
        std::vector<char> table = apart_ref_table(t, r, into_r);
        for (int b : basis)
            for (int p = 0; p < o; ++p) n.ref_apart += table[static_cast<std::size_t>(b) * o + p];
        for (int f : frontier)
            for (int p = 0; p < o; ++p) n.ref_apart += table[static_cast<std::size_t>(f) * o + p];
    }

    // basis-frontier pairs whose access-image separator is defined from both;
    // counted only when both access words are defined in the merged machine
    auto merged_state_of = [&](int node) -> int {
        int s = r.initial();
        for (int i : t.access(node)) {
            int ri = into_r[i];
            if (ri < 0 || !r.defined(s, ri)) return -1;
            s = r.next(s, ri);
        }
        return s;
    };
    std::vector<int> basis_img(basis.size()), frontier_img(frontier.size());
    for (std::size_t x = 0; x < basis.size(); ++x) basis_img[x] = merged_state_of(basis[x]);
    for (std::size_t x = 0; x < frontier.size(); ++x) frontier_img[x] = merged_state_of(frontier[x]);
    for (std::size_t x = 0; x < basis.size(); ++x) {
        for (std::size_t y = 0; y < frontier.size(); ++y) {
            int p = basis_img[x], p2 = frontier_img[y];
            if (p < 0 || p2 < 0 || p == p2) continue;
            auto it = pack.sep_table.find({std::min(p, p2), std::max(p, p2)});
            if (it == pack.sep_table.end()) continue;
            std::vector<int> sep_iw;
            if (to_tree_word(it->second, sep_iw) && t.run_state(basis[x], sep_iw) &&
                t.run_state(frontier[y], sep_iw))
                ++n.bf_sep;
        }
    }
    return n;
}

long long compute_norm(const ObservationTree& t, const ReferencePack& pack) {
    return compute_norm_breakdown(t, pack).total();
}

std::string write_tree_dot(const ObservationTree& t) {
    std::ostringstream os;
    os << "digraph tree {\n";
    std::vector<char> frontier_flag(t.node_count(), 0);
    for (int f : t.frontier()) frontier_flag[f] = 1;
    for (int q = 0; q < t.node_count(); ++q) {
        const char* role = t.in_basis(q) ? "basis" : (frontier_flag[q] ? "frontier" : "inner");
        os << "  n" << q << " [label=\"" << q << " (" << role << ")\"];\n";
    }
    for (int q = 0; q < t.node_count(); ++q)
        for (int i = 0; i < t.input_count(); ++i)
            if (t.defined(q, i))
                os << "  n" << q << " -> n" << t.child(q, i) << " [label=\"" << t.input_symbol(i)
                   << " / " << t.output_symbol(t.edge_output(q, i)) << "\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace mlearn
