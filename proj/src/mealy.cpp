#include "mlearn/mealy.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace mlearn {

MealyMachine::MealyMachine(std::vector<std::string> inputs, int state_count, int initial)
    : inputs_(std::move(inputs)), initial_(initial) {
    for (int i = 0; i < static_cast<int>(inputs_.size()); ++i) {
        if (!input_idx_.emplace(inputs_[i], i).second)
            throw std::invalid_argument("duplicate input symbol: " + inputs_[i]);
    }
    trans_.assign(state_count, std::vector<int>(inputs_.size(), -1));
    out_.assign(state_count, std::vector<int>(inputs_.size(), -1));
    if (state_count > 0 && (initial < 0 || initial >= state_count))
        throw std::invalid_argument("initial state out of range");
}

void MealyMachine::set_initial(int q) {
    if (q < 0 || q >= state_count()) throw std::invalid_argument("initial state out of range");
    initial_ = q;
}

int MealyMachine::input_index(const std::string& sym) const {
    auto it = input_idx_.find(sym);
    return it == input_idx_.end() ? -1 : it->second;
}

int MealyMachine::output_index(const std::string& sym) const {
    auto it = output_idx_.find(sym);
    return it == output_idx_.end() ? -1 : it->second;
}

int MealyMachine::intern_output(const std::string& sym) {
    auto it = output_idx_.find(sym);
    if (it != output_idx_.end()) return it->second;
    int idx = static_cast<int>(outputs_.size());
    outputs_.push_back(sym);
    output_idx_.emplace(sym, idx);
    return idx;
}

int MealyMachine::add_state() {
    trans_.emplace_back(inputs_.size(), -1);
    out_.emplace_back(inputs_.size(), -1);
    return state_count() - 1;
}

void MealyMachine::set_edge(int q, int i, int target, int o) {
    if (target < 0 || target >= state_count()) throw std::invalid_argument("edge target out of range");
    trans_[q][i] = target;
    out_[q][i] = o;
}

void MealyMachine::set_edge_syms(int q, const std::string& in, int target, const std::string& out) {
    int i = input_index(in);
    if (i < 0) throw std::invalid_argument("unknown input symbol: " + in);
    set_edge(q, i, target, intern_output(out));
}

void MealyMachine::clear_edge(int q, int i) {
    trans_[q][i] = -1;
    out_[q][i] = -1;
}

bool MealyMachine::is_complete() const {
    for (const auto& row : trans_)
        for (int t : row)
            if (t < 0) return false;
    return true;
}

std::optional<std::pair<int, OutputWord>> MealyMachine::run(int q, const Word& w) const {
    OutputWord outs;
    outs.reserve(w.size());
    for (const auto& sym : w) {
        int i = input_index(sym);
        if (i < 0 || !defined(q, i)) return std::nullopt;
        outs.push_back(outputs_[out_[q][i]]);
        q = trans_[q][i];
    }
    return std::make_pair(q, std::move(outs));
}

std::optional<int> MealyMachine::run_state(int q, const std::vector<int>& iw) const {
    for (int i : iw) {
        if (!defined(q, i)) return std::nullopt;
        q = trans_[q][i];
    }
    return q;
}

std::optional<std::vector<int>> MealyMachine::run_outputs(int q, const std::vector<int>& iw) const {
    std::vector<int> outs;
    outs.reserve(iw.size());
    for (int i : iw) {
        if (!defined(q, i)) return std::nullopt;
        outs.push_back(out_[q][i]);
        q = trans_[q][i];
    }
    return outs;
}

std::vector<int> MealyMachine::to_index_word(const Word& w) const {
    std::vector<int> iw;
    iw.reserve(w.size());
    for (const auto& sym : w) {
        int i = input_index(sym);
        if (i < 0) throw std::invalid_argument("symbol outside alphabet: " + sym);
        iw.push_back(i);
    }
    return iw;
}

Word MealyMachine::to_symbol_word(const std::vector<int>& iw) const {
    Word w;
    w.reserve(iw.size());
    for (int i : iw) w.push_back(inputs_[i]);
    return w;
}

std::optional<std::pair<int, OutputWord>> walk(const MealyMachine& m, int q, const Word& w) {
    if (q < 0 || q >= m.state_count()) throw std::invalid_argument("walk: state out of range");
    return m.run(q, w);
}

MealyMachine restrict_inputs(const MealyMachine& m, const std::vector<std::string>& allowed) {
    std::vector<std::string> kept;
    for (const auto& sym : allowed)
        if (m.input_index(sym) >= 0) kept.push_back(sym);
    MealyMachine r(kept, m.state_count(), m.state_count() > 0 ? m.initial() : 0);
    r.state_names = m.state_names;
    for (int q = 0; q < m.state_count(); ++q) {
        for (int ri = 0; ri < static_cast<int>(kept.size()); ++ri) {
            int mi = m.input_index(kept[ri]);
            if (m.defined(q, mi))
                r.set_edge(q, ri, m.next(q, mi), r.intern_output(m.output_symbol(m.output(q, mi))));
        }
    }
    return r;
}

namespace {

// Language-equivalence classes by Moore refinement; class ids follow first
// occurrence in state order. Requires a complete machine.
std::vector<int> moore_classes(const MealyMachine& m, int* count_out) {
    const int n = m.state_count();
    const int k = m.input_count();
    std::vector<int> cls(n, 0);
    int count = n == 0 ? 0 : 1;
    if (n > 0) {
        std::map<std::vector<int>, int> sig2cls;
        for (int q = 0; q < n; ++q) {
            std::vector<int> sig(k);
            for (int i = 0; i < k; ++i) sig[i] = m.output(q, i);
            auto [it, fresh] = sig2cls.emplace(std::move(sig), static_cast<int>(sig2cls.size()));
            (void)fresh;
            cls[q] = it->second;
        }
        count = static_cast<int>(sig2cls.size());
    }
    for (;;) {
        std::map<std::vector<int>, int> sig2cls;
        std::vector<int> next(n);
        for (int q = 0; q < n; ++q) {
            std::vector<int> sig;
            sig.reserve(k + 1);
            sig.push_back(cls[q]);
            for (int i = 0; i < k; ++i) sig.push_back(cls[m.next(q, i)]);
            auto [it, fresh] = sig2cls.emplace(std::move(sig), static_cast<int>(sig2cls.size()));
            (void)fresh;
            next[q] = it->second;
        }
        int next_count = static_cast<int>(sig2cls.size());
        if (next_count == count) {
            cls = std::move(next);
            break;
        }
        cls = std::move(next);
        count = next_count;
    }
    if (count_out) *count_out = count;
    return cls;
}

}  // namespace

Minimized minimize_restricted(const MealyMachine& m, const std::vector<std::string>& allowed) {
    MealyMachine r = restrict_inputs(m, allowed);
    if (!r.is_complete())
        throw std::invalid_argument("minimize_restricted: restriction is not complete (malformed reference)");
    const int n = r.state_count();
    const int k = r.input_count();
    if (n == 0) throw std::invalid_argument("minimize_restricted: empty machine");

    int class_count = 0;
    std::vector<int> cls = moore_classes(r, &class_count);

    // representative = smallest state index per class
    std::vector<int> rep(class_count, -1);
    for (int q = 0; q < n; ++q)
        if (rep[cls[q]] < 0) rep[cls[q]] = q;

    // BFS over reachable classes; this numbering makes access sequences canonical
    std::vector<int> renum(class_count, -1);
    std::vector<int> order;
    std::deque<int> queue{cls[r.initial()]};
    renum[cls[r.initial()]] = 0;
    order.push_back(cls[r.initial()]);
    while (!queue.empty()) {
        int c = queue.front();
        queue.pop_front();
        for (int i = 0; i < k; ++i) {
            int c2 = cls[r.next(rep[c], i)];
            if (renum[c2] < 0) {
                renum[c2] = static_cast<int>(order.size());
                order.push_back(c2);
                queue.push_back(c2);
            }
        }
    }

    Minimized result;
    result.machine = MealyMachine(r.inputs(), static_cast<int>(order.size()), 0);
    for (int idx = 0; idx < static_cast<int>(order.size()); ++idx) {
        int q = rep[order[idx]];
        for (int i = 0; i < k; ++i)
            result.machine.set_edge(idx, i, renum[cls[r.next(q, i)]],
                                    result.machine.intern_output(r.output_symbol(r.output(q, i))));
    }
    result.class_of.assign(n, -1);
    for (int q = 0; q < n; ++q) result.class_of[q] = renum[cls[q]];
    return result;
}

std::optional<Word> language_equivalent(const MealyMachine& m1, const MealyMachine& m2) {
    auto sorted = [](std::vector<std::string> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    if (sorted(m1.inputs()) != sorted(m2.inputs()))
        throw std::invalid_argument("language_equivalent: alphabet mismatch");
    if (!m1.is_complete() || !m2.is_complete())
        throw std::invalid_argument("language_equivalent: both machines must be complete");

    const int k = m1.input_count();
    std::vector<int> map2(k);
    for (int i = 0; i < k; ++i) map2[i] = m2.input_index(m1.input_symbol(i));

    const std::int64_t n2 = m2.state_count();
    std::vector<char> seen(static_cast<std::size_t>(m1.state_count()) * m2.state_count(), 0);
    struct Entry {
        int p, q;
        int pred;  // index into bfs
        int via;   // input index (m1)
    };
    std::vector<Entry> bfs;
    bfs.push_back({m1.initial(), m2.initial(), -1, -1});
    seen[m1.initial() * n2 + m2.initial()] = 1;
    auto build_word = [&](int node, int last_input) {
        std::vector<int> rev{last_input};
        for (int at = node; bfs[at].pred >= 0; at = bfs[at].pred) rev.push_back(bfs[at].via);
        Word w;
        for (auto it = rev.rbegin(); it != rev.rend(); ++it) w.push_back(m1.input_symbol(*it));
        return w;
    };
    for (std::size_t head = 0; head < bfs.size(); ++head) {
        auto [p, q, pred, via] = bfs[head];
        (void)pred;
        (void)via;
        for (int i = 0; i < k; ++i) {
            if (m1.output_symbol(m1.output(p, i)) != m2.output_symbol(m2.output(q, map2[i])))
                return build_word(static_cast<int>(head), i);
            int np = m1.next(p, i), nq = m2.next(q, map2[i]);
            if (!seen[np * n2 + nq]) {
                seen[np * n2 + nq] = 1;
                bfs.push_back({np, nq, static_cast<int>(head), i});
            }
        }
    }
    return std::nullopt;
}

std::vector<Word> state_cover(const MealyMachine& m) {
    const int n = m.state_count();
    const int k = m.input_count();
    std::vector<int> pred(n, -2), via(n, -1);
    pred[m.initial()] = -1;
    std::deque<int> queue{m.initial()};
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (int i = 0; i < k; ++i) {
            if (!m.defined(q, i)) continue;
            int t = m.next(q, i);
            if (pred[t] == -2) {
                pred[t] = q;
                via[t] = i;
                queue.push_back(t);
            }
        }
    }
    std::vector<Word> cover(n);
    for (int q = 0; q < n; ++q) {
        if (pred[q] == -2) throw std::logic_error("state_cover: unreachable state (minimize first)");
        std::vector<int> rev;
        for (int at = q; pred[at] != -1; at = pred[at]) rev.push_back(via[at]);
        for (auto it = rev.rbegin(); it != rev.rend(); ++it) cover[q].push_back(m.input_symbol(*it));
    }
    return cover;
}

std::vector<int> run_outputs_bot(const MealyMachine& m, int q, const std::vector<int>& iw) {
    std::vector<int> outs;
    outs.reserve(iw.size());
    for (int i : iw) {
        if (q < 0 || !m.defined(q, i)) {
            outs.push_back(-2);
            q = -1;
        } else {
            outs.push_back(m.output(q, i));
            q = m.next(q, i);
        }
    }
    return outs;
}

namespace {

// Shortest separating words for every state pair of `m` (with the undefined
// pseudo-output when total). Encodes words as (first input, successor pair)
// chains. Pair key packs (min,max).
struct PairSeparators {
    int n = 0;
    std::vector<int> dist;         // by pair key; -1 = never separated
    std::vector<int> first_input;  // lex-least input achieving dist

    int key(int p, int q) const { return std::min(p, q) * n + std::max(p, q); }

    bool apart(int p, int q) const { return p != q && dist[key(p, q)] >= 0; }

    std::vector<int> word(const MealyMachine& m, int p, int q, bool total) const {
        std::vector<int> w;
        while (p != q && dist[key(p, q)] >= 0) {
            int i = first_input[key(p, q)];
            w.push_back(i);
            if (dist[key(p, q)] == 1) break;
            auto step = [&](int s) {
                if (s < 0 || !m.defined(s, i)) return -1;
                return m.next(s, i);
            };
            int np = step(p), nq = step(q);
            (void)total;
            p = np;
            q = nq;
        }
        return w;
    }
};

PairSeparators pair_separators(const MealyMachine& m, bool total) {
    PairSeparators ps;
    const int n = m.state_count();
    const int k = m.input_count();
    ps.n = n;
    ps.dist.assign(static_cast<std::size_t>(n) * n, -1);
    ps.first_input.assign(static_cast<std::size_t>(n) * n, -1);

    auto out_of = [&](int q, int i) {  // -2 encodes the undefined pseudo-output
        if (q < 0 || !m.defined(q, i)) return -2;
        return m.output(q, i);
    };
    auto next_of = [&](int q, int i) {
        if (q < 0 || !m.defined(q, i)) return -1;
        return m.next(q, i);
    };

    std::deque<int> queue;
    std::vector<std::pair<int, int>> pair_of(static_cast<std::size_t>(n) * n, {-1, -1});
    // level 1: direct output difference (or definedness difference when total)
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            pair_of[ps.key(p, q)] = {p, q};
            for (int i = 0; i < k; ++i) {
                int op = out_of(p, i), oq = out_of(q, i);
                if (!total && (op == -2 || oq == -2))
                    throw std::logic_error("separating_family: machine must be complete unless total");
                if (op != oq) {
                    ps.dist[ps.key(p, q)] = 1;
                    ps.first_input[ps.key(p, q)] = i;
                    queue.push_back(ps.key(p, q));
                    break;
                }
            }
        }
    }
    // reverse adjacency over pair transitions
    std::unordered_map<int, std::vector<std::pair<int, int>>> rev;  // succ key -> (pred key, input)
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            for (int i = 0; i < k; ++i) {
                int np = next_of(p, i), nq = next_of(q, i);
                if (np < 0 || nq < 0 || np == nq) continue;
                rev[ps.key(np, nq)].push_back({ps.key(p, q), i});
            }
        }
    }
    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        auto it = rev.find(cur);
        if (it == rev.end()) continue;
        for (auto [pred, via] : it->second) {
            (void)via;
            if (ps.dist[pred] >= 0) continue;
            // choose the lex-least input reaching a pair one level down
            auto [p, q] = pair_of[pred];
            int best = -1;
            for (int i = 0; i < k; ++i) {
                int np = next_of(p, i), nq = next_of(q, i);
                if (np < 0 || nq < 0 || np == nq) continue;
                if (ps.dist[ps.key(np, nq)] == ps.dist[cur]) {
                    best = i;
                    break;
                }
            }
            if (best < 0) continue;
            ps.dist[pred] = ps.dist[cur] + 1;
            ps.first_input[pred] = best;
            queue.push_back(pred);
        }
    }
    return ps;
}

}  // namespace

SeparatingFamily separating_family(const MealyMachine& m, bool total) {
    const int n = m.state_count();
    if (!total && !m.is_complete())
        throw std::invalid_argument("separating_family: machine must be complete unless total");
    PairSeparators ps = pair_separators(m, total);

    SeparatingFamily fam;
    fam.identifiers.assign(n, {});
    std::vector<std::vector<std::vector<int>>> acc(n);  // index words per state

    // splitting tree: each block is split by the shortest (then lex-least)
    // separator among its apart pairs; the word joins every member's identifier
    std::vector<std::vector<int>> stack;
    {
        std::vector<int> all(n);
        for (int q = 0; q < n; ++q) all[q] = q;
        stack.push_back(std::move(all));
    }
    while (!stack.empty()) {
        std::vector<int> block = std::move(stack.back());
        stack.pop_back();
        if (block.size() < 2) continue;
        std::vector<int> best_word;
        bool have = false;
        for (std::size_t a = 0; a < block.size(); ++a) {
            for (std::size_t b = a + 1; b < block.size(); ++b) {
                if (!ps.apart(block[a], block[b])) continue;
                std::vector<int> w = ps.word(m, block[a], block[b], total);
                if (!have || w.size() < best_word.size() ||
                    (w.size() == best_word.size() && w < best_word)) {
                    best_word = std::move(w);
                    have = true;
                }
            }
        }
        if (!have) continue;  // all members pairwise matched
        std::map<std::vector<int>, std::vector<int>> groups;
        for (int q : block) {
            acc[q].push_back(best_word);
            groups[run_outputs_bot(m, q, best_word)].push_back(q);
        }
        for (auto& [outs, members] : groups) {
            (void)outs;
            if (members.size() >= 2) stack.push_back(std::move(members));
        }
    }

    for (int q = 0; q < n; ++q) {
        auto& words = acc[q];
        std::sort(words.begin(), words.end(), [](const auto& a, const auto& b) {
            if (a.size() != b.size()) return a.size() < b.size();
            return a < b;
        });
        words.erase(std::unique(words.begin(), words.end()), words.end());
        for (const auto& w : words) fam.identifiers[q].push_back(m.to_symbol_word(w));
    }
    return fam;
}

namespace {

std::optional<Word> product_search(const MealyMachine& m1, int p, const MealyMachine& m2, int q,
                                   bool total) {
    std::vector<std::string> common;
    for (const auto& sym : m1.inputs())
        if (m2.input_index(sym) >= 0) common.push_back(sym);
    const int kc = static_cast<int>(common.size());
    std::vector<int> i1(kc), i2(kc);
    for (int i = 0; i < kc; ++i) {
        i1[i] = m1.input_index(common[i]);
        i2[i] = m2.input_index(common[i]);
    }
    const std::int64_t n2 = m2.state_count();
    std::vector<char> seen(static_cast<std::size_t>(m1.state_count()) * m2.state_count(), 0);
    struct Entry {
        int p, q, pred, via;
    };
    std::vector<Entry> bfs{{p, q, -1, -1}};
    seen[p * n2 + q] = 1;
    auto build = [&](int node, int last) {
        std::vector<int> rev{last};
        for (int at = node; bfs[at].pred >= 0; at = bfs[at].pred) rev.push_back(bfs[at].via);
        Word w;
        for (auto it = rev.rbegin(); it != rev.rend(); ++it) w.push_back(common[*it]);
        return w;
    };
    for (std::size_t head = 0; head < bfs.size(); ++head) {
        Entry e = bfs[head];
        for (int i = 0; i < kc; ++i) {
            bool d1 = m1.defined(e.p, i1[i]), d2 = m2.defined(e.q, i2[i]);
            if (d1 && d2) {
                if (m1.output_symbol(m1.output(e.p, i1[i])) != m2.output_symbol(m2.output(e.q, i2[i])))
                    return build(static_cast<int>(head), i);
                int np = m1.next(e.p, i1[i]), nq = m2.next(e.q, i2[i]);
                if (!seen[np * n2 + nq]) {
                    seen[np * n2 + nq] = 1;
                    bfs.push_back({np, nq, static_cast<int>(head), i});
                }
            } else if (d1 != d2 && total) {
                return build(static_cast<int>(head), i);
            }
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<Word> total_apart(const MealyMachine& m1, int p, const MealyMachine& m2, int q) {
    return product_search(m1, p, m2, q, true);
}

std::optional<Word> apart_states(const MealyMachine& m1, int p, const MealyMachine& m2, int q) {
    return product_search(m1, p, m2, q, false);
}

bool structurally_equal(const MealyMachine& a, const MealyMachine& b) {
    if (a.state_count() != b.state_count() || a.initial() != b.initial()) return false;
    auto sorted = [](std::vector<std::string> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    if (sorted(a.inputs()) != sorted(b.inputs())) return false;
    for (int q = 0; q < a.state_count(); ++q) {
        for (int i = 0; i < a.input_count(); ++i) {
            int j = b.input_index(a.input_symbol(i));
            if (a.defined(q, i) != b.defined(q, j)) return false;
            if (!a.defined(q, i)) continue;
            if (a.next(q, i) != b.next(q, j)) return false;
            if (a.output_symbol(a.output(q, i)) != b.output_symbol(b.output(q, j))) return false;
        }
    }
    return true;
}

MealyMachine reorder_inputs(const MealyMachine& m, const std::vector<std::string>& order) {
    std::vector<std::string> arranged;
    std::set<std::string> taken;
    for (const auto& sym : order) {
        if (m.input_index(sym) >= 0 && taken.insert(sym).second) arranged.push_back(sym);
    }
    std::vector<std::string> rest;
    for (const auto& sym : m.inputs())
        if (!taken.count(sym)) rest.push_back(sym);
    std::sort(rest.begin(), rest.end());
    arranged.insert(arranged.end(), rest.begin(), rest.end());
    MealyMachine r = restrict_inputs(m, arranged);
    return r;
}

bool strongly_connected(const MealyMachine& m) {
    const int n = m.state_count();
    if (n == 0) return false;
    auto reach = [&](bool forward) {
        std::vector<std::vector<int>> adj(n);
        for (int q = 0; q < n; ++q)
            for (int i = 0; i < m.input_count(); ++i)
                if (m.defined(q, i)) {
                    if (forward)
                        adj[q].push_back(m.next(q, i));
                    else
                        adj[m.next(q, i)].push_back(q);
                }
        std::vector<char> seen(n, 0);
        std::deque<int> queue{0};
        seen[0] = 1;
        int count = 1;
        while (!queue.empty()) {
            int q = queue.front();
            queue.pop_front();
            for (int t : adj[q])
                if (!seen[t]) {
                    seen[t] = 1;
                    ++count;
                    queue.push_back(t);
                }
        }
        return count == n;
    };
    return reach(true) && reach(false);
}

}  // namespace mlearn
