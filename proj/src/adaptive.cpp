#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "mlearn/learner.hpp"

// Rebuilding phase and the state-matching rules. Scans are deterministic:
// cover words in order, then basis/reference states in creation/declaration
// order, then inputs in alphabet order.

namespace mlearn {

namespace {

bool int_word_less(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

}  // namespace

void Learner::rule_rebuilding(int q, int q2, int i, int scope) {
    if (!tree_.in_basis(q) || !tree_.in_basis(q2))
        throw std::logic_error("rebuilding: states must be in the basis");
    int child = tree_.defined(q, i) ? tree_.child(q, i) : -1;
    if (child >= 0 && tree_.in_basis(child))
        throw std::logic_error("rebuilding: successor already in basis");
    if (child >= 0 && tree_.apart(q2, child))
        throw std::logic_error("rebuilding: successor already apart from q'");
    Word access_qi = tree_.access_word(q);
    access_qi.push_back(tree_.input_symbol(i));
    Word access_q2 = tree_.access_word(q2);
    if (!pack_->cover_contains(access_qi) || !pack_->cover_contains(access_q2))
        throw std::logic_error("rebuilding: access sequences not in the reference cover");
    auto p1 = pack_->ref_state(scope, access_qi);
    auto p2 = pack_->ref_state(scope, access_q2);
    if (!p1 || !p2) throw std::logic_error("rebuilding: access sequence undefined in reference");
    const Word& sigma = pack_->sep(*p1, *p2);  // throws unless apart within one scope
    auto sigma_iw = to_tree_word(sigma);
    auto word1 = to_tree_word(access_qi);
    word1.insert(word1.end(), sigma_iw.begin(), sigma_iw.end());
    auto word2 = to_tree_word(access_q2);
    word2.insert(word2.end(), sigma_iw.begin(), sigma_iw.end());
    if (tree_.contains(word1) && tree_.contains(word2))
        throw std::logic_error("rebuilding: both queries already answered");
    oq(word1);
    oq(word2);
    assert(tree_.contains(word1) && tree_.contains(word2));
    applied(rules::rebuilding, "q=" + std::to_string(q) + " q'=" + std::to_string(q2) +
                                   " i=" + tree_.input_symbol(i) + " scope=" + std::to_string(scope));
}

void Learner::rule_prioritized_promotion(int r) {
    if (!tree_.in_frontier(r)) throw std::logic_error("prioritized promotion: node not in frontier");
    if (!pack_->cover_contains(tree_.access_word(r)))
        throw std::logic_error("prioritized promotion: access sequence not in the reference cover");
    for (int b : tree_.basis())
        if (!tree_.apart(r, b)) throw std::logic_error("prioritized promotion: node is not isolated");
    tree_.promote(r);
    applied(rules::prioritized_promotion, "r=" + std::to_string(r));
}

bool Learner::phase1_step() {
    for (const Word& w : pack_->cover) {
        auto iw = to_tree_word(w);
        auto node = tree_.run_state(tree_.root(), iw);
        // prioritized promotion first at this cover word
        if (node && tree_.in_frontier(*node)) {
            bool isolated = true;
            for (int b : tree_.basis())
                if (!tree_.apart(*node, b)) {
                    isolated = false;
                    break;
                }
            if (isolated) {
                rule_prioritized_promotion(*node);
                return true;
            }
        }
        if (w.empty()) continue;
        // rebuilding with access(q)·i = w
        Word prefix(w.begin(), w.end() - 1);
        auto qn = tree_.run_state(tree_.root(), to_tree_word(prefix));
        if (!qn || !tree_.in_basis(*qn)) continue;
        int q = *qn;
        int i = tree_.input_index(w.back());
        int child = tree_.defined(q, i) ? tree_.child(q, i) : -1;
        if (child >= 0 && tree_.in_basis(child)) continue;
        for (int q2 : tree_.basis()) {
            if (child >= 0 && tree_.apart(q2, child)) continue;
            Word access_q2 = tree_.access_word(q2);
            if (!pack_->cover_contains(access_q2)) continue;
            for (int scope = 0; scope < pack_->scope_count(); ++scope) {
                auto p1 = pack_->ref_state(scope, w);
                auto p2 = pack_->ref_state(scope, access_q2);
                if (!p1 || !p2 || *p1 == *p2) continue;
                if (!pack_->sep_table.count({std::min(*p1, *p2), std::max(*p1, *p2)})) continue;
                auto sigma_iw = to_tree_word(pack_->sep(*p1, *p2));
                auto word1 = concat(iw, sigma_iw);
                auto word2 = concat(to_tree_word(access_q2), sigma_iw);
                if (tree_.contains(word1) && tree_.contains(word2)) continue;
                rule_rebuilding(q, q2, i, scope);
                return true;
            }
        }
    }
    return false;
}

void Learner::run_phase1() {
    if (pack_->empty()) {
        phase1_basis_ = static_cast<int>(tree_.basis().size());
        return;
    }
    while (phase1_step()) {
    }
    phase1_basis_ = static_cast<int>(tree_.basis().size());
}

// ---------------------------------------------------------------------------
// state matching rules

bool Learner::matches(int p, int basis_node, bool approximate) {
    if (approximate) return matching_.approx_match(basis_node, p);
    return matching_.exact_match(tree_, basis_node, p);
}

void Learner::rule_match_separation(int q, int q2, int p, int i, bool approximate) {
    matching_.refresh(tree_);
    const MealyMachine& r = pack_->merged;
    if (!tree_.in_basis(q) || !tree_.in_basis(q2))
        throw std::logic_error("match separation: states must be in the basis");
    if (!tree_.defined(q, i) || !tree_.in_frontier(tree_.child(q, i)))
        throw std::logic_error("match separation: no frontier successor");
    int frontier_node = tree_.child(q, i);
    if (tree_.apart(frontier_node, q2))
        throw std::logic_error("match separation: already apart from q'");
    int ri = r.input_index(tree_.input_symbol(i));
    if (ri < 0 || !r.defined(p, ri))
        throw std::logic_error("match separation: reference successor undefined");
    int p2 = r.next(p, ri);
    if (!matches(p, q, approximate)) throw std::logic_error("match separation: p does not match q");
    if (approximate && matching_.ref_witness(tree_, frontier_node, p2))
        throw std::logic_error("match separation: frontier already apart from reference successor");
    for (int b : tree_.basis())
        if (matches(p2, b, approximate))
            throw std::logic_error("match separation: reference successor matches a basis state");
    auto sigma = matching_.ref_witness(tree_, q2, p2);
    if (!sigma) throw std::logic_error("match separation: q' and reference successor not apart");
    auto word = tree_.access(q);
    word.push_back(i);
    word.insert(word.end(), sigma->begin(), sigma->end());
    oq(word);
    assert(tree_.apart(frontier_node, q2) ||
           matching_.ref_witness(tree_, frontier_node, p2).has_value());
    applied(approximate ? rules::approx_match_separation : rules::match_separation,
            "q=" + std::to_string(q) + " q'=" + std::to_string(q2) + " p=" + std::to_string(p) +
                " i=" + tree_.input_symbol(i));
}

void Learner::rule_match_refinement(int q, int p, int p2, bool approximate) {
    matching_.refresh(tree_);
    if (!tree_.in_basis(q)) throw std::logic_error("match refinement: state must be in the basis");
    if (p == p2) throw std::logic_error("match refinement: states must differ");
    if (!matches(p, q, approximate) || !matches(p2, q, approximate))
        throw std::logic_error("match refinement: both reference states must match q");
    const Word& sigma = pack_->sep(p, p2);
    auto sigma_iw = to_tree_word(sigma);
    if (approximate && tree_.contains(concat(tree_.access(q), sigma_iw)))
        throw std::logic_error("match refinement: separator already defined from q");
    auto word = concat(tree_.access(q), sigma_iw);
    oq(word);
    applied(approximate ? rules::approx_match_refinement : rules::match_refinement,
            "q=" + std::to_string(q) + " p=" + std::to_string(p) + " p'=" + std::to_string(p2));
}

void Learner::rule_prioritized_separation(int r, int q2, int q3, bool approximate) {
    matching_.refresh(tree_);
    if (!tree_.in_frontier(r)) throw std::logic_error("prioritized separation: node not in frontier");
    if (tree_.apart(r, q2) || tree_.apart(r, q3))
        throw std::logic_error("prioritized separation: frontier state already apart");
    int q = tree_.parent(r);
    int i = tree_.parent_input(r);
    if (!tree_.in_basis(q)) throw std::logic_error("prioritized separation: parent not in basis");
    const MealyMachine& m = pack_->merged;
    int ri = m.input_index(tree_.input_symbol(i));
    // identifiers of the reference successors of states matched with the parent
    std::vector<std::vector<int>> pool;
    for (int p = 0; p < m.state_count(); ++p) {
        if (ri < 0 || !m.defined(p, ri)) continue;
        if (!matches(p, q, approximate)) continue;
        for (const Word& w : pack_->identifiers[m.next(p, ri)]) {
            auto iw = to_tree_word(w);
            if (std::find(pool.begin(), pool.end(), iw) == pool.end()) pool.push_back(std::move(iw));
        }
    }
    std::sort(pool.begin(), pool.end(), int_word_less);
    for (const auto& sigma : pool) {
        auto o2 = tree_.run_outputs(q2, sigma);
        auto o3 = tree_.run_outputs(q3, sigma);
        if (!o2 || !o3 || *o2 == *o3) continue;  // sigma must witness q2 # q3 in the tree
        auto word = concat(tree_.access(r), sigma);
        oq(word);
        applied(approximate ? rules::approx_prioritized_separation : rules::prioritized_separation,
                "r=" + std::to_string(r) + " q'=" + std::to_string(q2) +
                    " q''=" + std::to_string(q3));
        return;
    }
    throw std::logic_error("prioritized separation: no matched identifier separates the pair");
}

bool Learner::try_prioritized_separation(bool approximate) {
    if (pack_->empty()) return false;
    matching_.refresh(tree_);
    const MealyMachine& m = pack_->merged;
    for (int r : tree_.frontier()) {
        auto close = basis_not_apart(r);
        if (close.size() < 2) continue;
        int q = tree_.parent(r);
        int i = tree_.parent_input(r);
        int ri = m.input_index(tree_.input_symbol(i));
        if (ri < 0) continue;
        std::vector<std::vector<int>> pool;
        int predictor = -1;  // first matched parent image: predicts r's responses
        for (int p = 0; p < m.state_count(); ++p) {
            if (!m.defined(p, ri)) continue;
            if (!matches(p, q, approximate)) continue;
            if (predictor < 0) predictor = m.next(p, ri);
            for (const Word& w : pack_->identifiers[m.next(p, ri)]) {
                auto iw = to_tree_word(w);
                if (std::find(pool.begin(), pool.end(), iw) == pool.end())
                    pool.push_back(std::move(iw));
            }
        }
        std::sort(pool.begin(), pool.end(), int_word_less);
        // pick the candidate expected to separate r from the most basis states,
        // judging r's response by the reference prediction
        const std::vector<int>* best = nullptr;
        int best_q2 = -1, best_q3 = -1;
        int best_score = -1;
        for (const auto& sigma : pool) {
            int q2 = -1, q3 = -1;
            int score = 0;
            std::vector<int> predicted;
            if (predictor >= 0) {
                std::vector<int> ref_iw;
                bool in_ref = true;
                for (int ti : sigma) {
                    int rsym = m.input_index(tree_.input_symbol(ti));
                    if (rsym < 0) in_ref = false;
                    ref_iw.push_back(rsym);
                }
                if (in_ref) predicted = run_outputs_bot(m, predictor, ref_iw);
            }
            for (int b : close) {
                auto outs = tree_.run_outputs(b, sigma);
                if (!outs) continue;
                if (q2 < 0)
                    q2 = b;
                else if (q3 < 0 && *tree_.run_outputs(q2, sigma) != *outs)
                    q3 = b;
                if (!predicted.empty()) {
                    bool differs = false;
                    for (std::size_t x = 0; x < outs->size(); ++x) {
                        int want = predicted[x];
                        if (want == -2 ||
                            m.output_symbol(want) != tree_.output_symbol((*outs)[x])) {
                            differs = want != -2;
                            break;
                        }
                    }
                    if (differs) ++score;
                }
            }
            if (q3 < 0) continue;  // sigma does not witness any close pair apart
            if (score > best_score) {
                best = &sigma;
                best_q2 = q2;
                best_q3 = q3;
                best_score = score;
            }
        }
        if (best) {
            auto word = concat(tree_.access(r), *best);
            oq(word);
            applied(approximate ? rules::approx_prioritized_separation
                                : rules::prioritized_separation,
                    "r=" + std::to_string(r) + " q'=" + std::to_string(best_q2) +
                        " q''=" + std::to_string(best_q3));
            return true;
        }
    }
    return false;
}

bool Learner::try_match_refinement(bool approximate) {
    if (pack_->empty()) return false;
    matching_.refresh(tree_);
    const MealyMachine& m = pack_->merged;
    for (int q : tree_.basis()) {
        for (int p = 0; p < m.state_count(); ++p) {
            if (!matches(p, q, approximate)) continue;
            for (int p2 = p + 1; p2 < m.state_count(); ++p2) {
                if (pack_->scope_of[p] != pack_->scope_of[p2]) continue;
                if (!matches(p2, q, approximate)) continue;
                if (!pack_->sep_table.count({p, p2})) continue;
                if (approximate &&
                    tree_.contains(concat(tree_.access(q), to_tree_word(pack_->sep(p, p2)))))
                    continue;
                rule_match_refinement(q, p, p2, approximate);
                return true;
            }
        }
    }
    return false;
}

bool Learner::try_match_separation(bool approximate) {
    if (pack_->empty()) return false;
    matching_.refresh(tree_);
    const MealyMachine& m = pack_->merged;
    for (int q : tree_.basis()) {
        for (int p = 0; p < m.state_count(); ++p) {
            if (!matches(p, q, approximate)) continue;
            for (int i = 0; i < tree_.input_count(); ++i) {
                if (!tree_.defined(q, i)) continue;
                int r = tree_.child(q, i);
                if (!tree_.in_frontier(r)) continue;
                int ri = m.input_index(tree_.input_symbol(i));
                if (ri < 0 || !m.defined(p, ri)) continue;
                int p2 = m.next(p, ri);
                if (approximate && matching_.ref_witness(tree_, r, p2)) continue;
                bool p2_matched = false;
                for (int b : tree_.basis())
                    if (matches(p2, b, approximate)) {
                        p2_matched = true;
                        break;
                    }
                if (p2_matched) continue;
                for (int q2 : tree_.basis()) {
                    if (tree_.apart(r, q2)) continue;
                    if (!matching_.ref_witness(tree_, q2, p2)) continue;
                    rule_match_separation(q, q2, p, i, approximate);
                    return true;
                }
            }
        }
    }
    return false;
}

}  // namespace mlearn
