#include "mlearn/learner.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "mlearn/rng.hpp"

namespace mlearn {

Ablation parse_ablation(const std::string& id) {
    if (id == "lsharp") return Ablation::lsharp;
    if (id == "R") return Ablation::rebuild;
    if (id == "exact") return Ablation::exact;
    if (id == "approx") return Ablation::approx;
    if (id == "R+exact") return Ablation::rebuild_exact;
    if (id == "full") return Ablation::full;
    throw std::invalid_argument("unknown ablation: " + id +
                                " (expected lsharp, R, exact, approx, R+exact or full)");
}

std::string ablation_id(Ablation a) {
    switch (a) {
        case Ablation::lsharp: return "lsharp";
        case Ablation::rebuild: return "R";
        case Ablation::exact: return "exact";
        case Ablation::approx: return "approx";
        case Ablation::rebuild_exact: return "R+exact";
        case Ablation::full: return "full";
    }
    return "?";
}

namespace rules {
const std::vector<std::string>& all() {
    static const std::vector<std::string> ids = {extension,
                                                 separation,
                                                 promotion,
                                                 equivalence,
                                                 rebuilding,
                                                 prioritized_promotion,
                                                 match_separation,
                                                 match_refinement,
                                                 prioritized_separation,
                                                 approx_match_separation,
                                                 approx_match_refinement,
                                                 approx_prioritized_separation};
    return ids;
}
}  // namespace rules

Learner::Learner(OutputOracle& outputs, EquivalenceOracle* equivalence, const ReferencePack& pack,
                 LearnerConfig config, RunMetrics& metrics)
    : outputs_(&outputs),
      equivalence_(equivalence),
      pack_(&pack),
      config_(std::move(config)),
      metrics_(&metrics),
      tree_(outputs.machine().inputs()),
      matching_(pack),
      rng_(config_.seed) {
    for (const auto& id : rules::all()) metrics_->rule_applications[id] = 0;
}

bool Learner::enabled(const char* rule) const {
    if (!config_.rule_mask.empty()) return config_.rule_mask.count(rule) > 0;
    bool rebuild = config_.ablation == Ablation::rebuild ||
                   config_.ablation == Ablation::rebuild_exact || config_.ablation == Ablation::full;
    bool exact =
        config_.ablation == Ablation::exact || config_.ablation == Ablation::rebuild_exact;
    bool approx = config_.ablation == Ablation::approx || config_.ablation == Ablation::full;
    std::string id = rule;
    if (id == rules::extension || id == rules::separation || id == rules::promotion ||
        id == rules::equivalence)
        return true;
    if (id == rules::rebuilding || id == rules::prioritized_promotion) return rebuild;
    if (id == rules::match_separation || id == rules::match_refinement ||
        id == rules::prioritized_separation)
        return exact;
    return approx;
}

void Learner::applied(const char* rule, std::string detail, bool norm_must_grow) {
    ++applications_;
    ++metrics_->rule_applications[rule];
    EventLogEntry entry{rule, std::move(detail), std::move(pending_queries_), -1};
    pending_queries_.clear();
    bool track_norm = config_.check_norm || config_.log_events;
    if (track_norm) {
        long long norm = compute_norm(tree_, *pack_);
        entry.norm_after = norm;
        if (config_.check_norm && norm_must_grow && pack_->scope_count() <= 1 && last_norm_ >= 0 &&
            norm <= last_norm_)
            throw std::logic_error(std::string("norm did not increase across rule ") + rule);
        last_norm_ = norm;
    }
    if (config_.event_stream) {
        *config_.event_stream << "rule=" << entry.rule;
        if (!entry.detail.empty()) *config_.event_stream << ' ' << entry.detail;
        for (const auto& w : entry.queries) *config_.event_stream << " oq=" << join_word(w);
        if (entry.norm_after >= 0) *config_.event_stream << " norm=" << entry.norm_after;
        *config_.event_stream << '\n';
    }
    if (config_.log_events) events_.push_back(std::move(entry));
    if (config_.match_debug_check) matching_.verify_against_scratch(tree_);
}

int Learner::oq(const std::vector<int>& word) {
    if (auto node = tree_.run_state(tree_.root(), word)) return *node;
    Word w = tree_.to_symbol_word(word);
    OutputWord outs = outputs_->query(w, *metrics_);
    if (config_.log_events || config_.event_stream) pending_queries_.push_back(w);
    return tree_.add_observation(w, outs);
}

std::vector<int> Learner::to_tree_word(const Word& w) const {
    std::vector<int> iw;
    iw.reserve(w.size());
    for (const auto& sym : w) {
        int i = tree_.input_index(sym);
        if (i < 0)
            throw std::logic_error("reference sequence leaves the SUL alphabet: " + sym);
        iw.push_back(i);
    }
    return iw;
}

// ---------------------------------------------------------------------------
// core rules

void Learner::rule_extension(int q, int i) {
    if (!tree_.in_basis(q)) throw std::logic_error("extension: state not in basis");
    if (tree_.defined(q, i)) throw std::logic_error("extension: transition already defined");
    auto word = tree_.access(q);
    word.push_back(i);
    oq(word);
    assert(tree_.defined(q, i));
    applied(rules::extension, "q=" + std::to_string(q) + " i=" + tree_.input_symbol(i));
}

void Learner::rule_promotion(int r) {
    if (!tree_.in_frontier(r)) throw std::logic_error("promotion: node not in frontier");
    for (int b : tree_.basis())
        if (!tree_.apart(r, b)) throw std::logic_error("promotion: node is not isolated");
    tree_.promote(r);
    applied(rules::promotion, "r=" + std::to_string(r));
}

void Learner::rule_separation(int r, int q, int q2) {
    if (!tree_.in_frontier(r)) throw std::logic_error("separation: node not in frontier");
    if (q == q2 || !tree_.in_basis(q) || !tree_.in_basis(q2))
        throw std::logic_error("separation: invalid basis pair");
    if (tree_.apart(r, q) || tree_.apart(r, q2))
        throw std::logic_error("separation: frontier state already apart");
    auto witness = tree_.apart(q, q2);
    if (!witness) throw std::logic_error("separation: basis states not apart");
    auto word = tree_.access(r);
    word.insert(word.end(), witness->begin(), witness->end());
    oq(word);
    assert(tree_.apart(r, q) || tree_.apart(r, q2));
    applied(rules::separation, "r=" + std::to_string(r) + " q=" + std::to_string(q) +
                                   " q'=" + std::to_string(q2));
}

int Learner::hyp_state_node(const Hypothesis& h, int anchor_node, const std::vector<int>& word) const {
    int s = h.state_of_node.at(anchor_node);
    for (int i : word) s = h.machine.next(s, i);
    return h.node_of_state[s];
}

std::vector<int> Learner::shortest_apart_prefix(const Hypothesis& h, const std::vector<int>& word) {
    for (std::size_t len = 0; len <= word.size(); ++len) {
        std::vector<int> prefix(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(len));
        int hyp_node = hyp_state_node(h, tree_.root(), prefix);
        int tree_node = *tree_.run_state(tree_.root(), prefix);
        if (tree_.apart(hyp_node, tree_node)) return prefix;
    }
    throw std::logic_error("counterexample without hypothesis/tree apartness");
}

void Learner::proc_counterexample(const Hypothesis& h, const std::vector<int>& sigma) {
    int anchor = tree_.root();
    std::vector<int> window = sigma;
    {
        auto end = tree_.run_state(anchor, window);
        if (!end) throw std::logic_error("proc_counterexample: word not in tree");
        int hyp_node = hyp_state_node(h, anchor, window);
        if (!tree_.apart(hyp_node, *end))
            throw std::logic_error("proc_counterexample: hypothesis and tree states not apart");
    }
    std::vector<int> witness = *tree_.apart(hyp_state_node(h, anchor, window),
                                            *tree_.run_state(anchor, window));
    for (;;) {
        // slide past steps where hypothesis and tree agree on the node
        while (!window.empty() && tree_.in_basis(tree_.child(anchor, window.front()))) {
            anchor = tree_.child(anchor, window.front());
            window.erase(window.begin());
        }
        if (window.empty()) throw std::logic_error("proc_counterexample: disagreement vanished");
        if (window.size() == 1) {
            int frontier_node = tree_.child(anchor, window.front());
            int identifier = hyp_state_node(h, anchor, window);
            tree_.record_witness(identifier, frontier_node, witness);
            return;
        }
        std::size_t half = (window.size() + 1) / 2;
        std::vector<int> first(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(half));
        std::vector<int> second(window.begin() + static_cast<std::ptrdiff_t>(half), window.end());
        int q_mid = hyp_state_node(h, anchor, first);
        int r_mid = *tree_.run_state(anchor, first);
        // one query resolves which half keeps the disagreement
        auto query = tree_.access(q_mid);
        query.insert(query.end(), second.begin(), second.end());
        query.insert(query.end(), witness.begin(), witness.end());
        oq(query);
        auto out_mid = *tree_.run_outputs(q_mid, second);
        auto out_orig = *tree_.run_outputs(r_mid, second);
        if (out_mid != out_orig) {
            window = std::move(first);
            witness = std::move(second);
            continue;
        }
        int landed = *tree_.run_state(q_mid, second);
        int old_hyp = hyp_state_node(h, anchor, window);
        if (*tree_.run_outputs(landed, witness) != *tree_.run_outputs(old_hyp, witness)) {
            anchor = q_mid;
            window = std::move(second);
        } else {
            window = std::move(first);
            witness = concat(second, witness);
        }
    }
}

Learner::EqOutcome Learner::rule_equivalence() {
    for (int b : tree_.basis())
        for (int i = 0; i < tree_.input_count(); ++i)
            if (!tree_.defined(b, i))
                throw std::logic_error("equivalence: basis state with undefined input");
    for (const auto& e : tree_.frontier_status())
        if (e.status != FrontierStatus::identified)
            throw std::logic_error("equivalence: frontier state not identified");

    Hypothesis h = fold_hypothesis(tree_);
    if (auto inconsistency = check_consistency(tree_, h)) {
        auto sigma = shortest_apart_prefix(h, *inconsistency);
        proc_counterexample(h, sigma);
        applied(rules::equivalence, "internal-inconsistency");
        return EqOutcome::counterexample;
    }
    if (!equivalence_) throw std::logic_error("equivalence: no teacher configured");
    auto ce = equivalence_->query(h.machine, *metrics_);
    if (!ce) {
        result_ = h;
        metrics_->learned_states = h.machine.state_count();
        applied(rules::equivalence, "accepted", /*norm_must_grow=*/false);
        return EqOutcome::accepted;
    }
    // the teacher already ran the word; its outputs enter the tree uncharged
    tree_.add_observation(ce->input, ce->outputs);
    auto sigma = shortest_apart_prefix(h, to_tree_word(ce->input));
    proc_counterexample(h, sigma);
    applied(rules::equivalence, "counterexample len=" + std::to_string(ce->input.size()));
    return EqOutcome::counterexample;
}

// ---------------------------------------------------------------------------
// scanners (deterministic order: node creation, then input order)

bool Learner::try_extension() {
    for (int b : tree_.basis())
        for (int i = 0; i < tree_.input_count(); ++i)
            if (!tree_.defined(b, i)) {
                rule_extension(b, i);
                return true;
            }
    return false;
}

std::vector<int> Learner::basis_not_apart(int r) const {
    std::vector<int> result;
    for (int b : tree_.basis())
        if (!tree_.apart(r, b)) result.push_back(b);
    return result;
}

bool Learner::try_separation() {
    struct Candidate {
        int r, q, q2;
    };
    std::vector<Candidate> candidates;
    for (int r : tree_.frontier()) {
        auto close = basis_not_apart(r);
        if (close.size() < 2) continue;
        if (!config_.randomize_separation) {
            rule_separation(r, close[0], close[1]);
            return true;
        }
        for (std::size_t a = 0; a < close.size(); ++a)
            for (std::size_t b = a + 1; b < close.size(); ++b)
                candidates.push_back({r, close[a], close[b]});
    }
    if (candidates.empty()) return false;
    const auto& pick = candidates[draw_index(rng_, candidates.size())];
    rule_separation(pick.r, pick.q, pick.q2);
    return true;
}

bool Learner::try_promotion() {
    for (int r : tree_.frontier()) {
        bool isolated = true;
        for (int b : tree_.basis())
            if (!tree_.apart(r, b)) {
                isolated = false;
                break;
            }
        if (isolated) {
            rule_promotion(r);
            return true;
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// main loop: rebuilding phase first, then Ex, APS, (S when APS was not
// applicable), P, and on an adequate tree AMR, AMS, Eq

RunStatus Learner::run() {
    if ((config_.check_norm || config_.log_events) && last_norm_ < 0)
        last_norm_ = compute_norm(tree_, *pack_);
    bool use_phase1 = enabled(rules::rebuilding) || enabled(rules::prioritized_promotion);
    if (use_phase1 && !phase1_done_) run_phase1();
    phase1_done_ = true;

    bool exact = enabled(rules::match_separation);
    bool approx = enabled(rules::approx_match_separation);
    bool matching_rules = exact || approx;

    while (applications_ < config_.step_cap) {
        if (enabled(rules::extension) && try_extension()) continue;
        bool ps_applied = false;
        if (matching_rules && enabled(approx ? rules::approx_prioritized_separation
                                             : rules::prioritized_separation))
            ps_applied = try_prioritized_separation(approx);
        if (ps_applied) continue;
        if (enabled(rules::separation) && try_separation()) continue;
        if (enabled(rules::promotion) && try_promotion()) continue;
        if (matching_rules &&
            enabled(approx ? rules::approx_match_refinement : rules::match_refinement) &&
            try_match_refinement(approx))
            continue;
        if (matching_rules &&
            enabled(approx ? rules::approx_match_separation : rules::match_separation) &&
            try_match_separation(approx))
            continue;
        if (enabled(rules::equivalence) && equivalence_) {
            if (rule_equivalence() == EqOutcome::accepted) return RunStatus::done;
            continue;
        }
        return RunStatus::fixpoint;
    }
    return RunStatus::cap_exceeded;
}

}  // namespace mlearn
