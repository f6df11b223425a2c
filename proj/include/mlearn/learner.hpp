#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mlearn/matching.hpp"
#include "mlearn/obstree.hpp"
#include "mlearn/oracle.hpp"
#include "mlearn/refpack.hpp"

namespace mlearn {

/// Which rules run, mirroring the experiment variants: `lsharp` disables all
/// adaptive rules, `rebuild` adds the rebuilding phase, `exact`/`approx` add
/// the matching rules under the exact/approximate relation, `full` combines
/// rebuilding with the approximate rules.
enum class Ablation { lsharp, rebuild, exact, approx, rebuild_exact, full };

Ablation parse_ablation(const std::string& id);  // "lsharp" "R" "exact" "approx" "R+exact" "full"
std::string ablation_id(Ablation a);

namespace rules {
inline constexpr const char* extension = "Ex";
inline constexpr const char* separation = "S";
inline constexpr const char* promotion = "P";
inline constexpr const char* equivalence = "Eq";
inline constexpr const char* rebuilding = "R";
inline constexpr const char* prioritized_promotion = "PP";
inline constexpr const char* match_separation = "MS";
inline constexpr const char* match_refinement = "MR";
inline constexpr const char* prioritized_separation = "PS";
inline constexpr const char* approx_match_separation = "AMS";
inline constexpr const char* approx_match_refinement = "AMR";
inline constexpr const char* approx_prioritized_separation = "APS";
/// All rule ids in a fixed order (CSV columns, logs).
const std::vector<std::string>& all();
}  // namespace rules

struct EventLogEntry {
    std::string rule;
    std::string detail;            // parameters, human readable
    std::vector<Word> queries;     // OQ words the rule posed
    long long norm_after = -1;     // filled when norm checking is on
};

struct LearnerConfig {
    Ablation ablation = Ablation::lsharp;
    /// When non-empty, only these rule ids are scheduled (targeted runs).
    std::set<std::string> rule_mask;
    bool log_events = false;
    std::ostream* event_stream = nullptr;
    /// Assert that the norm strictly increases across every rule application.
    /// Honored for packs with at most one reference.
    bool check_norm = false;
    bool match_debug_check = false;
    /// Pick separation candidates with the seeded generator instead of the
    /// deterministic scan.
    bool randomize_separation = false;
    std::uint64_t seed = 0;
    long long step_cap = 1'000'000;
};

enum class RunStatus { done, fixpoint, cap_exceeded };

class Learner {
public:
    Learner(OutputOracle& outputs, EquivalenceOracle* equivalence, const ReferencePack& pack,
            LearnerConfig config, RunMetrics& metrics);

    /// Rebuilding phase (once), then the main loop until the teacher accepts,
    /// no enabled rule applies, or the step cap is hit.
    RunStatus run();

    const ObservationTree& tree() const { return tree_; }
    ObservationTree& tree() { return tree_; }
    const std::optional<Hypothesis>& result() const { return result_; }
    int phase1_basis_size() const { return phase1_basis_; }
    const std::vector<EventLogEntry>& events() const { return events_; }
    LearnerConfig& config() { return config_; }
    MatchTable& matching() { return matching_; }
    long long rule_applications() const { return applications_; }

    // Single-rule interface. Preconditions are validated; a violation throws
    // std::logic_error.
    void rule_extension(int q, int i);
    void rule_promotion(int r);
    void rule_separation(int r, int q, int q2);
    enum class EqOutcome { accepted, counterexample };
    EqOutcome rule_equivalence();
    /// Binary-search reduction of a hypothesis/tree disagreement at `sigma`
    /// (tree-indexed); ends with an isolated frontier state. At most
    /// ceil(log2 |sigma|) + 2 output queries.
    void proc_counterexample(const Hypothesis& h, const std::vector<int>& sigma);

    void rule_rebuilding(int q, int q2, int i, int scope);
    void rule_prioritized_promotion(int r);
    void rule_match_separation(int q, int q2, int p, int i, bool approximate);
    void rule_match_refinement(int q, int p, int p2, bool approximate);
    void rule_prioritized_separation(int r, int q2, int q3, bool approximate);

    // Scanners: apply the first candidate in deterministic order.
    bool try_extension();
    bool try_separation();
    bool try_promotion();
    bool phase1_step();
    void run_phase1();
    bool try_prioritized_separation(bool approximate);
    bool try_match_refinement(bool approximate);
    bool try_match_separation(bool approximate);

    /// Output query via the teacher with the observation tree as cache: words
    /// fully present are not re-asked and not charged.
    int oq(const std::vector<int>& word);

private:
    bool enabled(const char* rule) const;
    void applied(const char* rule, std::string detail, bool norm_must_grow = true);
    int hyp_state_node(const Hypothesis& h, int anchor_node, const std::vector<int>& word) const;
    std::vector<int> shortest_apart_prefix(const Hypothesis& h, const std::vector<int>& word);
    std::vector<int> to_tree_word(const Word& w) const;
    bool matches(int p, int basis_node, bool approximate);
    std::vector<int> basis_not_apart(int r) const;

    OutputOracle* outputs_;
    EquivalenceOracle* equivalence_;
    const ReferencePack* pack_;
    LearnerConfig config_;
    RunMetrics* metrics_;
    ObservationTree tree_;
    MatchTable matching_;
    std::mt19937_64 rng_;
    std::optional<Hypothesis> result_;
    std::vector<EventLogEntry> events_;
    std::vector<Word> pending_queries_;  // OQ words of the rule being applied
    long long applications_ = 0;
    long long last_norm_ = -1;
    int phase1_basis_ = 1;
    bool phase1_done_ = false;
};

}  // namespace mlearn
