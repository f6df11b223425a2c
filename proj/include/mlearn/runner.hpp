#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlearn/learner.hpp"
#include "mlearn/mealy.hpp"
#include "mlearn/mutations.hpp"
#include "mlearn/oracle.hpp"

namespace mlearn {

enum class OracleKind { wp, perfect };

struct RunSpec {
    MealyMachine sul;
    std::vector<std::pair<std::string, MealyMachine>> refs;
    std::string ablation = "lsharp";
    OracleKind oracle = OracleKind::wp;
    WpParams wp;  // seed field is overridden per run
    std::uint64_t seed = 0;
    bool log_events = false;
    bool check_norm = false;
    bool want_tree_dot = false;  // fill RunOutcome::tree_dot with the final tree
    long long step_cap = 1'000'000;
    std::ostream* event_stream = nullptr;
};

struct RunOutcome {
    bool converged = false;
    RunMetrics metrics;
    int phase1_basis = 1;
    std::optional<MealyMachine> hypothesis;
    std::string tree_dot;
};

/// One learning run; builds the reference pack, wires the oracles and runs
/// the scheduler to completion.
RunOutcome execute_run(const RunSpec& spec);

/// CSV schema shared by learn and the raw bench output.
std::string csv_header();
std::string csv_row(const std::string& sul_name, const std::string& refs_name,
                    const std::string& algorithm, std::uint64_t seed, const RunOutcome& outcome);

// --- command-level entry points (used by the CLI and by tests) -------------

struct LearnOptions {
    std::string sul_path;
    std::vector<std::string> ref_paths;
    std::string ablation = "full";
    OracleKind oracle = OracleKind::wp;
    WpParams wp;
    std::vector<std::uint64_t> seeds = {0};
    std::vector<std::string> input_order;  // optional override
    std::string csv_path;                  // empty: stdout
    bool log_events = false;
    std::string tree_dot_path;  // optional debug dump of the final tree
    long long step_cap = 1'000'000;
    int jobs = 1;
};

struct BenchOptions {
    std::vector<std::string> model_paths;
    std::vector<std::string> mutations;  // e.g. {"mut5","mut6"}
    std::vector<std::string> ablations = {"lsharp", "full"};
    OracleKind oracle = OracleKind::wp;
    WpParams wp;
    int seed_count = 30;
    std::uint64_t seed_base = 0;
    std::vector<std::string> input_order;
    std::string csv_path;        // raw per-run rows
    std::string pivot_csv_path;  // summed (algorithm x mutation) table
    std::string plot_data_path;  // optional tidy long-format export
    long long step_cap = 1'000'000;
    int jobs = 1;
};

struct CompareOptions {
    std::string sul_path;
    std::vector<std::vector<std::string>> ref_sets;
    std::string ablation = "full";
    OracleKind oracle = OracleKind::wp;
    WpParams wp;
    int seed_count = 30;
    std::uint64_t seed_base = 0;
    std::vector<std::string> input_order;
    std::string csv_path;
    std::string plot_data_path;
    long long step_cap = 1'000'000;
    int jobs = 1;
};

// exit codes: 0 success, 1 usage/parse error, 2 learning failure, 3 internal
int cmd_learn(const LearnOptions& options);
int cmd_bench(const BenchOptions& options);
int cmd_compare(const CompareOptions& options);

struct MutateOptions {
    std::string input_path;
    std::string output_path;  // empty: stdout
    std::string op;
    std::uint64_t seed = 0;
    std::optional<int> attach_index;
};

int cmd_mutate(const MutateOptions& options);

/// Nearest-rank percentile on a sorted copy; the 0th percentile is the
/// minimum and the 100th the maximum.
double percentile(std::vector<long long> values, double pct);
double mean(const std::vector<long long>& values);

}  // namespace mlearn
