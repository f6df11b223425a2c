#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlearn/runner.hpp"

// Subcommands: learn, mutate, bench, compare.
// Exit codes: 0 success, 1 usage or parse error, 2 learning failure,
// 3 internal invariant violation.

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    return parts;
}

void add_oracle_flags(CLI::App* cmd, std::string& oracle, mlearn::WpParams& wp) {
    cmd->add_option("--oracle", oracle, "equivalence oracle: wp or perfect")
        ->check(CLI::IsMember({"wp", "perfect"}))
        ->capture_default_str();
    cmd->add_option("--wp-minimal-size", wp.minimal_size, "minimum middle-section length")
        ->capture_default_str();
    cmd->add_option("--wp-random-length", wp.random_length, "expected middle-section length")
        ->capture_default_str();
    cmd->add_option("--wp-bound", wp.bound, "max tests per equivalence query (0 = unbounded)")
        ->capture_default_str();
}

mlearn::OracleKind oracle_kind(const std::string& s) {
    return s == "perfect" ? mlearn::OracleKind::perfect : mlearn::OracleKind::wp;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Active automata learning for Mealy machines with reference models"};
    app.require_subcommand(1);
    // `mlearn --config run.conf learn` reads [learn]-sectioned key=value lines
    app.set_config("--config", "", "read options from a key=value file (sections per subcommand)");

    // learn ------------------------------------------------------------
    auto* learn = app.add_subcommand("learn", "learn one SUL, one CSV row per seed");
    mlearn::LearnOptions lo;
    std::string learn_oracle = "wp";
    std::string learn_seeds = "0";
    std::string learn_order;
    lo.wp.bound = 2000;
    learn->add_option("--sul", lo.sul_path, "SUL model (DOT)")->required();
    learn->add_option("--ref", lo.ref_paths, "reference model (repeatable)");
    learn->add_option("--algorithm", lo.ablation,
                      "ablation: lsharp, R, exact, approx, R+exact, full")
        ->capture_default_str();
    add_oracle_flags(learn, learn_oracle, lo.wp);
    learn->add_option("--seeds", learn_seeds, "comma-separated seed list")->capture_default_str();
    learn->add_option("--input-order", learn_order, "comma-separated input priority");
    learn->add_option("--csv", lo.csv_path, "output CSV path (default stdout)");
    learn->add_option("--dump-tree", lo.tree_dot_path, "write the final observation tree as DOT");
    learn->add_flag("--log-events", lo.log_events, "log one line per rule application to stderr");
    learn->add_option("--max-steps", lo.step_cap, "rule applications before giving up")
        ->capture_default_str();
    learn->add_option("--jobs", lo.jobs, "parallel seeds")->capture_default_str();

    // mutate -----------------------------------------------------------
    auto* mut = app.add_subcommand("mutate", "apply a seeded mutation operator to a model");
    mlearn::MutateOptions mo;
    int attach = -1;
    mut->add_option("--in", mo.input_path, "input model (DOT)")->required();
    mut->add_option("--out", mo.output_path, "output path (default stdout)");
    mut->add_option("--op", mo.op, "operator mut1..mut14")->required();
    mut->add_option("--seed", mo.seed, "RNG seed")->capture_default_str();
    mut->add_option("--attach-index", attach, "attachment state for mut8/mut9");

    // bench ------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "mutation benchmark over models x mutations x seeds");
    mlearn::BenchOptions bo;
    std::string bench_oracle = "wp";
    std::string bench_muts = "mut5,mut6";
    std::string bench_ablations = "lsharp,full";
    std::string bench_order;
    bo.wp.bound = 2000;
    bench->add_option("--model", bo.model_paths, "base model (repeatable)")->required();
    bench->add_option("--mutations", bench_muts, "comma-separated operators")->capture_default_str();
    bench->add_option("--algorithms", bench_ablations, "comma-separated ablations")
        ->capture_default_str();
    add_oracle_flags(bench, bench_oracle, bo.wp);
    bench->add_option("--seed-count", bo.seed_count, "seeds per cell")->capture_default_str();
    bench->add_option("--seed-base", bo.seed_base, "first seed")->capture_default_str();
    bench->add_option("--input-order", bench_order, "comma-separated input priority");
    bench->add_option("--csv", bo.csv_path, "raw per-run CSV (default stdout)");
    bench->add_option("--pivot-csv", bo.pivot_csv_path, "summed algorithm x mutation CSV");
    bench->add_option("--emit-plot-data", bo.plot_data_path, "tidy long-format CSV for plotting");
    bench->add_option("--max-steps", bo.step_cap, "rule applications before giving up")
        ->capture_default_str();
    bench->add_option("--jobs", bo.jobs, "parallel runs")->capture_default_str();

    // compare ----------------------------------------------------------
    auto* cmp = app.add_subcommand("compare", "one SUL under several reference sets");
    mlearn::CompareOptions co;
    std::string cmp_oracle = "wp";
    std::vector<std::string> cmp_sets;
    std::string cmp_order;
    co.wp.bound = 2000;
    cmp->add_option("--sul", co.sul_path, "SUL model (DOT)")->required();
    cmp->add_option("--refset", cmp_sets,
                    "comma-joined reference set, repeatable; use 'none' for the empty set")
        ->required();
    cmp->add_option("--algorithm", co.ablation, "ablation")->capture_default_str();
    add_oracle_flags(cmp, cmp_oracle, co.wp);
    cmp->add_option("--seed-count", co.seed_count, "seeds per set")->capture_default_str();
    cmp->add_option("--seed-base", co.seed_base, "first seed")->capture_default_str();
    cmp->add_option("--input-order", cmp_order, "comma-separated input priority");
    cmp->add_option("--csv", co.csv_path, "statistics CSV (default stdout)");
    cmp->add_option("--emit-plot-data", co.plot_data_path, "tidy long-format CSV for plotting");
    cmp->add_option("--max-steps", co.step_cap, "rule applications before giving up")
        ->capture_default_str();
    cmp->add_option("--jobs", co.jobs, "parallel runs")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        if (learn->parsed()) {
            lo.oracle = oracle_kind(learn_oracle);
            lo.seeds.clear();
            for (const auto& s : split_commas(learn_seeds)) lo.seeds.push_back(std::stoull(s));
            lo.input_order = split_commas(learn_order);
            return mlearn::cmd_learn(lo);
        }
        if (mut->parsed()) {
            if (attach >= 0) mo.attach_index = attach;
            return mlearn::cmd_mutate(mo);
        }
        if (bench->parsed()) {
            bo.oracle = oracle_kind(bench_oracle);
            bo.mutations = split_commas(bench_muts);
            bo.ablations = split_commas(bench_ablations);
            bo.input_order = split_commas(bench_order);
            return mlearn::cmd_bench(bo);
        }
        if (cmp->parsed()) {
            co.oracle = oracle_kind(cmp_oracle);
            co.input_order = split_commas(cmp_order);
            for (const auto& set : cmp_sets)
                co.ref_sets.push_back(set == "none" ? std::vector<std::string>{}
                                                    : split_commas(set));
            return mlearn::cmd_compare(co);
        }
    } catch (const std::logic_error& e) {
        std::cerr << "internal invariant violation: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
