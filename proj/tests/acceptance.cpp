// Acceptance suite: one criterion per number, `acceptance` with no arguments
// runs all ten. Prints one PASS/FAIL line per criterion; the exit code is the
// number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mlearn/dot.hpp"
#include "mlearn/learner.hpp"
#include "mlearn/matching.hpp"
#include "mlearn/mutations.hpp"
#include "mlearn/random_mealy.hpp"
#include "mlearn/rng.hpp"
#include "mlearn/runner.hpp"

using namespace mlearn;

namespace {

struct Check {
    bool ok = true;
    std::string note;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            note = what;
        }
    }
};

struct SizedMachine {
    MealyMachine machine;
    int classes = 0;
    int inputs = 0;
};

// seeded machine for criteria 1/2/4: n in [2,30], k in [2,5], |O| in [2,5],
// redrawn until at least two equivalence classes remain
SizedMachine criterion_machine(std::uint64_t seed) {
    std::mt19937_64 rng(0xabcd0000 + seed);
    for (;;) {
        int n = 2 + draw_index(rng, 29);
        int k = 2 + draw_index(rng, 4);
        int o = 2 + draw_index(rng, 4);
        MealyMachine m = random_mealy(rng(), n, k, o);
        int classes = minimize_restricted(m, m.inputs()).machine.state_count();
        if (classes >= 2) return {std::move(m), classes, k};
    }
}

long long norm_application_bound(long long n, long long k, long long o) {
    return n * (n + 1) + k * n + (n - 1) * (k * n + 1) + n * o * o + (k * n + 1) * o +
           n * (k * n + 1);
}

struct InstrumentedRun {
    RunMetrics metrics;
    long long applications = 0;
    int phase1_basis = 0;
    int basis_size = 0;
    MealyMachine hypothesis;
    bool done = false;
};

InstrumentedRun run_adaptive(const MealyMachine& sul, const MealyMachine& ref, Ablation ablation,
                             bool check_norm) {
    InstrumentedRun result;
    OutputOracle outputs(sul);
    PerfectOracle perfect(sul);
    ReferencePack pack = build_reference_pack({{"ref", ref}}, sul.inputs());
    LearnerConfig config;
    config.ablation = ablation;
    config.check_norm = check_norm;
    Learner learner(outputs, &perfect, pack, config, result.metrics);
    result.done = learner.run() == RunStatus::done;
    result.applications = learner.rule_applications();
    result.phase1_basis = learner.phase1_basis_size();
    result.basis_size = static_cast<int>(learner.tree().basis().size());
    if (learner.result()) result.hypothesis = learner.result()->machine;
    return result;
}

// ---------------------------------------------------------------------------

Check criterion1() {
    Check c;
    auto start = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        SizedMachine sm = criterion_machine(seed);
        InstrumentedRun run = run_adaptive(sm.machine, sm.machine, Ablation::full, false);
        c.expect(run.done, "run did not converge");
        c.expect(run.metrics.learned_states == sm.classes, "learned size != minimized size");
        if (run.done)
            c.expect(!language_equivalent(sm.machine, run.hypothesis).has_value(),
                     "hypothesis not equivalent");
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(secs < 10.0, "runtime " + std::to_string(secs) + "s exceeds 10s");
    c.note += " (" + std::to_string(secs).substr(0, 4) + "s)";
    return c;
}

Check criterion2() {
    Check c;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        SizedMachine sm = criterion_machine(seed);
        // phase 1 in isolation: rebuilding and prioritized promotion only
        OutputOracle outputs(sm.machine);
        ReferencePack pack = build_reference_pack({{"self", sm.machine}}, sm.machine.inputs());
        RunMetrics metrics;
        LearnerConfig config;
        config.ablation = Ablation::full;
        Learner learner(outputs, nullptr, pack, config, metrics);
        learner.run_phase1();
        c.expect(learner.phase1_basis_size() == sm.classes,
                 "phase-1 basis " + std::to_string(learner.phase1_basis_size()) + " != classes " +
                     std::to_string(sm.classes));
        c.expect(metrics.eq_count == 0, "phase 1 asked an equivalence query");
        c.expect(metrics.rule_applications.at(rules::extension) == 0 &&
                     metrics.rule_applications.at(rules::separation) == 0 &&
                     metrics.rule_applications.at(rules::promotion) == 0,
                 "a non-rebuilding rule fired during phase 1");
    }
    return c;
}

struct RotatedInstance {
    MealyMachine sul, ref;
    int classes;
};

RotatedInstance rotated_instance(std::uint64_t seed) {
    std::mt19937_64 rng(0xbeef0000 + seed);
    for (;;) {
        int n = 2 + draw_index(rng, 14);
        int k = 2 + draw_index(rng, 3);
        int o = 2 + draw_index(rng, 3);
        MealyMachine sul = random_strongly_connected(rng(), n, k, o);
        int classes = minimize_restricted(sul, sul.inputs()).machine.state_count();
        if (classes < 2) continue;
        MealyMachine ref = sul;
        ref.set_initial(1 + draw_index(rng, sul.state_count() - 1));
        if (ref.initial() == sul.initial()) continue;
        return {std::move(sul), std::move(ref), classes};
    }
}

Check criterion3() {
    Check c;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        RotatedInstance inst = rotated_instance(seed);
        OutputOracle outputs(inst.sul);
        PerfectOracle perfect(inst.sul);
        ReferencePack pack = build_reference_pack({{"rot", inst.ref}}, inst.sul.inputs());
        RunMetrics metrics;
        LearnerConfig config;
        config.rule_mask = {rules::extension, rules::promotion, rules::match_refinement,
                            rules::match_separation};
        Learner learner(outputs, &perfect, pack, config, metrics);
        RunStatus status = learner.run();
        c.expect(status == RunStatus::fixpoint, "restricted run did not reach a fixpoint");
        c.expect(static_cast<int>(learner.tree().basis().size()) == inst.classes,
                 "discovery reached  " + std::to_string(learner.tree().basis().size()) +
                     " of " + std::to_string(inst.classes) + " states");
        c.expect(metrics.eq_count == 0, "state discovery needed an equivalence query");
        // the confirming query is allowed to follow
        learner.config().rule_mask.clear();
        learner.config().ablation = Ablation::exact;
        c.expect(learner.run() == RunStatus::done, "completion run failed");
        c.expect(metrics.eq_count == 1, "more than the final confirming equivalence query");
    }
    return c;
}

Check criterion4() {
    Check c;
    // criterion 1 setting, instrumented: norm checked per application inside
    // the learner, totals checked against the closed-form bound
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        SizedMachine sm = criterion_machine(seed);
        InstrumentedRun run;
        try {
            run = run_adaptive(sm.machine, sm.machine, Ablation::full, true);
        } catch (const std::logic_error& e) {
            c.expect(false, std::string("norm monotonicity violated: ") + e.what());
            continue;
        }
        long long bound = norm_application_bound(sm.classes, sm.inputs, sm.classes);
        c.expect(run.applications <= bound, "rule applications exceed the norm bound");
        c.expect(run.metrics.eq_count <= sm.classes - 1, "too many equivalence queries");
    }
    // criterion 3 setting, instrumented
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        RotatedInstance inst = rotated_instance(seed);
        OutputOracle outputs(inst.sul);
        PerfectOracle perfect(inst.sul);
        ReferencePack pack = build_reference_pack({{"rot", inst.ref}}, inst.sul.inputs());
        RunMetrics metrics;
        LearnerConfig config;
        config.ablation = Ablation::exact;
        config.check_norm = true;
        Learner learner(outputs, &perfect, pack, config, metrics);
        try {
            c.expect(learner.run() == RunStatus::done, "exact run failed");
        } catch (const std::logic_error& e) {
            c.expect(false, std::string("norm monotonicity violated: ") + e.what());
            continue;
        }
        long long k = inst.sul.input_count();
        c.expect(learner.rule_applications() <=
                     norm_application_bound(inst.classes, k, inst.classes),
                 "rule applications exceed the norm bound");
        c.expect(metrics.eq_count <= inst.classes - 1, "too many equivalence queries");
    }
    return c;
}

Check criterion5() {
    Check c;
    std::mt19937_64 rng(505);
    int instances = 0;
    long long worst_used = 0;
    for (std::uint64_t seed = 0; instances < 100; ++seed) {
        MealyMachine sul = random_mealy(0x50000 + seed, 4 + static_cast<int>(seed % 8), 3, 2);
        OutputOracle outputs(sul);
        PerfectOracle perfect(sul);
        ReferencePack pack = build_reference_pack({}, sul.inputs());
        RunMetrics metrics;
        Learner learner(outputs, &perfect, pack, LearnerConfig{}, metrics);
        while (learner.try_extension()) {
        }
        bool foldable = true;
        for (const auto& e : learner.tree().frontier_status())
            foldable = foldable && e.status == FrontierStatus::identified;
        if (!foldable) continue;
        Hypothesis h = fold_hypothesis(learner.tree());

        const int m = 2 + static_cast<int>(draw_below(rng, 511));
        std::vector<int> ce;
        for (int j = 0; j < m; ++j) ce.push_back(draw_index(rng, sul.input_count()));
        if (*h.machine.run_outputs(0, ce) == *sul.run_outputs(sul.initial(), ce)) continue;
        learner.oq(ce);
        std::vector<int> sigma;
        bool found = false;
        for (std::size_t len = 0; len <= ce.size() && !found; ++len) {
            std::vector<int> prefix(ce.begin(), ce.begin() + static_cast<std::ptrdiff_t>(len));
            int hyp_node = h.node_of_state[h.state_after(prefix)];
            int tree_node = *learner.tree().run_state(0, prefix);
            if (learner.tree().apart(hyp_node, tree_node)) {
                sigma = prefix;
                found = true;
            }
        }
        if (!found) continue;
        long long before = metrics.oq_count;
        learner.proc_counterexample(h, sigma);
        long long used = metrics.oq_count - before;
        long long bound = static_cast<long long>(std::ceil(std::log2(static_cast<double>(m)))) + 2;
        worst_used = std::max(worst_used, used);
        c.expect(used <= bound, "query count " + std::to_string(used) + " exceeds bound " +
                                    std::to_string(bound) + " at m=" + std::to_string(m));
        bool isolated = false;
        for (const auto& e : learner.tree().frontier_status())
            isolated = isolated || e.status == FrontierStatus::isolated;
        c.expect(isolated, "no frontier state was isolated");
        ++instances;
    }
    c.note += " (worst " + std::to_string(worst_used) + " queries)";
    return c;
}

Check criterion6() {
    Check c;
    long long violations = 0;
    long long degree_one = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        std::mt19937_64 rng(0x60000 + seed);
        int n = 3 + draw_index(rng, 6);
        int k = 2 + draw_index(rng, 2);
        MealyMachine sul = random_mealy(rng(), n, k, 2);
        // references range from unrelated through mutated to identical, so
        // degree-one rows appear often enough to be worth checking
        MealyMachine ref;
        switch (seed % 3) {
            case 0: ref = random_mealy(rng(), 2 + draw_index(rng, 5), k, 2); break;
            case 1: ref = sul; break;
            default: {
                MutationSpec mspec;
                mspec.op = "mut6";
                mspec.seed = seed;
                ref = mutate(sul, mspec);
                break;
            }
        }
        ReferencePack pack = build_reference_pack({{"r", ref}}, sul.inputs());
        ObservationTree tree(sul.inputs());
        for (int words = 0; words < 10; ++words) {
            Word w;
            int len = 1 + draw_index(rng, 5);
            for (int j = 0; j < len; ++j)
                w.push_back(sul.input_symbol(draw_index(rng, sul.input_count())));
            tree.add_observation(w, sul.run(sul.initial(), w)->second);
        }
        // a second basis row when some frontier node is isolated
        for (const auto& e : tree.frontier_status())
            if (e.status == FrontierStatus::isolated) {
                tree.promote(e.node);
                break;
            }
        MatchTable table(pack);
        table.refresh(tree);
        for (int q : tree.basis()) {
            for (int p = 0; p < pack.merged.state_count(); ++p) {
                if (table.mdeg(q, p) != 1.0) continue;
                ++degree_one;
                // exhaustive oracle: every tree path below q, compared with the
                // reference on commonly defined steps (recursion-free walk)
                std::vector<std::pair<int, int>> stack{{q, p}};
                bool disagrees = false;
                while (!stack.empty() && !disagrees) {
                    auto [node, state] = stack.back();
                    stack.pop_back();
                    for (int i = 0; i < tree.input_count(); ++i) {
                        int child = tree.child(node, i);
                        int ri = pack.merged.input_index(tree.input_symbol(i));
                        if (child < 0 || ri < 0 || !pack.merged.defined(state, ri)) continue;
                        if (tree.output_symbol(tree.edge_output(node, i)) !=
                            pack.merged.output_symbol(pack.merged.output(state, ri)))
                            disagrees = true;
                        else
                            stack.push_back({child, pack.merged.next(state, ri)});
                    }
                }
                if (disagrees) ++violations;
            }
        }
    }
    c.expect(violations == 0, std::to_string(violations) + " degree-one disagreements");
    c.note += " (" + std::to_string(degree_one) + " degree-one pairs checked)";
    return c;
}

Check criterion7() {
    Check c;
    // plain families on minimal machines vs the brute-force separator oracle
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(0x70000 + seed);
        MealyMachine raw = random_mealy(rng(), 2 + draw_index(rng, 9), 2 + draw_index(rng, 2), 2);
        MealyMachine m = minimize_restricted(raw, raw.inputs()).machine;
        SeparatingFamily fam = separating_family(m, false);
        for (int p = 0; p < m.state_count(); ++p) {
            for (int q = p + 1; q < m.state_count(); ++q) {
                // minimal machine: every pair is apart; oracle confirms
                bool oracle_apart = apart_states(m, p, m, q).has_value();
                c.expect(oracle_apart, "minimized machine has a non-apart pair");
                bool separated = false;
                for (const auto& w : fam.identifiers[p])
                    if (std::find(fam.identifiers[q].begin(), fam.identifiers[q].end(), w) !=
                            fam.identifiers[q].end() &&
                        m.run(p, w)->second != m.run(q, w)->second)
                        separated = true;
                c.expect(separated, "family misses an apart pair");
            }
        }
    }
    // total families on partial machines
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        std::mt19937_64 rng(0x71000 + seed);
        MealyMachine m =
            random_partial_mealy(rng(), 2 + draw_index(rng, 7), 2 + draw_index(rng, 2), 2, 70);
        SeparatingFamily fam = separating_family(m, true);
        auto outputs_bot_of = [&](int q, const Word& w) {
            return run_outputs_bot(m, q, [&] {
                std::vector<int> iw;
                for (const auto& s : w) iw.push_back(m.input_index(s));
                return iw;
            }());
        };
        for (int p = 0; p < m.state_count(); ++p) {
            for (int q = p + 1; q < m.state_count(); ++q) {
                if (!total_apart(m, p, m, q).has_value()) continue;
                bool separated = false;
                for (const auto& w : fam.identifiers[p])
                    if (std::find(fam.identifiers[q].begin(), fam.identifiers[q].end(), w) !=
                            fam.identifiers[q].end() &&
                        outputs_bot_of(p, w) != outputs_bot_of(q, w))
                        separated = true;
                c.expect(separated, "total family misses a total-apart pair");
                // pairs with asymmetric defined-input sets are always covered
                bool asymmetric = false;
                for (int i = 0; i < m.input_count(); ++i)
                    if (m.defined(p, i) != m.defined(q, i)) asymmetric = true;
                if (asymmetric) c.expect(separated, "asymmetric pair not separated");
            }
        }
    }
    return c;
}

long long adaptive_vs_plain_total(const MealyMachine& base, const std::string& op,
                                  std::uint64_t seed, const std::string& ablation) {
    MutationSpec mspec;
    mspec.op = op;
    mspec.seed = seed;
    RunSpec spec;
    spec.sul = mutate(base, mspec);
    if (ablation != "lsharp") spec.refs = {{"base", base}};
    spec.ablation = ablation;
    spec.oracle = OracleKind::wp;
    spec.wp.bound = 75;  // desk-scale test budget per equivalence query
    spec.seed = seed;
    RunOutcome outcome = execute_run(spec);
    return outcome.metrics.total_inputs();
}

Check criterion8() {
    Check c;
    int wins = 0, runs = 0;
    std::vector<double> ratios;
    for (const char* op : {"mut5", "mut6", "mut12"}) {
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            MealyMachine base = random_mealy(0x80000 + seed, 20, 5, 5);
            long long adaptive = adaptive_vs_plain_total(base, op, seed, "full");
            long long plain = adaptive_vs_plain_total(base, op, seed, "lsharp");
            ++runs;
            if (adaptive < plain) ++wins;
            ratios.push_back(static_cast<double>(adaptive) / static_cast<double>(plain));
        }
    }
    std::sort(ratios.begin(), ratios.end());
    double median = ratios[ratios.size() / 2];
    c.expect(wins * 10 >= runs * 7,
             "adaptive won only " + std::to_string(wins) + "/" + std::to_string(runs));
    c.expect(median <= 0.8, "median ratio " + std::to_string(median) + " exceeds 0.8");
    char buf[64];
    std::snprintf(buf, sizeof buf, " (wins %d/%d, median ratio %.3f)", wins, runs, median);
    c.note += buf;
    return c;
}

Check criterion9() {
    Check c;
    std::vector<double> ratios;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        MealyMachine base = random_mealy(0x90000 + seed, 20, 3, 3);
        MutationSpec m8;
        m8.op = "mut8";
        m8.seed = seed;
        MealyMachine sul = mutate(base, m8);
        MutationSpec m13;
        m13.op = "mut13";
        m13.seed = seed;  // same stream prefix as the copy embedded by mut8
        MealyMachine fragment = mutate(base, m13);

        auto run_with = [&](std::vector<std::pair<std::string, MealyMachine>> refs) {
            RunSpec spec;
            spec.sul = sul;
            spec.refs = std::move(refs);
            spec.ablation = "full";
            spec.oracle = OracleKind::wp;
            spec.wp.bound = 2000;
            spec.seed = seed;
            return execute_run(spec).metrics.total_inputs();
        };
        long long single = run_with({{"base", base}});
        long long both = run_with({{"base", base}, {"fragment", fragment}});
        ratios.push_back(static_cast<double>(both) / static_cast<double>(single));
    }
    std::sort(ratios.begin(), ratios.end());
    double median = ratios[ratios.size() / 2];
    c.expect(median < 1.0, "median ratio " + std::to_string(median) + " not below 1");
    char buf[48];
    std::snprintf(buf, sizeof buf, " (median ratio %.3f)", median);
    c.note += buf;
    return c;
}

Check criterion10() {
    Check c;
    namespace fs = std::filesystem;
    std::string dir = (fs::temp_directory_path() / "mlearn_acceptance").string();
    fs::create_directories(dir);
    std::string model = dir + "/c10.dot";
    save_dot_file(random_mealy(0xA0000, 12, 3, 3), model);

    auto slurp = [](const std::string& path) {
        std::ifstream in(path);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };

    // learn twice (parallel) under both oracles
    for (const char* oracle : {"wp", "perfect"}) {
        LearnOptions lo;
        lo.sul_path = model;
        lo.ref_paths = {model};
        lo.ablation = "full";
        lo.oracle = oracle == std::string("wp") ? OracleKind::wp : OracleKind::perfect;
        lo.wp.bound = 500;
        lo.seeds = {0, 1, 2, 3, 4};
        lo.jobs = 4;
        lo.csv_path = dir + "/learn_a.csv";
        c.expect(cmd_learn(lo) == 0, "learn run failed");
        lo.csv_path = dir + "/learn_b.csv";
        c.expect(cmd_learn(lo) == 0, "learn rerun failed");
        c.expect(slurp(dir + "/learn_a.csv") == slurp(dir + "/learn_b.csv"),
                 std::string("learn CSV not byte-identical under ") + oracle);
    }

    BenchOptions bo;
    bo.model_paths = {model};
    bo.mutations = {"mut5", "mut6"};
    bo.ablations = {"lsharp", "full"};
    bo.oracle = OracleKind::wp;
    bo.wp.bound = 300;
    bo.seed_count = 3;
    bo.jobs = 4;
    bo.csv_path = dir + "/bench_a.csv";
    bo.pivot_csv_path = dir + "/pivot_a.csv";
    c.expect(cmd_bench(bo) == 0, "bench run failed");
    bo.csv_path = dir + "/bench_b.csv";
    bo.pivot_csv_path = dir + "/pivot_b.csv";
    c.expect(cmd_bench(bo) == 0, "bench rerun failed");
    c.expect(slurp(dir + "/bench_a.csv") == slurp(dir + "/bench_b.csv"),
             "bench CSV not byte-identical");
    c.expect(slurp(dir + "/pivot_a.csv") == slurp(dir + "/pivot_b.csv"),
             "pivot CSV not byte-identical");

    CompareOptions co;
    co.sul_path = model;
    co.ref_sets = {{}, {model}};
    co.oracle = OracleKind::wp;
    co.wp.bound = 300;
    co.seed_count = 3;
    co.jobs = 4;
    co.csv_path = dir + "/cmp_a.csv";
    c.expect(cmd_compare(co) == 0, "compare run failed");
    co.csv_path = dir + "/cmp_b.csv";
    c.expect(cmd_compare(co) == 0, "compare rerun failed");
    c.expect(slurp(dir + "/cmp_a.csv") == slurp(dir + "/cmp_b.csv"),
             "compare CSV not byte-identical");
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    if (argc > 1) {
        for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    } else {
        for (int i = 1; i <= 10; ++i) which.push_back(i);
    }
    static const char* names[] = {
        "",
        "criterion-1 correctness: adaptive runs learn 30/30 seeded machines",
        "criterion-2 rebuilding alone discovers every equivalence class",
        "criterion-3 exact matching discovers rotated machines without search queries",
        "criterion-4 norm strictly increases; applications and queries within bounds",
        "criterion-5 counterexample processing within the logarithmic query bound",
        "criterion-6 degree-one matches never disagree with the reference",
        "criterion-7 separating families cover every (total-)apart pair",
        "criterion-8 adaptive runs beat plain runs on mutated models",
        "criterion-9 a second reference helps on composite models",
        "criterion-10 byte-identical CSV output across reruns",
    };
    int failures = 0;
    for (int number : which) {
        if (number < 1 || number > 10) {
            std::cerr << "unknown criterion " << number << "\n";
            return 64;
        }
        Check result;
        try {
            switch (number) {
                case 1: result = criterion1(); break;
                case 2: result = criterion2(); break;
                case 3: result = criterion3(); break;
                case 4: result = criterion4(); break;
                case 5: result = criterion5(); break;
                case 6: result = criterion6(); break;
                case 7: result = criterion7(); break;
                case 8: result = criterion8(); break;
                case 9: result = criterion9(); break;
                case 10: result = criterion10(); break;
            }
        } catch (const std::exception& e) {
            result.ok = false;
            result.note = std::string("exception: ") + e.what();
        }
        std::cout << (result.ok ? "PASS " : "FAIL ") << names[number]
                  << (result.note.empty() ? "" : " — " + result.note) << std::endl;
        if (!result.ok) ++failures;
    }
    return failures;
}
