#include "mlearn/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "mlearn/dot.hpp"
#include "mlearn/refpack.hpp"

namespace mlearn {

RunOutcome execute_run(const RunSpec& spec) {
    ReferencePack pack = build_reference_pack(spec.refs, spec.sul.inputs());
    OutputOracle outputs(spec.sul);
    PerfectOracle perfect(spec.sul);
    WpParams wp = spec.wp;
    wp.seed = spec.seed;
    RandomWpOracle random_wp(spec.sul, wp);
    EquivalenceOracle* eq =
        spec.oracle == OracleKind::perfect ? static_cast<EquivalenceOracle*>(&perfect)
                                           : static_cast<EquivalenceOracle*>(&random_wp);

    LearnerConfig config;
    config.ablation = parse_ablation(spec.ablation);
    config.log_events = spec.log_events;
    config.check_norm = spec.check_norm;
    config.seed = spec.seed;
    config.step_cap = spec.step_cap;
    config.event_stream = spec.event_stream;

    RunOutcome outcome;
    Learner learner(outputs, eq, pack, config, outcome.metrics);
    RunStatus status = learner.run();
    outcome.converged = status == RunStatus::done;
    outcome.phase1_basis = learner.phase1_basis_size();
    if (learner.result()) outcome.hypothesis = learner.result()->machine;
    if (spec.want_tree_dot) outcome.tree_dot = write_tree_dot(learner.tree());
    return outcome;
}

std::string csv_header() {
    std::string h = "sul,refs,algorithm,seed,oq_count,eq_count,input_symbols_oq,input_symbols_eq,"
                    "total_inputs,learned_states,converged";
    for (const auto& id : rules::all()) h += ",rule_" + id;
    return h;
}

std::string csv_row(const std::string& sul_name, const std::string& refs_name,
                    const std::string& algorithm, std::uint64_t seed, const RunOutcome& outcome) {
    const RunMetrics& m = outcome.metrics;
    std::ostringstream os;
    os << sul_name << ',' << refs_name << ',' << algorithm << ',' << seed << ',' << m.oq_count << ','
       << m.eq_count << ',' << m.input_symbols_oq << ',' << m.input_symbols_eq << ','
       << m.total_inputs() << ',' << m.learned_states << ',' << (outcome.converged ? 1 : 0);
    for (const auto& id : rules::all()) {
        auto it = m.rule_applications.find(id);
        os << ',' << (it == m.rule_applications.end() ? 0 : it->second);
    }
    return os.str();
}

double percentile(std::vector<long long> values, double pct) {
    if (values.empty()) throw std::invalid_argument("percentile of empty sample");
    std::sort(values.begin(), values.end());
    if (pct <= 0.0) return static_cast<double>(values.front());
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(pct / 100.0 * static_cast<double>(values.size())));
    if (rank < 1) rank = 1;
    if (rank > values.size()) rank = values.size();
    return static_cast<double>(values[rank - 1]);
}

double mean(const std::vector<long long>& values) {
    if (values.empty()) throw std::invalid_argument("mean of empty sample");
    long long sum = 0;
    for (long long v : values) sum += v;
    return static_cast<double>(sum) / static_cast<double>(values.size());
}

namespace {

std::string basename_of(const std::string& path) {
    return std::filesystem::path(path).filename().string();
}

std::string join_names(const std::vector<std::string>& names, char sep = ';') {
    std::string s;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) s += sep;
        s += names[i];
    }
    return s;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    if (path.empty()) {
        for (const auto& l : lines) std::cout << l << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& l : lines) out << l << '\n';
}

// runs jobs in parallel; results land in deterministic slots
template <typename Job>
void run_jobs(std::vector<Job>& jobs, int threads, const std::function<void(Job&)>& body) {
    if (threads <= 1 || jobs.size() <= 1) {
        for (auto& j : jobs) body(j);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    int count = std::min<int>(threads, static_cast<int>(jobs.size()));
    std::vector<std::exception_ptr> errors(count);
    for (int t = 0; t < count; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (;;) {
                    std::size_t idx = next.fetch_add(1);
                    if (idx >= jobs.size()) return;
                    body(jobs[idx]);
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

MealyMachine load_model(const std::string& path, const std::vector<std::string>& input_order) {
    MealyMachine m = load_dot_file(path);
    if (!input_order.empty()) m = reorder_inputs(m, input_order);
    return m;
}

}  // namespace

int cmd_learn(const LearnOptions& options) {
    MealyMachine sul = load_model(options.sul_path, options.input_order);
    std::vector<std::pair<std::string, MealyMachine>> refs;
    for (const auto& p : options.ref_paths)
        refs.emplace_back(basename_of(p), load_model(p, options.input_order));

    struct Job {
        std::uint64_t seed;
        RunOutcome outcome;
    };
    std::vector<Job> jobs;
    for (auto seed : options.seeds) jobs.push_back({seed, {}});
    std::function<void(Job&)> body = [&](Job& job) {
        RunSpec spec;
        spec.sul = sul;
        spec.refs = refs;
        spec.ablation = options.ablation;
        spec.oracle = options.oracle;
        spec.wp = options.wp;
        spec.seed = job.seed;
        spec.step_cap = options.step_cap;
        spec.log_events = options.log_events;
        spec.event_stream = options.log_events && options.jobs <= 1 ? &std::cerr : nullptr;
        spec.want_tree_dot = !options.tree_dot_path.empty() && job.seed == options.seeds.back();
        job.outcome = execute_run(spec);
    };
    run_jobs(jobs, options.jobs, body);

    std::vector<std::string> ref_names;
    for (const auto& [name, machine] : refs) {
        (void)machine;
        ref_names.push_back(name);
    }
    std::vector<std::string> lines{csv_header()};
    bool all_converged = true;
    for (const auto& job : jobs) {
        lines.push_back(csv_row(basename_of(options.sul_path), join_names(ref_names),
                                options.ablation, job.seed, job.outcome));
        all_converged = all_converged && job.outcome.converged;
    }
    write_lines(options.csv_path, lines);

    if (!options.tree_dot_path.empty() && !jobs.empty()) {
        std::ofstream out(options.tree_dot_path);
        if (!out) throw std::runtime_error("cannot write " + options.tree_dot_path);
        out << jobs.back().outcome.tree_dot;
    }
    return all_converged ? 0 : 2;
}

int cmd_mutate(const MutateOptions& options) {
    MealyMachine m = load_dot_file(options.input_path);
    MutationSpec spec;
    spec.op = options.op;
    spec.seed = options.seed;
    spec.attach_index = options.attach_index;
    MealyMachine result = mutate(m, spec);
    if (options.output_path.empty())
        std::cout << write_dot(result);
    else
        save_dot_file(result, options.output_path);
    return 0;
}

int cmd_bench(const BenchOptions& options) {
    struct Job {
        std::string model_name;
        std::string mutation;
        std::string ablation;
        std::uint64_t seed;
        const MealyMachine* base;
        RunOutcome outcome;
    };
    std::vector<MealyMachine> models;
    std::vector<std::string> model_names;
    for (const auto& p : options.model_paths) {
        models.push_back(load_model(p, options.input_order));
        model_names.push_back(basename_of(p));
    }
    std::vector<Job> jobs;
    for (std::size_t mi = 0; mi < models.size(); ++mi)
        for (const auto& mut : options.mutations)
            for (int s = 0; s < options.seed_count; ++s)
                for (const auto& ablation : options.ablations)
                    jobs.push_back({model_names[mi], mut, ablation,
                                    options.seed_base + static_cast<std::uint64_t>(s), &models[mi],
                                    {}});

    std::function<void(Job&)> body = [&](Job& job) {
        MutationSpec mspec;
        mspec.op = job.mutation;
        mspec.seed = job.seed;
        RunSpec spec;
        spec.sul = mutate(*job.base, mspec);
        spec.refs = {{job.model_name, *job.base}};
        spec.ablation = job.ablation;
        spec.oracle = options.oracle;
        spec.wp = options.wp;
        spec.seed = job.seed;
        spec.step_cap = options.step_cap;
        job.outcome = execute_run(spec);
    };
    run_jobs(jobs, options.jobs, body);

    std::vector<std::string> lines{csv_header()};
    bool all_converged = true;
    for (const auto& job : jobs) {
        lines.push_back(csv_row(job.model_name + ":" + job.mutation, job.model_name, job.ablation,
                                job.seed, job.outcome));
        all_converged = all_converged && job.outcome.converged;
    }
    write_lines(options.csv_path, lines);

    // pivot: total inputs summed over models and seeds, one row per algorithm
    {
        std::map<std::pair<std::string, std::string>, long long> sums;  // (ablation, mutation)
        for (const auto& job : jobs)
            sums[{job.ablation, job.mutation}] += job.outcome.metrics.total_inputs();
        std::string header = "algorithm";
        for (const auto& mut : options.mutations) header += "," + mut;
        std::vector<std::string> pivot{header};
        for (const auto& ablation : options.ablations) {
            std::string row = ablation;
            for (const auto& mut : options.mutations)
                row += "," + std::to_string(sums[{ablation, mut}]);
            pivot.push_back(row);
        }
        if (!options.pivot_csv_path.empty()) write_lines(options.pivot_csv_path, pivot);
    }
    if (!options.plot_data_path.empty()) {
        std::vector<std::string> tidy{"model,mutation,algorithm,seed,total_inputs"};
        for (const auto& job : jobs)
            tidy.push_back(job.model_name + "," + job.mutation + "," + job.ablation + "," +
                           std::to_string(job.seed) + "," +
                           std::to_string(job.outcome.metrics.total_inputs()));
        write_lines(options.plot_data_path, tidy);
    }
    return all_converged ? 0 : 2;
}

int cmd_compare(const CompareOptions& options) {
    MealyMachine sul = load_model(options.sul_path, options.input_order);
    struct Job {
        std::size_t set_index;
        std::uint64_t seed;
        RunOutcome outcome;
    };
    std::vector<std::vector<std::pair<std::string, MealyMachine>>> ref_sets;
    std::vector<std::string> set_names;
    for (const auto& set : options.ref_sets) {
        std::vector<std::pair<std::string, MealyMachine>> refs;
        std::vector<std::string> names;
        for (const auto& p : set) {
            refs.emplace_back(basename_of(p), load_model(p, options.input_order));
            names.push_back(basename_of(p));
        }
        ref_sets.push_back(std::move(refs));
        set_names.push_back(set.empty() ? "(none)" : join_names(names));
    }

    std::vector<Job> jobs;
    for (std::size_t si = 0; si < ref_sets.size(); ++si)
        for (int s = 0; s < options.seed_count; ++s)
            jobs.push_back({si, options.seed_base + static_cast<std::uint64_t>(s), {}});
    std::function<void(Job&)> body = [&](Job& job) {
        RunSpec spec;
        spec.sul = sul;
        spec.refs = ref_sets[job.set_index];
        spec.ablation = options.ablation;
        spec.oracle = options.oracle;
        spec.wp = options.wp;
        spec.seed = job.seed;
        spec.step_cap = options.step_cap;
        job.outcome = execute_run(spec);
    };
    run_jobs(jobs, options.jobs, body);

    std::vector<std::string> lines{"refs,runs,mean_total_inputs,p5_total_inputs,p95_total_inputs"};
    bool all_converged = true;
    char buffer[64];
    for (std::size_t si = 0; si < ref_sets.size(); ++si) {
        std::vector<long long> totals;
        for (const auto& job : jobs)
            if (job.set_index == si) {
                totals.push_back(job.outcome.metrics.total_inputs());
                all_converged = all_converged && job.outcome.converged;
            }
        std::string row = set_names[si] + "," + std::to_string(totals.size());
        std::snprintf(buffer, sizeof buffer, ",%.3f,%.3f,%.3f", mean(totals),
                      percentile(totals, 5.0), percentile(totals, 95.0));
        lines.push_back(row + buffer);
    }
    write_lines(options.csv_path, lines);
    if (!options.plot_data_path.empty()) {
        std::vector<std::string> tidy{"refs,seed,total_inputs"};
        for (const auto& job : jobs)
            tidy.push_back(set_names[job.set_index] + "," + std::to_string(job.seed) + "," +
                           std::to_string(job.outcome.metrics.total_inputs()));
        write_lines(options.plot_data_path, tidy);
    }
    return all_converged ? 0 : 2;
}

}  // namespace mlearn
