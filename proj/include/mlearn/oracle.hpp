#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>

#include "mlearn/mealy.hpp"

namespace mlearn {

/// Counters for one learning run. All counters are monotone while the run is
/// in progress; total_inputs is the paper-style primary metric.
struct RunMetrics {
    long long oq_count = 0;
    long long eq_count = 0;
    long long input_symbols_oq = 0;
    long long input_symbols_eq = 0;
    long long learned_states = 0;
    std::map<std::string, long long> rule_applications;

    long long total_inputs() const { return input_symbols_oq + input_symbols_eq; }
};

/// Simulated MAT teacher, output side. The machine must be complete; a query
/// containing a symbol outside its alphabet is a learner bug and throws.
class OutputOracle {
public:
    explicit OutputOracle(const MealyMachine& sul);

    OutputWord query(const Word& w, RunMetrics& metrics) const;
    const MealyMachine& machine() const { return *sul_; }

private:
    const MealyMachine* sul_;
};

struct Counterexample {
    Word input;
    OutputWord outputs;  // the SUL's answers, observed while testing
};

class EquivalenceOracle {
public:
    virtual ~EquivalenceOracle() = default;
    /// Accepts the hypothesis (absent) or returns a counterexample on which
    /// the SUL's outputs differ from the hypothesis'. Charges
    /// input_symbols_eq; the outputs come from the run already charged.
    virtual std::optional<Counterexample> query(const MealyMachine& hypothesis,
                                                RunMetrics& metrics) = 0;
};

/// Product-BFS teacher: deterministic, returns a shortest counterexample.
class PerfectOracle : public EquivalenceOracle {
public:
    explicit PerfectOracle(const MealyMachine& sul) : sul_(&sul) {}
    std::optional<Counterexample> query(const MealyMachine& hypothesis,
                                        RunMetrics& metrics) override;

private:
    const MealyMachine* sul_;
};

struct WpParams {
    int minimal_size = 3;       // minimum middle-section length
    int random_length = 3;      // expected middle-section length before jitter
    long long bound = 0;        // max tests per query; 0 = unbounded
    std::uint64_t seed = 0;
};

/// Randomized Wp-style conformance tester. Each test word is
///   access(random hypothesis state) · random middle · identifier suffix,
/// with the middle of length max(minimal_size, random_length + geometric
/// jitter) and the suffix drawn from the identifier set of the hypothesis
/// state reached. Symbols are charged for passing tests too. Deterministic
/// given the seed.
class RandomWpOracle : public EquivalenceOracle {
public:
    RandomWpOracle(const MealyMachine& sul, WpParams params);
    std::optional<Counterexample> query(const MealyMachine& hypothesis,
                                        RunMetrics& metrics) override;

private:
    const MealyMachine* sul_;
    WpParams params_;
    std::mt19937_64 rng_;
};

}  // namespace mlearn
