#include "mlearn/oracle.hpp"

#include <stdexcept>

#include "mlearn/rng.hpp"

namespace mlearn {

OutputOracle::OutputOracle(const MealyMachine& sul) : sul_(&sul) {
    if (!sul.is_complete()) throw std::invalid_argument("output oracle: SUL must be complete");
}

OutputWord OutputOracle::query(const Word& w, RunMetrics& metrics) const {
    auto result = sul_->run(sul_->initial(), w);
    if (!result)
        throw std::logic_error("output query outside the SUL alphabet (learner must pre-filter)");
    ++metrics.oq_count;
    metrics.input_symbols_oq += static_cast<long long>(w.size());
    return std::move(result->second);
}

std::optional<Counterexample> PerfectOracle::query(const MealyMachine& hypothesis,
                                                   RunMetrics& metrics) {
    ++metrics.eq_count;
    auto ce = language_equivalent(*sul_, hypothesis);
    if (!ce) return std::nullopt;
    metrics.input_symbols_eq += static_cast<long long>(ce->size());
    return Counterexample{*ce, walk(*sul_, sul_->initial(), *ce)->second};
}

RandomWpOracle::RandomWpOracle(const MealyMachine& sul, WpParams params)
    : sul_(&sul), params_(params), rng_(params.seed) {}

std::optional<Counterexample> RandomWpOracle::query(const MealyMachine& hypothesis,
                                                    RunMetrics& metrics) {
    ++metrics.eq_count;
    const MealyMachine& h = hypothesis;
    if (!h.is_complete()) throw std::invalid_argument("wp oracle: hypothesis must be complete");
    std::vector<Word> access = state_cover(h);
    std::vector<std::vector<Word>> ids = separating_family(h, /*total=*/false).identifiers;
    const int k = h.input_count();

    for (long long test = 0; params_.bound == 0 || test < params_.bound; ++test) {
        Word w = access[draw_index(rng_, access.size())];
        int middle = params_.random_length + draw_geometric(rng_);
        if (middle < params_.minimal_size) middle = params_.minimal_size;
        for (int j = 0; j < middle; ++j) w.push_back(h.input_symbol(draw_index(rng_, k)));
        int reached = walk(h, h.initial(), w)->first;
        if (!ids[reached].empty()) {
            const Word& suffix = ids[reached][draw_index(rng_, ids[reached].size())];
            w.insert(w.end(), suffix.begin(), suffix.end());
        }
        metrics.input_symbols_eq += static_cast<long long>(w.size());
        OutputWord sul_out = walk(*sul_, sul_->initial(), w)->second;
        OutputWord hyp_out = walk(h, h.initial(), w)->second;
        if (sul_out != hyp_out) return Counterexample{std::move(w), std::move(sul_out)};
    }
    return std::nullopt;
}

}  // namespace mlearn
