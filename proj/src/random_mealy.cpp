#include "mlearn/random_mealy.hpp"

#include <stdexcept>

#include "mlearn/rng.hpp"

namespace mlearn {

std::vector<std::string> letter_inputs(int k) {
    std::vector<std::string> inputs;
    for (int i = 0; i < k; ++i) {
        std::string sym;
        int n = i;
        do {
            sym.insert(sym.begin(), static_cast<char>('a' + n % 26));
            n = n / 26 - 1;
        } while (n >= 0);
        inputs.push_back(sym);
    }
    return inputs;
}

MealyMachine random_mealy(std::uint64_t seed, int states, int inputs, int outputs) {
    if (states < 1 || inputs < 1 || outputs < 1)
        throw std::invalid_argument("random_mealy: sizes must be positive");
    std::mt19937_64 rng(seed);
    MealyMachine m(letter_inputs(inputs), states, 0);
    std::vector<int> out_ids;
    for (int o = 0; o < outputs; ++o) out_ids.push_back(m.intern_output(std::to_string(o)));
    for (int q = 0; q < states; ++q)
        for (int i = 0; i < inputs; ++i)
            m.set_edge(q, i, draw_index(rng, states), out_ids[draw_index(rng, outputs)]);
    return m;
}

MealyMachine random_partial_mealy(std::uint64_t seed, int states, int inputs, int outputs,
                                  int keep_percent) {
    std::mt19937_64 rng(seed);
    MealyMachine m(letter_inputs(inputs), states, 0);
    std::vector<int> out_ids;
    for (int o = 0; o < outputs; ++o) out_ids.push_back(m.intern_output(std::to_string(o)));
    bool any = false;
    for (int q = 0; q < states; ++q)
        for (int i = 0; i < inputs; ++i)
            if (static_cast<int>(draw_below(rng, 100)) < keep_percent) {
                m.set_edge(q, i, draw_index(rng, states), out_ids[draw_index(rng, outputs)]);
                any = true;
            }
    if (!any) m.set_edge(0, 0, 0, out_ids[0]);
    return m;
}

MealyMachine random_strongly_connected(std::uint64_t seed, int states, int inputs, int outputs) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        MealyMachine m = random_mealy(seed + 0x9e3779b97f4a7c15ull * attempt, states, inputs, outputs);
        if (strongly_connected(m)) return m;
    }
}

}  // namespace mlearn
