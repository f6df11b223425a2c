#include "mlearn/mutations.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>
#include <stdexcept>

#include "mlearn/rng.hpp"

namespace mlearn {

namespace {

std::string fresh_symbol(const MealyMachine& m, int ordinal, const std::set<std::string>& also_taken) {
    for (int n = ordinal;; ++n) {
        std::string candidate = "fresh_" + std::to_string(n);
        if (m.input_index(candidate) < 0 && !also_taken.count(candidate)) return candidate;
    }
}

MealyMachine prune_unreachable(const MealyMachine& m) {
    const int n = m.state_count();
    std::vector<int> renum(n, -1);
    std::vector<int> order;
    std::deque<int> queue{m.initial()};
    renum[m.initial()] = 0;
    order.push_back(m.initial());
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (int i = 0; i < m.input_count(); ++i) {
            if (!m.defined(q, i)) continue;
            int t = m.next(q, i);
            if (renum[t] < 0) {
                renum[t] = static_cast<int>(order.size());
                order.push_back(t);
                queue.push_back(t);
            }
        }
    }
    MealyMachine r(m.inputs(), static_cast<int>(order.size()), 0);
    for (int idx = 0; idx < static_cast<int>(order.size()); ++idx)
        for (int i = 0; i < m.input_count(); ++i)
            if (m.defined(order[idx], i))
                r.set_edge(idx, i, renum[m.next(order[idx], i)],
                           r.intern_output(m.output_symbol(m.output(order[idx], i))));
    return r;
}

// adds a fresh symbol that self-loops everywhere with the output of the given
// machine's initial state on its first input (shared by mut1 and mut14)
int default_loop_output(const MealyMachine& m) { return m.output(m.initial(), 0); }

MealyMachine mut1(const MealyMachine& m, std::mt19937_64&) {
    std::string fresh = fresh_symbol(m, 0, {});
    std::vector<std::string> inputs = m.inputs();
    inputs.push_back(fresh);
    MealyMachine r(inputs, m.state_count() + 1, m.state_count());
    const int dummy = m.state_count();
    const int loop_out = default_loop_output(m);
    for (int q = 0; q < m.state_count(); ++q)
        for (int i = 0; i < m.input_count(); ++i)
            r.set_edge(q, i, m.next(q, i), r.intern_output(m.output_symbol(m.output(q, i))));
    const int fresh_i = r.input_index(fresh);
    for (int q = 0; q < m.state_count(); ++q)
        r.set_edge(q, fresh_i, q, r.intern_output(m.output_symbol(loop_out)));
    // dummy self-loops every old input with the old initial state's outputs
    for (int i = 0; i < m.input_count(); ++i)
        r.set_edge(dummy, i, dummy, r.intern_output(m.output_symbol(m.output(m.initial(), i))));
    r.set_edge(dummy, fresh_i, m.initial(), r.intern_output(m.output_symbol(loop_out)));
    return r;
}

MealyMachine mut2(const MealyMachine& m, std::mt19937_64& rng) {
    MealyMachine r = m;
    r.state_names.clear();
    r.set_initial(draw_index(rng, m.state_count()));
    return prune_unreachable(r);
}

MealyMachine mut3(const MealyMachine& m, std::mt19937_64& rng) {
    MealyMachine r = m;
    r.state_names.clear();
    const int fresh = r.add_state();
    // redirect one random transition to the new state so it is reachable
    int from = draw_index(rng, m.state_count());
    int via = draw_index(rng, m.input_count());
    r.set_edge(from, via, fresh, r.output(from, via));
    for (int i = 0; i < r.input_count(); ++i) {
        int dest = draw_index(rng, r.state_count());
        int out;
        if (draw_below(rng, 100) < 80 && dest != fresh)
            out = r.output(dest, i);  // destination's own output for i
        else
            out = draw_index(rng, r.output_count());
        r.set_edge(fresh, i, dest, out);
    }
    return r;
}

MealyMachine mut4(const MealyMachine& m, std::mt19937_64& rng) {
    if (m.state_count() < 2) throw std::invalid_argument("mut4 needs at least two states");
    int victim = draw_index(rng, m.state_count() - 1);  // uniform over non-initial states
    if (victim >= m.initial()) ++victim;
    std::vector<int> renum(m.state_count());
    int idx = 0;
    for (int q = 0; q < m.state_count(); ++q) renum[q] = (q == victim) ? -1 : idx++;
    MealyMachine r(m.inputs(), m.state_count() - 1, renum[m.initial()]);
    for (int q = 0; q < m.state_count(); ++q) {
        if (q == victim) continue;
        for (int i = 0; i < m.input_count(); ++i) {
            if (!m.defined(q, i)) continue;
            int t = m.next(q, i);
            int out = r.intern_output(m.output_symbol(m.output(q, i)));
            if (t != victim) {
                r.set_edge(renum[q], i, renum[t], out);
            } else if (m.next(victim, i) == victim) {
                r.set_edge(renum[q], i, renum[q], out);  // shortcut would re-enter the victim
            } else {
                r.set_edge(renum[q], i, renum[m.next(victim, i)], out);
            }
        }
    }
    return r;
}

MealyMachine mut5(const MealyMachine& m, std::mt19937_64& rng, int redraw_cap) {
    for (int attempt = 0; attempt < redraw_cap; ++attempt) {
        MealyMachine r = m;
        r.state_names.clear();
        int q = draw_index(rng, m.state_count());
        int q2 = draw_index(rng, m.state_count());
        int i = draw_index(rng, m.input_count());
        r.set_edge(q, i, q2, r.output(q, i));
        if (language_equivalent(m, r).has_value()) return r;  // inequivalent: done
    }
    throw std::runtime_error("mut5: no inequivalent diversion found within the attempt cap");
}

MealyMachine mut6(const MealyMachine& m, std::mt19937_64& rng, int redraw_cap) {
    if (m.output_count() < 2)
        throw std::runtime_error("mut6: needs at least two distinct outputs");
    MealyMachine r = m;
    r.state_names.clear();
    int q = draw_index(rng, m.state_count());
    int i = draw_index(rng, m.input_count());
    for (int attempt = 0; attempt < redraw_cap; ++attempt) {
        int o = draw_index(rng, m.output_count());
        if (o != m.output(q, i)) {
            r.set_edge(q, i, r.next(q, i), o);
            return r;
        }
    }
    throw std::runtime_error("mut6: redraw cap exceeded");
}

MealyMachine mut7(const MealyMachine& m, std::mt19937_64& rng) {
    if (m.input_count() < 2) throw std::invalid_argument("mut7 needs at least two inputs");
    int victim = draw_index(rng, m.input_count());
    std::vector<std::string> kept;
    for (int i = 0; i < m.input_count(); ++i)
        if (i != victim) kept.push_back(m.input_symbol(i));
    return restrict_inputs(m, kept);
}

// disjoint union with one diverted edge from `host` state `at` into `guest`'s
// initial state; host keeps the state numbering and the initial state
MealyMachine append_machine(const MealyMachine& host, const MealyMachine& guest, int at,
                            std::mt19937_64& rng) {
    if (at < 0 || at >= host.state_count())
        throw std::invalid_argument("attach index out of range");
    MealyMachine r(host.inputs(), host.state_count() + guest.state_count(), host.initial());
    for (int q = 0; q < host.state_count(); ++q)
        for (int i = 0; i < host.input_count(); ++i)
            r.set_edge(q, i, host.next(q, i), r.intern_output(host.output_symbol(host.output(q, i))));
    const int base = host.state_count();
    for (int q = 0; q < guest.state_count(); ++q)
        for (int i = 0; i < guest.input_count(); ++i) {
            int hi = r.input_index(guest.input_symbol(i));
            r.set_edge(base + q, hi, base + guest.next(q, i),
                       r.intern_output(guest.output_symbol(guest.output(q, i))));
        }
    int via = draw_index(rng, host.input_count());
    r.set_edge(at, via, base + guest.initial(), r.output(at, via));
    return r;
}

int farthest_state(const MealyMachine& m) {
    std::vector<int> dist(m.state_count(), -1);
    std::deque<int> queue{m.initial()};
    dist[m.initial()] = 0;
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (int i = 0; i < m.input_count(); ++i) {
            if (!m.defined(q, i)) continue;
            int t = m.next(q, i);
            if (dist[t] < 0) {
                dist[t] = dist[q] + 1;
                queue.push_back(t);
            }
        }
    }
    int best = m.initial();
    for (int q = 0; q < m.state_count(); ++q)
        if (dist[q] > dist[best]) best = q;
    return best;
}

MealyMachine apply_op(const MealyMachine& m, const std::string& op, std::mt19937_64& rng,
                      const MutationSpec& spec);

MealyMachine mut10(const MealyMachine& m, std::mt19937_64& rng, const MutationSpec& spec) {
    MealyMachine r = apply_op(m, "mut3", rng, spec);
    r = apply_op(r, "mut4", rng, spec);
    r = apply_op(r, "mut5", rng, spec);
    return apply_op(r, "mut6", rng, spec);
}

MealyMachine mut13(const MealyMachine& m, std::mt19937_64& rng, const MutationSpec& spec) {
    MealyMachine r = mut10(m, rng, spec);
    r = mut10(r, rng, spec);
    return mut10(r, rng, spec);
}

MealyMachine mut14(const MealyMachine& m, std::mt19937_64& rng, const MutationSpec& spec) {
    MealyMachine other = mut13(m, rng, spec);
    std::string f0 = fresh_symbol(m, 0, {});
    std::string f1 = fresh_symbol(m, 0, {f0});
    std::vector<std::string> inputs = m.inputs();
    inputs.push_back(f0);
    inputs.push_back(f1);
    const int base_other = m.state_count();
    const int dummy = m.state_count() + other.state_count();
    MealyMachine r(inputs, dummy + 1, dummy);
    for (int q = 0; q < m.state_count(); ++q)
        for (int i = 0; i < m.input_count(); ++i)
            r.set_edge(q, i, m.next(q, i), r.intern_output(m.output_symbol(m.output(q, i))));
    for (int q = 0; q < other.state_count(); ++q)
        for (int i = 0; i < other.input_count(); ++i)
            r.set_edge(base_other + q, r.input_index(other.input_symbol(i)),
                       base_other + other.next(q, i),
                       r.intern_output(other.output_symbol(other.output(q, i))));
    const int i0 = r.input_index(f0), i1 = r.input_index(f1);
    const int loop_out = r.intern_output(m.output_symbol(default_loop_output(m)));
    for (int q = 0; q < dummy; ++q) {
        r.set_edge(q, i0, q, loop_out);
        r.set_edge(q, i1, q, loop_out);
    }
    for (int i = 0; i < m.input_count(); ++i)
        r.set_edge(dummy, i, dummy, r.intern_output(m.output_symbol(m.output(m.initial(), i))));
    r.set_edge(dummy, i0, m.initial(), loop_out);
    r.set_edge(dummy, i1, base_other + other.initial(), loop_out);
    return r;
}

MealyMachine apply_op(const MealyMachine& m, const std::string& op, std::mt19937_64& rng,
                      const MutationSpec& spec) {
    if (op == "mut1") return mut1(m, rng);
    if (op == "mut2") return mut2(m, rng);
    if (op == "mut3") return mut3(m, rng);
    if (op == "mut4") return mut4(m, rng);
    if (op == "mut5") return mut5(m, rng, spec.redraw_cap);
    if (op == "mut6") return mut6(m, rng, spec.redraw_cap);
    if (op == "mut7") return mut7(m, rng);
    if (op == "mut8") {
        MealyMachine guest = mut13(m, rng, spec);
        int at = spec.attach_index ? *spec.attach_index : farthest_state(m);
        return append_machine(m, guest, at, rng);
    }
    if (op == "mut9") {
        MealyMachine host = mut13(m, rng, spec);
        int at = spec.attach_index ? *spec.attach_index : farthest_state(host);
        return append_machine(host, m, at, rng);
    }
    if (op == "mut10") return mut10(m, rng, spec);
    if (op == "mut11") {
        MealyMachine r = mut2(m, rng);
        r = apply_op(r, "mut3", rng, spec);
        r = apply_op(r, "mut4", rng, spec);
        r = apply_op(r, "mut5", rng, spec);
        return apply_op(r, "mut6", rng, spec);
    }
    if (op == "mut12") {
        MealyMachine r = m;
        for (int round = 0; round < 3; ++round) {
            r = apply_op(r, "mut5", rng, spec);
            r = apply_op(r, "mut6", rng, spec);
        }
        return r;
    }
    if (op == "mut13") return mut13(m, rng, spec);
    if (op == "mut14") return mut14(m, rng, spec);
    throw std::invalid_argument("unknown mutation operator: " + op);
}

}  // namespace

MealyMachine mutate(const MealyMachine& m, const MutationSpec& spec) {
    if (!m.is_complete()) throw std::invalid_argument("mutate: machine must be complete");
    std::mt19937_64 rng(spec.seed);
    MealyMachine r = apply_op(m, spec.op, rng, spec);
    if (!r.is_complete()) throw std::logic_error("mutate: result machine is not complete");
    return r;
}

}  // namespace mlearn
