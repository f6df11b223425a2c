#pragma once

#include <string>
#include <vector>

namespace mlearn {

/// Input word: a sequence of input symbols. Output words use the same
/// representation; a trace pairs an input word with an output word of
/// equal length.
using Word = std::vector<std::string>;
using OutputWord = std::vector<std::string>;

inline std::string join_word(const Word& w, char sep = '.') {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i > 0) s += sep;
        s += w[i];
    }
    return s;
}

template <typename T>
std::vector<T> concat(std::vector<T> a, const std::vector<T>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

inline Word prefix_of(const Word& w, std::size_t len) {
    return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(len));
}

inline Word suffix_of(const Word& w, std::size_t from) {
    return Word(w.begin() + static_cast<std::ptrdiff_t>(from), w.end());
}

inline bool is_prefix(const Word& p, const Word& w) {
    if (p.size() > w.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != w[i]) return false;
    return true;
}

}  // namespace mlearn
