#pragma once

#include <cstddef>
#include <vector>

namespace qbound {

namespace detail {

template <typename Visitor>
void extend_canonical(std::vector<Symbol>& buf, std::vector<std::size_t>& counts,
                      std::size_t used, std::size_t s, std::size_t q, Visitor& visit) {
    if (used == s) {
        visit(Word(buf));
    }
    for (std::size_t sym = 1; sym <= used; ++sym) {
        if (counts[sym] < q) {
            ++counts[sym];
            buf.push_back(static_cast<Symbol>(sym));
            extend_canonical(buf, counts, used, s, q, visit);
            buf.pop_back();
            --counts[sym];
        }
    }
    if (used < s) {
        const std::size_t sym = used + 1;
        counts[sym] = 1;
        buf.push_back(static_cast<Symbol>(sym));
        extend_canonical(buf, counts, used + 1, s, q, visit);
        buf.pop_back();
        counts[sym] = 0;
    }
}

}  // namespace detail

template <typename Visitor>
void for_each_canonical_word(std::size_t s, std::size_t q, Visitor&& visit) {
    if (s == 0 || q == 0) {
        return;
    }
    std::vector<Symbol> buf;
    std::vector<std::size_t> counts(s + 1, 0);
    detail::extend_canonical(buf, counts, 0, s, q, visit);
}

}  // namespace qbound
