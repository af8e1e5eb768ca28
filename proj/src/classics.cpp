#include "qbound/classics.hpp"

#include "qbound/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace qbound {

bool is_arithmetic_cadence(const Word& w, const Cadence& c) {
    if (c.positions.empty() || c.difference == 0) {
        return false;
    }
    for (std::size_t j = 0; j < c.positions.size(); ++j) {
        const std::size_t pos = c.positions[j];
        if (pos != c.positions.front() + j * c.difference || pos == 0 || pos > w.size()) {
            return false;
        }
        if (w[pos - 1] != w[c.positions.front() - 1]) {
            return false;
        }
    }
    return true;
}

std::optional<Cadence> find_arithmetic_cadence(const Word& w, std::size_t s) {
    if (s == 0) {
        throw InvalidInput("cadence order must be at least 1");
    }
    const std::size_t len = w.size();
    if (len < s) {
        return std::nullopt;
    }
    if (s == 1) {
        return Cadence{{1}, 1};
    }
    const std::size_t max_diff = (len - 1) / (s - 1);
    for (std::size_t d = 1; d <= max_diff; ++d) {
        const std::size_t span = d * (s - 1);
        for (std::size_t start = 0; start + span < len; ++start) {
            const Symbol a = w[start];
            std::size_t j = 1;
            while (j < s && w[start + j * d] == a) {
                ++j;
            }
            if (j == s) {
                Cadence c;
                c.difference = d;
                for (std::size_t t = 0; t < s; ++t) {
                    c.positions.push_back(start + t * d + 1);
                }
                return c;
            }
        }
    }
    return std::nullopt;
}

Word NDivision::assemble() const {
    Word out = u;
    for (const Word& x : factors) {
        out = out.concat(x);
    }
    return out.concat(v);
}

namespace {

// Every nontrivial reordering of the factors must produce a word above w.
bool all_reorderings_greater(const Word& w, const Word& u, const std::vector<Word>& factors,
                             const Word& v, const SymbolOrder& order) {
    std::vector<std::size_t> sigma(factors.size());
    std::iota(sigma.begin(), sigma.end(), std::size_t{0});
    while (std::next_permutation(sigma.begin(), sigma.end())) {
        Word candidate = u;
        for (std::size_t idx : sigma) {
            candidate = candidate.concat(factors[idx]);
        }
        candidate = candidate.concat(v);
        if (!lex_less(w, candidate, order)) {
            return false;
        }
    }
    return true;
}

struct DivisionSearch {
    const Word& w;
    std::size_t n;
    const SymbolOrder& order;
    std::vector<std::size_t> cuts;  // cuts[0] = |u|, cuts[j] = end of x_j

    std::optional<NDivision> run() {
        for (std::size_t head = 0; head + n <= w.size(); ++head) {
            cuts.assign(1, head);
            if (auto found = extend()) {
                return found;
            }
        }
        return std::nullopt;
    }

    std::optional<NDivision> extend() {
        const std::size_t placed = cuts.size() - 1;
        if (placed == n) {
            NDivision d;
            d.u = w.slice(0, cuts[0]);
            for (std::size_t j = 1; j <= n; ++j) {
                d.factors.push_back(w.slice(cuts[j - 1], cuts[j]));
            }
            d.v = w.slice(cuts[n], w.size());
            if (all_reorderings_greater(w, d.u, d.factors, d.v, order)) {
                return d;
            }
            return std::nullopt;
        }
        const std::size_t remaining = n - placed - 1;
        for (std::size_t end = cuts.back() + 1; end + remaining <= w.size(); ++end) {
            cuts.push_back(end);
            auto found = extend();
            cuts.pop_back();
            if (found) {
                return found;
            }
        }
        return std::nullopt;
    }
};

}  // namespace

bool is_n_division(const Word& w, const NDivision& d, const SymbolOrder& order) {
    if (d.factors.size() < 2) {
        return false;
    }
    for (const Word& x : d.factors) {
        if (x.empty()) {
            return false;
        }
    }
    if (d.assemble() != w) {
        return false;
    }
    return all_reorderings_greater(w, d.u, d.factors, d.v, order);
}

std::optional<NDivision> find_n_division(const Word& w, std::size_t n, const SymbolOrder& order) {
    if (n < 2) {
        throw InvalidInput("n-division needs n >= 2");
    }
    if (w.size() > kNDivisionMaxLength || n > kNDivisionMaxN) {
        throw CapExceeded("n-division search is capped at length " +
                          std::to_string(kNDivisionMaxLength) + " and n " +
                          std::to_string(kNDivisionMaxN));
    }
    return DivisionSearch{w, n, order, {}}.run();
}

}  // namespace qbound
