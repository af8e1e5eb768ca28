// classics.hpp -- exhaustive finders for arithmetic cadences and n-divisions.
//
// Both searches are brute force with explicit size caps; they decide the
// predicates on concrete words and never attempt the existence constants.

#pragma once

#include "qbound/words.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace qbound {

/// Equally spaced positions (1-based) carrying the same symbol.
struct Cadence {
    std::vector<std::size_t> positions;
    std::size_t difference = 1;

    [[nodiscard]] std::size_t order() const noexcept { return positions.size(); }
};

/// True iff `c` is an arithmetic cadence of `w` with its recorded difference.
[[nodiscard]] bool is_arithmetic_cadence(const Word& w, const Cadence& c);

/// First arithmetic cadence of order `s`, scanning differences upward and then
/// start positions upward. Throws InvalidInput for s == 0.
[[nodiscard]] std::optional<Cadence> find_arithmetic_cadence(const Word& w, std::size_t s);

/// w = u x_1 ... x_n v with nonempty x_j.
struct NDivision {
    Word u;
    std::vector<Word> factors;
    Word v;

    [[nodiscard]] Word assemble() const;
};

/// Caps on the exhaustive n-division search.
inline constexpr std::size_t kNDivisionMaxLength = 16;
inline constexpr std::size_t kNDivisionMaxN = 5;

/// Checks that `d` reassembles to `w` and that every nontrivial reordering of
/// its middle factors yields a lexicographically greater word.
[[nodiscard]] bool is_n_division(const Word& w, const NDivision& d, const SymbolOrder& order = {});

/// Exhaustive search over factorizations (outer cut first, then inner cuts,
/// both ascending) and permutations. Throws InvalidInput for n < 2 and
/// CapExceeded above kNDivisionMaxLength / kNDivisionMaxN.
[[nodiscard]] std::optional<NDivision> find_n_division(const Word& w, std::size_t n,
                                                       const SymbolOrder& order = {});

}  // namespace qbound
