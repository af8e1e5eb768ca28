// words.hpp -- word and alphabet value types plus the projection operators.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qbound {

using Symbol = std::uint32_t;

/// Immutable finite sequence of symbols. The empty word is `Word{}`.
class Word {
public:
    Word() = default;
    Word(std::initializer_list<Symbol> symbols) : symbols_(symbols) {}
    explicit Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}

    [[nodiscard]] std::size_t size() const noexcept { return symbols_.size(); }
    [[nodiscard]] bool empty() const noexcept { return symbols_.empty(); }
    [[nodiscard]] Symbol operator[](std::size_t i) const { return symbols_[i]; }
    [[nodiscard]] std::span<const Symbol> symbols() const noexcept { return symbols_; }
    [[nodiscard]] auto begin() const noexcept { return symbols_.begin(); }
    [[nodiscard]] auto end() const noexcept { return symbols_.end(); }

    /// Factor [first, last) as a fresh word.
    [[nodiscard]] Word slice(std::size_t first, std::size_t last) const;
    [[nodiscard]] Word concat(const Word& other) const;

    friend bool operator==(const Word&, const Word&) = default;
    friend auto operator<=>(const Word&, const Word&) = default;

private:
    std::vector<Symbol> symbols_;
};

/// Finite set of symbols, stored sorted without duplicates.
class Alphabet {
public:
    Alphabet() = default;
    Alphabet(std::initializer_list<Symbol> symbols);
    explicit Alphabet(std::vector<Symbol> symbols);

    [[nodiscard]] std::size_t size() const noexcept { return symbols_.size(); }
    [[nodiscard]] bool empty() const noexcept { return symbols_.empty(); }
    [[nodiscard]] bool contains(Symbol s) const;
    [[nodiscard]] bool is_subset_of(const Alphabet& other) const;
    [[nodiscard]] Alphabet intersect(const Alphabet& other) const;
    [[nodiscard]] std::span<const Symbol> symbols() const noexcept { return symbols_; }
    [[nodiscard]] auto begin() const noexcept { return symbols_.begin(); }
    [[nodiscard]] auto end() const noexcept { return symbols_.end(); }

    friend bool operator==(const Alphabet&, const Alphabet&) = default;
    friend auto operator<=>(const Alphabet&, const Alphabet&) = default;

private:
    std::vector<Symbol> symbols_;
};

struct WordStats {
    Alphabet alphabet;
    std::map<Symbol, std::size_t> counts;
    std::size_t max_count = 0;

    /// Every symbol occurs at most q times.
    [[nodiscard]] bool is_bounded(std::size_t q) const noexcept { return max_count <= q; }
};

[[nodiscard]] WordStats word_stats(const Word& w);
[[nodiscard]] Alphabet alph(const Word& w);

/// Erase every symbol outside `b`.
[[nodiscard]] Word project(const Word& w, const Alphabet& b);

/// Project onto `b`, then collapse each maximal run of equal symbols to one.
[[nodiscard]] Word condense(const Word& w, const Alphabet& b);

/// True iff every symbol of `a` occurs exactly once in `w` and nothing else does.
[[nodiscard]] bool is_permutation(const Word& w, const Alphabet& a);

/// Strict total order on symbols used by `lex_less`; defaults to numeric order.
using SymbolOrder = std::function<bool(Symbol, Symbol)>;

/// Order induced by an explicit ranking, smallest first. Symbols missing from
/// the ranking sort after all ranked ones, numerically among themselves.
[[nodiscard]] SymbolOrder ranked_order(std::span<const Symbol> smallest_first);

/// u <_lex v: either v = u·t with t nonempty, or u and v first differ at a
/// position where u's symbol is smaller.
[[nodiscard]] bool lex_less(const Word& u, const Word& v, const SymbolOrder& order = {});

/// Cuts `w` after each listed prefix length. Cuts must be strictly increasing
/// and lie strictly inside the word, so every factor is nonempty; returns
/// nullopt otherwise.
[[nodiscard]] std::optional<std::vector<Word>> factor_at_cuts(const Word& w,
                                                             std::span<const std::size_t> cuts);

/// Splits `w` into `blocks` factors of equal length; nullopt when the length
/// is not divisible.
[[nodiscard]] std::optional<std::vector<Word>> equal_blocks(const Word& w, std::size_t blocks);

/// Renames symbols to 1, 2, 3, ... in order of first occurrence.
[[nodiscard]] Word canonical_form(const Word& w);

// Text format: one word per line, space-separated decimal symbols, empty line
// for the empty word.
[[nodiscard]] std::vector<Word> parse_words(std::string_view text);
[[nodiscard]] std::vector<Word> read_words(std::istream& in);
[[nodiscard]] std::string format_word(const Word& w);
[[nodiscard]] std::string format_words(std::span<const Word> words);

}  // namespace qbound
