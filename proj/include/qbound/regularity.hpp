// regularity.hpp -- permutation-structure certificates in q-bounded words.
//
// A structure certificate for a word α and a size m is a subalphabet A with
// |A| = m together with a factorization α = α_1 ... α_p such that every
// condensed factor (α_i)_A is a permutation of A. Certificates are cheap to
// verify, so the finder's soundness is always enforced by `verify_structure`.

#pragma once

#include "qbound/words.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace qbound {

struct StructureCertificate {
    Alphabet A;
    std::size_t p = 1;
    /// Prefix lengths after which α is cut; p - 1 entries, strictly increasing.
    std::vector<std::size_t> splits;

    friend bool operator==(const StructureCertificate&, const StructureCertificate&) = default;
};

enum class SearchMode { Exhaustive, Greedy };

struct SearchLimits {
    std::size_t max_length = 20000;
    std::size_t max_q = 8;
    /// Exhaustive mode throws CapExceeded beyond this many search nodes.
    std::uint64_t node_budget = 200'000'000;
    /// Greedy mode: backtracking nodes allowed per factorization.
    std::uint64_t greedy_nodes_per_factorization = 4096;
    /// Greedy mode: factorizations examined before giving up.
    std::uint64_t greedy_factorizations = 200'000;
};

struct SearchOutcome {
    std::optional<StructureCertificate> certificate;
    /// True when absence of a certificate is a proof of nonexistence.
    bool exhaustive = false;
    std::uint64_t nodes = 0;
};

[[nodiscard]] bool verify_structure(const Word& alpha, const StructureCertificate& cert,
                                    std::size_t m);

/// Searches p = 1..q, then cut positions in lexicographic order, then
/// subalphabets in first-occurrence order. Throws InvalidInput when α is not
/// q-bounded or m == 0, and CapExceeded when an exhaustive request is too big.
[[nodiscard]] SearchOutcome find_structure(const Word& alpha, std::size_t m, std::size_t q,
                                           SearchMode mode = SearchMode::Exhaustive,
                                           const SearchLimits& limits = {});

/// γ_1 γ_2 ... γ_{m-1} with γ_i = a_{i,1} ... a_{i,m} a_{i,m-1} ... a_{i,1},
/// a_{i,j} coded as (i-1)m + j. A 2-bounded word over m(m-1) symbols that has
/// no structure certificate of size m. Throws InvalidInput for m < 2.
[[nodiscard]] Word remark5_witness(std::size_t m);

/// Known closed forms: N(1,q)=1, N(m,1)=m, N(m,2)=m^2-m+1. Empty otherwise.
[[nodiscard]] std::optional<std::uint64_t> known_threshold(std::uint64_t m, std::uint64_t q);

struct AlphabetSizeReport {
    std::size_t alphabet_size = 0;
    std::uint64_t words_checked = 0;
    std::uint64_t violations = 0;
    /// First violating word in enumeration order, if any.
    std::optional<Word> example_violation;
    /// Sizes below m are violated by every word and are not enumerated.
    bool trivial = false;
};

struct ThresholdReport {
    std::size_t m = 0;
    std::size_t q = 0;
    std::size_t cap = 0;
    /// Least alphabet size s such that every q-bounded word over s symbols
    /// admits a certificate; empty when the cap was reached first.
    std::optional<std::size_t> N;
    /// True when N was established by complete enumeration.
    bool exhaustive = false;
    std::vector<AlphabetSizeReport> sizes;
};

/// Enumerates every canonical q-bounded word over exactly s symbols for
/// s = 1, 2, ... up to `alphabet_cap` and runs the exhaustive finder on each.
/// Existence is monotone in s (erasing a letter preserves certificates), so
/// the first size without violations is N(m,q).
[[nodiscard]] ThresholdReport compute_N(std::size_t m, std::size_t q, std::size_t alphabet_cap);

/// Calls `visit` for every canonical word (first occurrences in order 1,2,...)
/// using all of 1..s with each symbol occurring between 1 and q times.
template <typename Visitor>
void for_each_canonical_word(std::size_t s, std::size_t q, Visitor&& visit);

}  // namespace qbound

#include "qbound/detail/canonical_enum.hpp"
