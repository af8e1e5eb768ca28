// nesting.hpp -- aligned block structure across several permutations.
//
// Three layers:
//   * partition_bijection: perfect matching between two equal-block partitions
//     so that matched blocks share at least x elements.
//   * factorization_subset: picks B ⊆ A so that the projections of a chain of
//     permutations factor into blocks with equal alphabets level by level.
//   * find_attack_structure: combines a structure certificate with the
//     subset construction into the nested factorization the generalized
//     multicollision attack consumes.

#pragma once

#include "qbound/regularity.hpp"
#include "qbound/words.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace qbound {

struct PartitionPair {
    Alphabet ground;
    std::vector<Alphabet> blocks_b;
    std::vector<Alphabet> blocks_c;
    std::size_t x = 1;
};

/// Same number of blocks, all blocks equally sized, each family a partition of
/// the ground set.
[[nodiscard]] bool is_well_formed(const PartitionPair& pp);

/// σ (0-based) with |B_i ∩ C_σ(i)| >= x for every i, or nullopt when no
/// perfect matching exists. Rows are matched in order; each row takes the
/// smallest free admissible column when one exists and otherwise augments.
/// A matching always exists once |A| >= k^3 x. Throws InvalidInput when the
/// pair is malformed.
[[nodiscard]] std::optional<std::vector<std::size_t>> partition_bijection(const PartitionPair& pp);

/// Block alphabets of one level of a nesting certificate.
struct NestingLevel {
    /// Number of equal-length blocks used at this level.
    std::size_t blocks = 0;
    /// alph of the blocks of π_B(w_i) and π_B(w_{i+1}), in order.
    std::vector<Alphabet> upper;
    std::vector<Alphabet> lower;
    /// upper[j] has the same alphabet as lower[match[j]].
    std::vector<std::size_t> match;

    friend bool operator==(const NestingLevel&, const NestingLevel&) = default;
};

enum class NestingClaim {
    /// Consecutive levels aligned, last permutation evenly spread.
    Factorization,
    /// All block counts equal; every pair of permutations aligned.
    Corollary,
};

struct NestingCertificate {
    Alphabet B;
    NestingClaim claim = NestingClaim::Factorization;
    std::vector<NestingLevel> levels;
    /// alph(π_B(u_j)) for the d_r equal blocks u_j of the last permutation.
    std::vector<Alphabet> tail;

    friend bool operator==(const NestingCertificate&, const NestingCertificate&) = default;
};

/// Given permutations w_1..w_{r+1} of A and d_0..d_r with d_i | d_{i-1} and
/// |A| = d_0 d_1^2 ... d_r^2, returns a verified certificate with |B| = d_0.
/// Throws InvalidInput on precondition violations and ConstructionDefect if a
/// guaranteed matching is missing.
[[nodiscard]] NestingCertificate factorization_subset(const std::vector<Word>& perms,
                                                      const std::vector<std::size_t>& d);

/// The constant-block special case: |A| = d_0 d^{2r}, r = perms.size() - 1.
[[nodiscard]] NestingCertificate corollary_subset(const std::vector<Word>& perms, std::size_t d0,
                                                  std::size_t d);

/// Pure recomputation of every recorded block alphabet and alignment claim.
[[nodiscard]] bool verify_nesting(const std::vector<Word>& perms, const std::vector<std::size_t>& d,
                                  const NestingCertificate& cert);

struct AttackCertificate {
    Alphabet B;
    std::size_t p = 1;
    std::vector<std::size_t> splits;
    std::size_t n = 1;
    std::size_t k = 1;

    friend bool operator==(const AttackCertificate&, const AttackCertificate&) = default;
};

/// Checks |B| = n^{p-1} k, that each (α_i)_B is a permutation of B, and that
/// every length-n^{i-1} block of (α_i)_B lies inside some length-n^i block of
/// (α_{i+1})_B.
[[nodiscard]] bool verify_attack_structure(const Word& alpha, std::size_t n, std::size_t k,
                                           const AttackCertificate& cert);

/// Subalphabet size the pipeline asks the structure finder for when the
/// factorization has p parts: k, nk, and n^{(p-1)^2} k^{2p-1} for p >= 3.
/// Saturates at UINT64_MAX.
[[nodiscard]] std::uint64_t attack_subalphabet_size(std::uint64_t n, std::uint64_t k,
                                                    std::uint64_t p);

/// |alph(α)| the pipeline requires before it promises success; empty when the
/// exact threshold is unknown (q >= 3).
[[nodiscard]] std::optional<std::uint64_t> attack_alphabet_threshold(std::uint64_t n,
                                                                     std::uint64_t k,
                                                                     std::uint64_t q);

struct AttackStructureOptions {
    /// Refuse inputs below attack_alphabet_threshold (when known).
    bool require_threshold = true;
    SearchLimits limits;
};

/// Structure certificate of size attack_subalphabet_size(n, k, q), trimmed to
/// the size the found p needs, then (p >= 3) the subset construction on the
/// condensed factors. Throws InvalidInput for non-q-bounded α or bad
/// parameters, ThresholdNotMet below the threshold, and ConstructionDefect if
/// a guaranteed construction fails.
[[nodiscard]] AttackCertificate find_attack_structure(const Word& alpha, std::size_t n,
                                                      std::size_t k, std::size_t q,
                                                      const AttackStructureOptions& options = {});

}  // namespace qbound
