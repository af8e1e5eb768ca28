// attacks.hpp -- multicollision attacks on simulated (generalized) iterated
// hash functions, their verification, and the query-complexity bound.

#pragma once

#include "qbound/hashsim.hpp"
#include "qbound/nesting.hpp"
#include "qbound/words.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qbound {

inline constexpr double kDefaultATilde = 2.5;

enum class CollisionStrategy {
    /// Memoryless cycle finding (Floyd) on x -> F(embed(x)) over n-bit values.
    Rho,
    /// Fresh sampler blocks into a hash table until a value repeats.
    Table,
};

[[nodiscard]] std::string to_string(CollisionStrategy s);
/// Accepts "rho" and "table"; throws InvalidInput otherwise.
[[nodiscard]] CollisionStrategy parse_collision_strategy(const std::string& name);

struct PairCollision {
    Block first;
    Block second;
    HashValue next;
    std::uint64_t queries = 0;
};

/// Two distinct blocks b != b' with f(h, b) = f(h, b'). The sampler provides
/// table candidates or per-search keys for the rho embedding.
PairCollision block_pair_collision(CompressionOracle& o, HashValue h, BlockSampler& sampler,
                                   CollisionStrategy strategy = CollisionStrategy::Table);

/// One block position group: its positions (1-based) and the interchangeable
/// block assignments, each aligned with `positions`.
struct CollisionGroup {
    std::vector<std::size_t> positions;
    std::vector<std::vector<Block>> choices;

    friend bool operator==(const CollisionGroup&, const CollisionGroup&) = default;
};

/// Product-form multicollision: every combination of one choice per group,
/// written over `base_blocks`, is a message of `length` blocks.
struct MulticollisionSet {
    std::size_t length = 0;
    std::vector<CollisionGroup> groups;
    std::vector<Block> base_blocks;
    /// Claimed common hash value.
    HashValue digest;

    /// Product of the per-group choice counts, saturating at UINT64_MAX.
    [[nodiscard]] std::uint64_t expansion_size() const;
    /// Message for a mixed-radix index (group 0 is the least significant digit).
    [[nodiscard]] std::vector<Block> message(std::uint64_t index) const;

    friend bool operator==(const MulticollisionSet&, const MulticollisionSet&) = default;
};

struct MulticollisionCheck {
    bool ok = false;
    /// True when the expansion exceeded the cap and only a sample was hashed.
    bool sampled = false;
    std::uint64_t messages_checked = 0;
    bool well_formed = false;
    bool digests_equal = false;
    bool distinct = false;
};

inline constexpr std::uint64_t kDefaultExpansionCap = std::uint64_t{1} << 16;

/// Hashes every expanded message (or `cap` sampled ones) on `audit`, which
/// should be a clone so the attack's counter is unaffected.
[[nodiscard]] MulticollisionCheck verify_multicollision(CompressionOracle audit,
                                                        const Schedule& sched, HashValue h0,
                                                        const MulticollisionSet& mc,
                                                        std::uint64_t cap = kDefaultExpansionCap,
                                                        std::uint64_t sample_seed = 0);

struct ComplexityBound {
    double queries = 0;
    double log2_queries = 0;
    /// Subalphabet parameter fed into N.
    double m = 0;
    /// N(m, q) when exact, otherwise the upper estimate m^{2^{q-1}}.
    double N = 0;
    bool exact_N = false;
    /// Small enough to simulate.
    bool runnable = false;
};

/// ã q N(n^{(q-1)^2} r^{2q-3}, q) 2^{n/2}. For q = 1 the Joux value ã r 2^{n/2}
/// is used; for q >= 3 N is replaced by its upper estimate.
[[nodiscard]] ComplexityBound complexity_bound(unsigned n, std::size_t q, std::size_t r,
                                               double a_tilde = kDefaultATilde);

struct AttackReport {
    std::string kind;
    unsigned n = 0;
    unsigned m = 0;
    std::size_t q = 1;
    std::size_t r = 0;
    std::size_t l = 0;
    std::uint64_t seed = 0;
    std::uint64_t attack_queries = 0;
    std::uint64_t raw_calls = 0;
    double a_tilde = kDefaultATilde;
    double bound = 0;
    bool verify_ok = false;
    bool verify_sampled = false;
    std::string strategy;
    /// Distinct queries per stage (Joux) or per level (generalized).
    std::vector<std::uint64_t> stage_queries;
    std::size_t restarts = 0;
    // Generalized attack only.
    std::size_t p = 0;
    std::size_t b_size = 0;
    std::size_t level1_positions = 0;
    double level1_cost_by_positions = 0;
    double level1_cost_by_letters = 0;
};

struct AttackOutcome {
    MulticollisionSet collision;
    AttackReport report;
    std::optional<AttackCertificate> certificate;
};

struct AttackOptions {
    HashValue h0;
    /// Seeds the block sampler (fixed blocks and candidates).
    std::uint64_t seed = 0;
    CollisionStrategy strategy = CollisionStrategy::Table;
    double a_tilde = kDefaultATilde;
    std::uint64_t verify_cap = kDefaultExpansionCap;
    /// Message length override for the generalized attack; must be at least
    /// the threshold length.
    std::optional<std::size_t> length;
    std::size_t max_restarts = 8;
};

/// Joux: r chained block-pair collisions give a 2^r-collision on f+.
AttackOutcome joux_attack(CompressionOracle& o, std::size_t r, const AttackOptions& options = {});

/// Smallest message length whose schedule word is guaranteed to carry an
/// attack structure for (n, r, q); saturates for q >= 3.
[[nodiscard]] double attack_threshold_length(unsigned n, std::size_t r, std::size_t q);

/// The level-wise attack on a q-bounded gihf driven by an attack certificate.
/// Throws ThresholdNotMet (with the required length) when the chosen length is
/// too short and InvalidInput when n_param differs from the oracle's n.
AttackOutcome generalized_attack(CompressionOracle& o, const Schedule& sched, std::size_t q,
                                 unsigned n_param, std::size_t r,
                                 const AttackOptions& options = {});

}  // namespace qbound
