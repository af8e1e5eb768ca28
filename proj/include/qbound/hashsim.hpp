// hashsim.hpp -- simulated compression function with exact query accounting.
//
// The oracle is a seeded keyed mixer over (h, b) truncated to n bits. It
// memoizes every pair it has answered, so `query_count()` is the number of
// distinct queries, which is the cost measure used throughout the attacks.

#pragma once

#include "qbound/words.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace qbound {

struct HashValue {
    std::uint32_t value = 0;
    friend bool operator==(HashValue, HashValue) = default;
    friend auto operator<=>(HashValue, HashValue) = default;
};

struct Block {
    std::uint64_t value = 0;
    friend bool operator==(Block, Block) = default;
    friend auto operator<=>(Block, Block) = default;
};

/// splitmix64 finalizer; bijective on 64-bit values.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Independent sub-seed for (stream, index) under a base seed.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                                  std::uint64_t index) noexcept {
    return mix64(mix64(base ^ 0x6a09e667f3bcc909ULL) + mix64(stream + 0x3c6ef372fe94f82bULL) +
                 index * 0x9e3779b97f4a7c15ULL);
}

class CompressionOracle {
public:
    /// 1 <= n <= 32, n < m <= 64. Throws InvalidInput otherwise.
    CompressionOracle(unsigned n, unsigned m, std::uint64_t seed);

    [[nodiscard]] unsigned n() const noexcept { return n_; }
    [[nodiscard]] unsigned m() const noexcept { return m_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    /// f(h, b). Throws InvalidInput when h or b exceed the configured widths.
    HashValue compress(HashValue h, Block b);

    /// Number of distinct (h, b) pairs evaluated so far; equals memo size.
    [[nodiscard]] std::uint64_t query_count() const noexcept { return memo_.size(); }
    /// Every call to compress, including repeats.
    [[nodiscard]] std::uint64_t raw_calls() const noexcept { return raw_calls_; }

    /// Same function, empty memo and zeroed counters.
    [[nodiscard]] CompressionOracle clone() const { return CompressionOracle(n_, m_, seed_); }

    [[nodiscard]] std::uint32_t hash_mask() const noexcept {
        return n_ == 32 ? 0xffffffffU : ((std::uint32_t{1} << n_) - 1);
    }
    [[nodiscard]] std::uint64_t block_mask() const noexcept {
        return m_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << m_) - 1);
    }

private:
    struct KeyHash {
        std::size_t operator()(const std::pair<std::uint32_t, std::uint64_t>& k) const noexcept {
            return static_cast<std::size_t>(mix64(k.second ^ (std::uint64_t{k.first} << 29) ^ k.first));
        }
    };

    unsigned n_;
    unsigned m_;
    std::uint64_t seed_;
    std::uint64_t key_;
    std::uint64_t raw_calls_ = 0;
    std::unordered_map<std::pair<std::uint32_t, std::uint64_t>, std::uint32_t, KeyHash> memo_;
};

/// Distinct blocks in a seeded pseudorandom order: the i-th block is the image
/// of i under a keyed bijection of {0, ..., 2^m - 1}.
class BlockSampler {
public:
    BlockSampler(unsigned m, std::uint64_t seed);

    /// Next unused block; throws std::runtime_error once all 2^m are used.
    Block next();
    /// Image of `index` under the sampler's bijection (does not advance).
    [[nodiscard]] Block at(std::uint64_t index) const;
    [[nodiscard]] std::uint64_t drawn() const noexcept { return counter_; }

private:
    unsigned m_;
    std::uint64_t mask_;
    std::uint64_t k0_;
    std::uint64_t k1_;
    std::uint64_t counter_ = 0;
};

/// f+(h, b_1 ... b_s): left fold of compress. Throws InvalidInput when empty.
HashValue f_plus(CompressionOracle& o, HashValue h, std::span<const Block> blocks);

/// f_α(h, b_1 ... b_l) = f+(h, b_{i_1} ... b_{i_s}) for α = i_1 ... i_s.
/// Throws InvalidInput for an empty α or an index outside 1..l.
HashValue f_alpha(CompressionOracle& o, HashValue h, std::span<const Block> blocks,
                  const Word& alpha);

/// A family α_1, α_2, ... with alph(α_l) = {1..l} and every symbol used at
/// most q_bound times.
class Schedule {
public:
    using Generator = std::function<Word(std::size_t)>;

    Schedule(std::string name, std::size_t q_bound, Generator generator)
        : name_(std::move(name)), q_bound_(q_bound), generator_(std::move(generator)) {}

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::size_t q_bound() const noexcept { return q_bound_; }
    /// α_l; throws InvalidInput for l == 0 or l beyond what the family provides.
    [[nodiscard]] Word word(std::size_t l) const;

private:
    std::string name_;
    std::size_t q_bound_;
    Generator generator_;
};

/// α_l = 1 2 ... l (the traditional iterated hash).
[[nodiscard]] Schedule identity_schedule();
/// α_l = 1 2 ... l l ... 2 1.
[[nodiscard]] Schedule mirror_schedule();
/// α_l is the l-th of `words`. Each must use exactly {1..l}; q_bound is the
/// largest symbol count seen. Throws InvalidInput on malformed lines.
[[nodiscard]] Schedule file_schedule(std::vector<Word> words);

/// H(h0, x) = f_{α_j}(h0, x) for a message of j blocks.
HashValue gihf_eval(CompressionOracle& o, const Schedule& sched, HashValue h0,
                    std::span<const Block> message);

struct BirthdayResult {
    std::vector<Block> blocks;
    HashValue digest;
    /// Distinct oracle queries spent.
    std::uint64_t queries = 0;
};

/// Draws blocks from `sampler` until k of them share compress(h, .) under a
/// hash table of every value seen. Throws InvalidInput for k < 2.
BirthdayResult birthday_search(CompressionOracle& o, HashValue h, std::size_t k,
                               BlockSampler& sampler);

}  // namespace qbound
