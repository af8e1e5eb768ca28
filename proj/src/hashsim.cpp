#include "qbound/hashsim.hpp"

#include "qbound/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace qbound {

CompressionOracle::CompressionOracle(unsigned n, unsigned m, std::uint64_t seed)
    : n_(n), m_(m), seed_(seed), key_(mix64(seed ^ 0xa0761d6478bd642fULL)) {
    if (n < 1 || n > 32 || m <= n || m > 64) {
        throw InvalidInput("oracle widths need 1 <= n <= 32 and n < m <= 64");
    }
}

HashValue CompressionOracle::compress(HashValue h, Block b) {
    if ((h.value & ~hash_mask()) != 0 || (b.value & ~block_mask()) != 0) {
        throw InvalidInput("hash value or block exceeds the oracle's bit width");
    }
    ++raw_calls_;
    const auto key = std::make_pair(h.value, b.value);
    if (const auto it = memo_.find(key); it != memo_.end()) {
        return HashValue{it->second};
    }
    const std::uint64_t z =
        mix64(mix64(b.value ^ key_) + (std::uint64_t{h.value} * 0x9e3779b97f4a7c15ULL) + key_);
    const auto out = static_cast<std::uint32_t>(z >> 32) & hash_mask();
    memo_.emplace(key, out);
    return HashValue{out};
}

BlockSampler::BlockSampler(unsigned m, std::uint64_t seed)
    : m_(m),
      mask_(m >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1)),
      k0_(mix64(seed ^ 0x510e527fade682d1ULL)),
      k1_(mix64(seed ^ 0x9b05688c2b3e6c1fULL) | 1U) {
    if (m == 0 || m > 64) {
        throw InvalidInput("block width must be in 1..64");
    }
}

Block BlockSampler::at(std::uint64_t index) const {
    // Xor with a key, multiply by an odd constant, and xorshift are each
    // bijective modulo 2^m, so their composition is too.
    const unsigned shift = std::max(1U, m_ / 2);
    std::uint64_t x = (index ^ k0_) & mask_;
    x = (x * k1_) & mask_;
    x ^= x >> shift;
    x = (x * 0xd6e8feb86659fd93ULL) & mask_;
    x ^= x >> shift;
    x = (x * (k0_ | 1U)) & mask_;
    x ^= x >> shift;
    return Block{x};
}

Block BlockSampler::next() {
    if (m_ < 64 && counter_ > mask_) {
        throw std::runtime_error("block sampler exhausted");
    }
    return at(counter_++);
}

HashValue f_plus(CompressionOracle& o, HashValue h, std::span<const Block> blocks) {
    if (blocks.empty()) {
        throw InvalidInput("f+ needs a nonempty block sequence");
    }
    for (Block b : blocks) {
        h = o.compress(h, b);
    }
    return h;
}

HashValue f_alpha(CompressionOracle& o, HashValue h, std::span<const Block> blocks,
                  const Word& alpha) {
    if (alpha.empty()) {
        throw InvalidInput("f_alpha needs a nonempty schedule word");
    }
    for (Symbol i : alpha) {
        if (i == 0 || i > blocks.size()) {
            throw InvalidInput("schedule index " + std::to_string(i) + " outside 1.." +
                               std::to_string(blocks.size()));
        }
    }
    for (Symbol i : alpha) {
        h = o.compress(h, blocks[i - 1]);
    }
    return h;
}

Word Schedule::word(std::size_t l) const {
    if (l == 0) {
        throw InvalidInput("schedules are indexed from l = 1");
    }
    return generator_(l);
}

Schedule identity_schedule() {
    return Schedule("identity", 1, [](std::size_t l) {
        std::vector<Symbol> out(l);
        for (std::size_t i = 0; i < l; ++i) {
            out[i] = static_cast<Symbol>(i + 1);
        }
        return Word(std::move(out));
    });
}

Schedule mirror_schedule() {
    return Schedule("mirror", 2, [](std::size_t l) {
        std::vector<Symbol> out(2 * l);
        for (std::size_t i = 0; i < l; ++i) {
            out[i] = static_cast<Symbol>(i + 1);
            out[2 * l - 1 - i] = static_cast<Symbol>(i + 1);
        }
        return Word(std::move(out));
    });
}

Schedule file_schedule(std::vector<Word> words) {
    std::size_t q = 0;
    for (std::size_t idx = 0; idx < words.size(); ++idx) {
        const std::size_t l = idx + 1;
        const WordStats stats = word_stats(words[idx]);
        const auto symbols = stats.alphabet.symbols();
        if (symbols.size() != l || symbols.front() != 1 || symbols.back() != l) {
            throw InvalidInput("schedule line " + std::to_string(l) + " must use exactly 1.." +
                               std::to_string(l));
        }
        q = std::max(q, stats.max_count);
    }
    auto shared = std::make_shared<const std::vector<Word>>(std::move(words));
    return Schedule("file", q, [shared](std::size_t l) {
        if (l > shared->size()) {
            throw InvalidInput("schedule file provides only " + std::to_string(shared->size()) +
                               " words");
        }
        return (*shared)[l - 1];
    });
}

HashValue gihf_eval(CompressionOracle& o, const Schedule& sched, HashValue h0,
                    std::span<const Block> message) {
    if (message.empty()) {
        throw InvalidInput("messages have at least one block");
    }
    return f_alpha(o, h0, message, sched.word(message.size()));
}

BirthdayResult birthday_search(CompressionOracle& o, HashValue h, std::size_t k,
                               BlockSampler& sampler) {
    if (k < 2) {
        throw InvalidInput("a k-collision needs k >= 2");
    }
    const std::uint64_t before = o.query_count();
    std::unordered_map<std::uint32_t, std::vector<Block>> seen;
    while (true) {
        const Block b = sampler.next();
        const HashValue v = o.compress(h, b);
        auto& bucket = seen[v.value];
        bucket.push_back(b);
        if (bucket.size() == k) {
            return BirthdayResult{bucket, v, o.query_count() - before};
        }
    }
}

}  // namespace qbound
