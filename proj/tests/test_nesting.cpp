#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qbound/errors.hpp"
#include "qbound/nesting.hpp"
#include "qbound/regularity.hpp"

#include <numeric>
#include <random>

using namespace qbound;

namespace {

// Random partition of {1..size} into k equal blocks.
std::vector<Alphabet> random_blocks(std::mt19937_64& rng, std::size_t size, std::size_t k) {
    std::vector<Symbol> all(size);
    std::iota(all.begin(), all.end(), 1);
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<Alphabet> out;
    const std::size_t len = size / k;
    for (std::size_t i = 0; i < k; ++i) {
        out.emplace_back(std::vector<Symbol>(all.begin() + i * len, all.begin() + (i + 1) * len));
    }
    return out;
}

Alphabet range_alphabet(std::size_t size) {
    std::vector<Symbol> v(size);
    std::iota(v.begin(), v.end(), 1);
    return Alphabet(std::move(v));
}

std::size_t overlap(const Alphabet& a, const Alphabet& b) { return a.intersect(b).size(); }

bool sigma_ok(const PartitionPair& pp, const std::vector<std::size_t>& sigma) {
    std::vector<char> used(sigma.size(), 0);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (sigma[i] >= sigma.size() || used[sigma[i]] ||
            overlap(pp.blocks_b[i], pp.blocks_c[sigma[i]]) < pp.x) {
            return false;
        }
        used[sigma[i]] = 1;
    }
    return true;
}

std::vector<Word> random_perms(std::mt19937_64& rng, std::size_t count, std::size_t size) {
    std::vector<Word> out;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(oracle::random_permutation(rng, size));
    }
    return out;
}

}  // namespace

TEST_CASE("partition_bijection examples") {
    PartitionPair single{Alphabet{1, 2, 3}, {Alphabet{1, 2, 3}}, {Alphabet{1, 2, 3}}, 3};
    CHECK(partition_bijection(single) == std::vector<std::size_t>{0});

    PartitionPair two{Alphabet{1, 2, 3, 4},
                      {Alphabet{1, 2}, Alphabet{3, 4}},
                      {Alphabet{1, 3}, Alphabet{2, 4}},
                      1};
    CHECK(partition_bijection(two) == std::vector<std::size_t>{0, 1});

    two.x = 2;
    CHECK_FALSE(partition_bijection(two));
}

TEST_CASE("partition_bijection rejects malformed pairs") {
    PartitionPair uneven{Alphabet{1, 2, 3}, {Alphabet{1}, Alphabet{2, 3}}, {Alphabet{1, 2}, Alphabet{3}}, 1};
    CHECK_FALSE(is_well_formed(uneven));
    CHECK_THROWS_AS((void)partition_bijection(uneven), InvalidInput);
    PartitionPair overlapping{Alphabet{1, 2}, {Alphabet{1}, Alphabet{1}}, {Alphabet{1}, Alphabet{2}}, 1};
    CHECK_FALSE(is_well_formed(overlapping));
    PartitionPair outside{Alphabet{1, 2}, {Alphabet{1}, Alphabet{3}}, {Alphabet{1}, Alphabet{2}}, 1};
    CHECK_FALSE(is_well_formed(outside));
}

TEST_CASE("partition_bijection succeeds whenever |A| = k^3 x") {
    std::mt19937_64 rng(0x9a27);
    std::uniform_int_distribution<std::size_t> kd(1, 4);
    std::uniform_int_distribution<std::size_t> xd(1, 3);
    for (int t = 0; t < 500; ++t) {
        const std::size_t k = kd(rng);
        const std::size_t x = xd(rng);
        const std::size_t size = k * k * k * x;
        PartitionPair pp{range_alphabet(size), random_blocks(rng, size, k), random_blocks(rng, size, k), x};
        const auto sigma = partition_bijection(pp);
        REQUIRE(sigma);
        CHECK(sigma_ok(pp, *sigma));
    }
}

TEST_CASE("partition_bijection finds a matching exactly when one exists") {
    std::mt19937_64 rng(0x9a28);
    std::uniform_int_distribution<std::size_t> kd(2, 5);
    std::uniform_int_distribution<std::size_t> ld(1, 4);
    std::uniform_int_distribution<std::size_t> xd(1, 3);
    for (int t = 0; t < 400; ++t) {
        const std::size_t k = kd(rng);
        const std::size_t size = k * ld(rng);
        PartitionPair pp{range_alphabet(size), random_blocks(rng, size, k), random_blocks(rng, size, k), xd(rng)};
        std::vector<std::vector<char>> admissible(k, std::vector<char>(k));
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                admissible[i][j] = overlap(pp.blocks_b[i], pp.blocks_c[j]) >= pp.x;
            }
        }
        const auto sigma = partition_bijection(pp);
        CHECK(sigma.has_value() == oracle::perfect_matching_exists(admissible));
        if (sigma) {
            CHECK(sigma_ok(pp, *sigma));
        }
    }
}

TEST_CASE("factorization_subset examples") {
    std::mt19937_64 rng(0xfac0);
    const std::vector<Word> pair{Word{2, 1}, Word{1, 2}};
    const NestingCertificate trivial = factorization_subset(pair, {2, 1});
    CHECK(trivial.B == Alphabet{1, 2});
    CHECK(verify_nesting(pair, {2, 1}, trivial));

    const std::vector<Word> perms = random_perms(rng, 2, 16);
    const NestingCertificate c = factorization_subset(perms, {4, 2});
    CHECK(c.B.size() == 4);
    CHECK(verify_nesting(perms, {4, 2}, c));
    REQUIRE(c.levels.size() == 1);
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(c.levels[0].upper[j] == c.levels[0].lower[c.levels[0].match[j]]);
    }

    const std::vector<Word> three = random_perms(rng, 3, 64);
    const NestingCertificate cor = corollary_subset(three, 4, 2);
    CHECK(cor.B.size() == 4);
    CHECK(cor.claim == NestingClaim::Corollary);
    CHECK(verify_nesting(three, {4, 2, 2}, cor));
}

TEST_CASE("factorization_subset rejects violated preconditions") {
    std::mt19937_64 rng(0xfac1);
    const std::vector<Word> perms = random_perms(rng, 2, 16);
    CHECK_THROWS_AS((void)factorization_subset(perms, {4, 3}), InvalidInput);   // 3 does not divide 4
    CHECK_THROWS_AS((void)factorization_subset(perms, {2, 2}), InvalidInput);   // |A| != 8
    CHECK_THROWS_AS((void)factorization_subset(perms, {4}), InvalidInput);      // r = 0
    CHECK_THROWS_AS((void)factorization_subset({perms[0], Word{1, 1}}, {4, 2}), InvalidInput);
    CHECK_THROWS_AS((void)factorization_subset(random_perms(rng, 3, 16), {4, 2}), InvalidInput);
    CHECK_THROWS_AS((void)corollary_subset(perms, 3, 2), InvalidInput);
}

TEST_CASE("factorization_subset succeeds on random chains meeting the size condition") {
    std::mt19937_64 rng(0xfac2);
    // (d_0, ..., d_r) with d_0 <= 8, r <= 2, each d_i dividing d_{i-1}.
    const std::vector<std::vector<std::size_t>> shapes{
        {1, 1}, {2, 1}, {2, 2}, {4, 1}, {4, 2}, {4, 4}, {6, 2}, {6, 3}, {8, 2}, {8, 4},
        {2, 2, 1}, {2, 2, 2}, {4, 2, 1}, {4, 2, 2}, {8, 2, 2}, {6, 3, 1}};
    for (int t = 0; t < 200; ++t) {
        const auto& d = shapes[static_cast<std::size_t>(t) % shapes.size()];
        std::size_t size = d[0];
        for (std::size_t i = 1; i < d.size(); ++i) {
            size *= d[i] * d[i];
        }
        const std::vector<Word> perms = random_perms(rng, d.size(), size);
        const NestingCertificate c = factorization_subset(perms, d);
        CHECK(c.B.size() == d[0]);
        CHECK(verify_nesting(perms, d, c));
        CHECK(verify_nesting(perms, d, c));
    }
}

TEST_CASE("verify_nesting rejects mutated certificates") {
    std::mt19937_64 rng(0xfac3);
    const std::vector<std::size_t> d{4, 2, 2};
    const std::vector<Word> perms = random_perms(rng, 3, 64);
    const NestingCertificate good = factorization_subset(perms, d);
    REQUIRE(verify_nesting(perms, d, good));

    // A symbol of B swapped for a non-member.
    std::vector<Symbol> b(good.B.begin(), good.B.end());
    for (Symbol s = 1; s <= 64; ++s) {
        if (!good.B.contains(s)) {
            b[0] = s;
            break;
        }
    }
    NestingCertificate swapped = good;
    swapped.B = Alphabet(b);
    CHECK_FALSE(verify_nesting(perms, d, swapped));

    NestingCertificate wrong_blocks = good;
    wrong_blocks.levels[0].blocks = 4;
    CHECK_FALSE(verify_nesting(perms, d, wrong_blocks));
    CHECK_FALSE(verify_nesting(perms, {4, 4, 1}, good));

    NestingCertificate wrong_match = good;
    std::swap(wrong_match.levels[1].match[0], wrong_match.levels[1].match[1]);
    CHECK_FALSE(verify_nesting(perms, d, wrong_match));

    NestingCertificate wrong_tail = good;
    std::swap(wrong_tail.tail[0], wrong_tail.tail[1]);
    CHECK_FALSE(verify_nesting(perms, d, wrong_tail));

    NestingCertificate overclaim = good;
    overclaim.claim = NestingClaim::Corollary;
    // The all-pairs claim may or may not hold; it must match a recomputation.
    std::vector<std::vector<Alphabet>> sorted;
    for (const Word& w : perms) {
        const auto blocks = *equal_blocks(project(w, good.B), 2);
        std::vector<Alphabet> alphs;
        for (const Word& x : blocks) {
            alphs.push_back(alph(x));
        }
        std::sort(alphs.begin(), alphs.end());
        sorted.push_back(alphs);
    }
    const bool all_pairs = sorted[0] == sorted[1] && sorted[1] == sorted[2];
    CHECK(verify_nesting(perms, d, overclaim) == all_pairs);
}

TEST_CASE("attack structure sizes") {
    CHECK(attack_subalphabet_size(4, 2, 1) == 2);
    CHECK(attack_subalphabet_size(4, 2, 2) == 8);
    CHECK(attack_subalphabet_size(4, 2, 3) == 256 * 32);
    CHECK(attack_subalphabet_size(2, 1, 3) == 16);
    CHECK(attack_alphabet_threshold(4, 2, 2) == 57U);
    CHECK(attack_alphabet_threshold(16, 2, 2) == 993U);
    CHECK(attack_alphabet_threshold(3, 5, 1) == 5U);
    CHECK_FALSE(attack_alphabet_threshold(2, 1, 3));
}

TEST_CASE("verify_attack_structure examples") {
    AttackCertificate p1{Alphabet{1, 2}, 1, {}, 3, 2};
    CHECK(verify_attack_structure(Word{3, 1, 3, 2}, 3, 2, p1));
    CHECK_FALSE(verify_attack_structure(Word{1, 2, 1}, 3, 2, p1));

    AttackCertificate p2{Alphabet{1, 2}, 2, {2}, 2, 1};
    CHECK(verify_attack_structure(Word{1, 2, 2, 1}, 2, 1, p2));
    CHECK(verify_attack_structure(Word{1, 2, 1, 2}, 2, 1, p2));
    CHECK_FALSE(verify_attack_structure(Word{1, 2, 1, 2}, 2, 2, p2));   // n, k differ from the certificate
    AttackCertificate wrong_size = p2;
    wrong_size.B = Alphabet{1};
    CHECK_FALSE(verify_attack_structure(Word{1, 2, 1, 2}, 2, 1, wrong_size));
}

TEST_CASE("condition (5) containment is enforced") {
    // n = 2, k = 2, p = 3: |B| = 8. The pairs of (α_2)_B must each sit
    // inside one half of (α_3)_B.
    const Word first{8, 7, 6, 5, 4, 3, 2, 1};
    const Word second{1, 2, 3, 4, 5, 6, 7, 8};
    const Word ok = first.concat(second).concat(Word{2, 4, 3, 1, 8, 5, 7, 6});
    AttackCertificate c{Alphabet{1, 2, 3, 4, 5, 6, 7, 8}, 3, {8, 16}, 2, 2};
    CHECK(verify_attack_structure(ok, 2, 2, c));
    const Word broken = first.concat(second).concat(Word{1, 3, 5, 7, 2, 4, 6, 8});
    CHECK_FALSE(verify_attack_structure(broken, 2, 2, c));
    AttackCertificate moved = c;
    moved.splits = {8, 17};
    CHECK_FALSE(verify_attack_structure(ok, 2, 2, moved));
    // With k = 1 the last level is a single block, so containment is automatic.
    AttackCertificate one{Alphabet{1, 2, 3, 4}, 3, {4, 8}, 2, 1};
    CHECK(verify_attack_structure(Word{1, 2, 3, 4, 1, 3, 2, 4, 4, 3, 1, 2}, 2, 1, one));
}

TEST_CASE("find_attack_structure examples") {
    AttackStructureOptions loose;
    loose.require_threshold = false;
    const Word two_perms{3, 1, 4, 2, 2, 4, 1, 3};
    const AttackCertificate c = find_attack_structure(two_perms, 2, 2, 2, loose);
    CHECK(c.p == 2);
    CHECK(c.B.size() == 4);
    CHECK(verify_attack_structure(two_perms, 2, 2, c));
    CHECK_THROWS_AS((void)find_attack_structure(two_perms, 2, 2, 2), ThresholdNotMet);

    std::vector<Symbol> mirror;
    for (Symbol i = 1; i <= 57; ++i) {
        mirror.push_back(i);
    }
    for (Symbol i = 57; i >= 1; --i) {
        mirror.push_back(i);
    }
    const Word m57(mirror);
    const AttackCertificate mc = find_attack_structure(m57, 4, 2, 2);
    CHECK((mc.B.size() == 2 || mc.B.size() == 8));
    CHECK(verify_attack_structure(m57, 4, 2, mc));

    AttackCertificate early_cut = mc;
    early_cut.splits = {1};
    early_cut.p = 2;
    CHECK_FALSE(verify_attack_structure(m57, 4, 2, early_cut));
    AttackCertificate foreign = mc;
    std::vector<Symbol> b(mc.B.begin(), mc.B.end());
    b.back() = 999;
    foreign.B = Alphabet(b);
    CHECK_FALSE(verify_attack_structure(m57, 4, 2, foreign));

    CHECK_THROWS_AS((void)find_attack_structure(Word{1, 1, 1}, 2, 1, 2), InvalidInput);
    CHECK_THROWS_AS((void)find_attack_structure(m57, 0, 1, 2), InvalidInput);
}

TEST_CASE("q = 1 words give p = 1 certificates") {
    const Word w{5, 3, 1, 4};
    const AttackCertificate c = find_attack_structure(w, 8, 3, 1);
    CHECK(c.p == 1);
    CHECK(c.B == Alphabet{1, 3, 5});
    CHECK(verify_attack_structure(w, 8, 3, c));
}

TEST_CASE("two random permutations above the q = 2 threshold always yield a certificate") {
    std::mt19937_64 rng(0x7e06);
    const std::vector<std::pair<std::size_t, std::size_t>> nk{{2, 1}, {2, 2}, {4, 2}, {8, 2},
                                                             {4, 4}, {2, 8}, {16, 1}};
    for (const auto& [n, k] : nk) {
        const std::size_t m = n * k;
        const std::size_t size = m * m - m + 1;
        for (int t = 0; t < 8; ++t) {
            const Word alpha = oracle::random_permutation(rng, size).concat(oracle::random_permutation(rng, size));
            const AttackCertificate c = find_attack_structure(alpha, n, k, 2);
            CHECK(verify_attack_structure(alpha, n, k, c));
            CHECK(verify_attack_structure(alpha, n, k, c));
        }
    }
}

TEST_CASE("three-part words go through the subset construction") {
    std::mt19937_64 rng(0x7e07);
    AttackStructureOptions loose;
    loose.require_threshold = false;
    for (int t = 0; t < 10; ++t) {
        const Word alpha = oracle::random_permutation(rng, 16)
                               .concat(oracle::random_permutation(rng, 16))
                               .concat(oracle::random_permutation(rng, 16));
        const AttackCertificate c = find_attack_structure(alpha, 2, 1, 3, loose);
        CHECK(verify_attack_structure(alpha, 2, 1, c));
        if (c.p == 3) {
            CHECK(c.B.size() == 4);
        }
    }
}
