#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qbound/errors.hpp"
#include "qbound/regularity.hpp"

#include <random>

using namespace qbound;

namespace {

StructureCertificate cert(Alphabet a, std::size_t p, std::vector<std::size_t> splits) {
    return StructureCertificate{std::move(a), p, std::move(splits)};
}

Alphabet letters_of(const Word& w) { return word_stats(w).alphabet; }

}  // namespace

TEST_CASE("verify_structure examples") {
    CHECK(verify_structure(Word{1, 2, 3}, cert({1, 2, 3}, 1, {}), 3));
    CHECK(verify_structure(Word{1, 2, 1, 2}, cert({1, 2}, 2, {2}), 2));
    const Word w = remark5_witness(2);
    CHECK_FALSE(verify_structure(w, cert({1, 2}, 1, {}), 2));
    CHECK_FALSE(verify_structure(w, cert({1, 2}, 2, {1}), 2));
    CHECK_FALSE(verify_structure(w, cert({1, 2}, 2, {2}), 2));
}

TEST_CASE("verify_structure rejects inconsistent certificates") {
    const Word w{1, 2, 1, 2};
    CHECK_FALSE(verify_structure(w, cert({1, 2}, 2, {2}), 3));     // wrong m
    CHECK_FALSE(verify_structure(w, cert({1, 5}, 2, {2}), 2));     // A outside alph
    CHECK_FALSE(verify_structure(w, cert({1, 2}, 3, {2}), 2));     // p vs splits
    CHECK_FALSE(verify_structure(w, cert({1, 2}, 2, {4}), 2));     // empty last part
    CHECK_FALSE(verify_structure(w, cert({1, 2}, 0, {}), 2));      // p = 0
    CHECK_FALSE(verify_structure(w, cert({}, 1, {}), 0));          // empty A
    // Parts may repeat a letter as long as its occurrences are adjacent after
    // projection.
    CHECK(verify_structure(Word{1, 3, 1, 2}, cert({1, 2}, 1, {}), 2));
}

TEST_CASE("find_structure examples") {
    const SearchOutcome none = find_structure(Word{1, 2, 1}, 2, 2);
    CHECK_FALSE(none.certificate);
    CHECK(none.exhaustive);

    const SearchOutcome two = find_structure(Word{1, 2, 3, 1, 2, 3}, 3, 2);
    REQUIRE(two.certificate);
    CHECK(*two.certificate == cert({1, 2, 3}, 2, {3}));
    CHECK(two.exhaustive);

    // Smallest p wins: one letter condenses to itself over the whole word.
    const SearchOutcome one = find_structure(Word{1, 2, 3, 1, 2, 3}, 1, 2);
    REQUIRE(one.certificate);
    CHECK(one.certificate->p == 1);

    CHECK_FALSE(find_structure(Word{1, 2}, 3, 2).certificate);
}

TEST_CASE("find_structure input validation") {
    CHECK_THROWS_AS((void)find_structure(Word{1, 1, 1}, 1, 2), InvalidInput);
    CHECK_THROWS_AS((void)find_structure(Word{1, 2}, 0, 2), InvalidInput);
    CHECK_THROWS_AS((void)find_structure(Word{1, 2}, 1, 0), InvalidInput);
    SearchLimits tiny;
    tiny.node_budget = 3;
    CHECK_THROWS_AS((void)find_structure(remark5_witness(4), 4, 2, SearchMode::Exhaustive, tiny),
                    CapExceeded);
    SearchLimits short_words;
    short_words.max_length = 4;
    CHECK_THROWS_AS((void)find_structure(Word{1, 2, 3, 4, 5}, 2, 1, SearchMode::Exhaustive,
                                         short_words),
                    CapExceeded);
}

TEST_CASE("every 2-bounded word over 3 letters carries a 2-letter certificate") {
    std::size_t count = 0;
    for (const auto& v : oracle::canonical_words(3, 2)) {
        const Word w(v);
        const SearchOutcome s = find_structure(w, 2, 2);
        REQUIRE(s.certificate);
        CHECK(verify_structure(w, *s.certificate, 2));
        ++count;
    }
    CHECK(count == 37);
}

TEST_CASE("witness words") {
    CHECK(remark5_witness(2) == Word{1, 2, 1});
    const Word w3 = remark5_witness(3);
    CHECK(w3 == Word{1, 2, 3, 2, 1, 4, 5, 6, 5, 4});
    CHECK_THROWS_AS((void)remark5_witness(1), InvalidInput);
    for (std::size_t m = 2; m <= 5; ++m) {
        const Word w = remark5_witness(m);
        const WordStats s = word_stats(w);
        CHECK(w.size() == (m - 1) * (2 * m - 1));
        CHECK(s.alphabet.size() == m * (m - 1));
        CHECK(s.max_count == 2);
        const SearchOutcome found = find_structure(w, m, 2);
        CHECK_FALSE(found.certificate);
        CHECK(found.exhaustive);
    }
}

TEST_CASE("exhaustive search agrees with brute force on all small 2-bounded words") {
    std::size_t checked = 0;
    std::size_t expected = 0;
    for (std::size_t s = 1; s <= 4; ++s) {
        expected += oracle::canonical_words(s, 2).size() * s;
        for (const auto& v : oracle::canonical_words(s, 2)) {
            const Word w(v);
            for (std::size_t m = 1; m <= s; ++m) {
                const SearchOutcome got = find_structure(w, m, 2);
                CHECK(got.exhaustive);
                REQUIRE_MESSAGE(got.certificate.has_value() == oracle::structure_exists(w, m, 2),
                                format_word(w) << " m=" << m);
                if (got.certificate) {
                    CHECK(verify_structure(w, *got.certificate, m));
                }
                ++checked;
            }
        }
    }
    CHECK(checked == expected);
}

TEST_CASE("exhaustive search agrees with brute force on random 3-bounded words") {
    std::mt19937_64 rng(0x3b0d);
    std::uniform_int_distribution<std::size_t> size(2, 4);
    for (int t = 0; t < 150; ++t) {
        const std::size_t s = size(rng);
        const Word w = oracle::random_bounded_word(rng, s, 3);
        for (std::size_t m = 1; m <= s; ++m) {
            const SearchOutcome got = find_structure(w, m, 3);
            CHECK(got.certificate.has_value() == oracle::structure_exists(w, m, 3));
        }
    }
}

TEST_CASE("found certificates verify and shrink") {
    std::mt19937_64 rng(0x50d0);
    std::uniform_int_distribution<std::size_t> size(3, 14);
    std::uniform_int_distribution<std::size_t> bound(1, 3);
    for (int t = 0; t < 200; ++t) {
        const std::size_t s = size(rng);
        const std::size_t q = bound(rng);
        const Word w = oracle::random_bounded_word(rng, s, q);
        for (std::size_t m = 2; m <= 4; ++m) {
            const SearchOutcome got = find_structure(w, m, q);
            if (!got.certificate) {
                continue;
            }
            const StructureCertificate& c = *got.certificate;
            REQUIRE(verify_structure(w, c, m));
            CHECK(c.A.is_subset_of(letters_of(w)));
            CHECK(c.p <= q);
            // Dropping any one letter leaves a certificate for m - 1.
            for (Symbol drop : c.A) {
                std::vector<Symbol> rest;
                for (Symbol a : c.A) {
                    if (a != drop) {
                        rest.push_back(a);
                    }
                }
                CHECK(verify_structure(w, cert(Alphabet(rest), c.p, c.splits), m - 1));
            }
        }
    }
}

TEST_CASE("greedy mode is sound and exhaustive when it finishes") {
    std::mt19937_64 rng(0x9eed);
    for (int t = 0; t < 100; ++t) {
        const Word w = oracle::random_bounded_word(rng, 7, 2);
        const SearchOutcome greedy = find_structure(w, 3, 2, SearchMode::Greedy);
        const SearchOutcome full = find_structure(w, 3, 2);
        if (greedy.certificate) {
            CHECK(verify_structure(w, *greedy.certificate, 3));
        } else if (greedy.exhaustive) {
            CHECK_FALSE(full.certificate);
        }
    }
    SearchLimits tight;
    tight.greedy_nodes_per_factorization = 1;
    tight.greedy_factorizations = 1;
    const SearchOutcome cut = find_structure(remark5_witness(4), 4, 2, SearchMode::Greedy, tight);
    CHECK_FALSE(cut.certificate);
    CHECK_FALSE(cut.exhaustive);
}

TEST_CASE("known thresholds") {
    CHECK(known_threshold(1, 5) == 1U);
    CHECK(known_threshold(4, 1) == 4U);
    CHECK(known_threshold(32, 2) == 993U);
    CHECK_FALSE(known_threshold(2, 3));
}

TEST_CASE("canonical enumeration matches an independent generator") {
    for (std::size_t s = 1; s <= 4; ++s) {
        for (std::size_t q = 1; q <= 3; ++q) {
            std::set<std::vector<Symbol>> seen;
            for_each_canonical_word(s, q, [&](const Word& w) {
                CHECK(canonical_form(w) == w);
                CHECK(seen.insert(oracle::vec(w)).second);
            });
            const auto expected = oracle::canonical_words(s, q);
            CHECK(seen == std::set<std::vector<Symbol>>(expected.begin(), expected.end()));
        }
    }
}

TEST_CASE("compute_N reproduces the known values") {
    const ThresholdReport a = compute_N(1, 3, 4);
    CHECK(a.N == 1U);
    CHECK(a.exhaustive);
    const ThresholdReport b = compute_N(3, 1, 5);
    CHECK(b.N == 3U);
    CHECK(b.exhaustive);
    const ThresholdReport c = compute_N(2, 2, 4);
    CHECK(c.N == 3U);
    CHECK(c.exhaustive);
    REQUIRE(c.sizes.size() == 3);
    CHECK(c.sizes[1].violations == 1);
    CHECK(c.sizes[1].example_violation == Word{1, 2, 1});
    CHECK(c.sizes[2].words_checked == 37);
    CHECK(c.sizes[2].violations == 0);
}

TEST_CASE("compute_N reports a partial range when the cap is hit") {
    const ThresholdReport r = compute_N(2, 2, 2);
    CHECK_FALSE(r.N);
    CHECK_FALSE(r.exhaustive);
    CHECK(r.sizes.size() == 2);
    CHECK_THROWS_AS((void)compute_N(0, 2, 3), InvalidInput);
}

TEST_CASE("compute_N(3,2) = 7") {
    const ThresholdReport r = compute_N(3, 2, 7);
    CHECK(r.N == 7U);
    CHECK(r.exhaustive);
}
