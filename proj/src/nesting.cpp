#include "qbound/nesting.hpp"

#include "qbound/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qbound {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > kSaturated / a) {
        return kSaturated;
    }
    return a * b;
}

std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        out = sat_mul(out, base);
    }
    return out;
}

std::vector<Alphabet> block_alphabets(const std::vector<Word>& blocks) {
    std::vector<Alphabet> out;
    out.reserve(blocks.size());
    for (const Word& b : blocks) {
        out.push_back(alph(b));
    }
    return out;
}

std::size_t intersection_size(const Alphabet& a, const Alphabet& b) {
    return a.intersect(b).size();
}

class Matcher {
public:
    explicit Matcher(std::vector<std::vector<char>> admissible)
        : admissible_(std::move(admissible)), k_(admissible_.size()), owner_(k_, kNone) {}

    std::optional<std::vector<std::size_t>> run() {
        for (std::size_t row = 0; row < k_; ++row) {
            bool placed = false;
            for (std::size_t col = 0; col < k_ && !placed; ++col) {
                if (admissible_[row][col] && owner_[col] == kNone) {
                    owner_[col] = row;
                    placed = true;
                }
            }
            if (!placed) {
                visited_.assign(k_, 0);
                if (!augment(row)) {
                    return std::nullopt;
                }
            }
        }
        std::vector<std::size_t> sigma(k_);
        for (std::size_t col = 0; col < k_; ++col) {
            sigma[owner_[col]] = col;
        }
        return sigma;
    }

private:
    bool augment(std::size_t row) {
        for (std::size_t col = 0; col < k_; ++col) {
            if (!admissible_[row][col] || visited_[col]) {
                continue;
            }
            visited_[col] = 1;
            if (owner_[col] == kNone || augment(owner_[col])) {
                owner_[col] = row;
                return true;
            }
        }
        return false;
    }

    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::vector<char>> admissible_;
    std::size_t k_;
    std::vector<std::size_t> owner_;
    std::vector<char> visited_;
};

bool is_partition_of(const std::vector<Alphabet>& blocks, const Alphabet& ground) {
    std::size_t total = 0;
    std::vector<Symbol> all;
    for (const Alphabet& b : blocks) {
        total += b.size();
        all.insert(all.end(), b.begin(), b.end());
    }
    const Alphabet merged(std::move(all));
    return total == ground.size() && merged == ground;
}

struct ChainShape {
    Alphabet ground;
    std::size_t r = 0;
};

// Shape checks shared by construction and verification; nullopt when the
// inputs are inconsistent.
std::optional<ChainShape> check_chain(const std::vector<Word>& perms,
                                      const std::vector<std::size_t>& d) {
    if (d.size() < 2 || perms.size() != d.size()) {
        return std::nullopt;
    }
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] == 0 || (i > 0 && d[i - 1] % d[i] != 0)) {
            return std::nullopt;
        }
    }
    ChainShape shape{alph(perms.front()), d.size() - 1};
    for (const Word& w : perms) {
        if (!is_permutation(w, shape.ground)) {
            return std::nullopt;
        }
    }
    std::uint64_t expected = d[0];
    for (std::size_t i = 1; i < d.size(); ++i) {
        expected = sat_mul(expected, sat_mul(d[i], d[i]));
    }
    if (expected != shape.ground.size()) {
        return std::nullopt;
    }
    return shape;
}

std::optional<std::vector<Alphabet>> projected_blocks(const Word& w, const Alphabet& b,
                                                      std::size_t count) {
    const auto blocks = equal_blocks(project(w, b), count);
    if (!blocks) {
        return std::nullopt;
    }
    return block_alphabets(*blocks);
}

NestingCertificate describe(const std::vector<Word>& perms, const std::vector<std::size_t>& d,
                            const Alphabet& b, NestingClaim claim) {
    NestingCertificate cert;
    cert.B = b;
    cert.claim = claim;
    const std::size_t r = d.size() - 1;
    for (std::size_t i = 1; i <= r; ++i) {
        NestingLevel level;
        level.blocks = d[i];
        auto upper = projected_blocks(perms[i - 1], b, d[i]);
        auto lower = projected_blocks(perms[i], b, d[i]);
        if (!upper || !lower) {
            throw ConstructionDefect("selected subset does not factor evenly");
        }
        level.upper = std::move(*upper);
        level.lower = std::move(*lower);
        for (const Alphabet& block : level.upper) {
            const auto it = std::find(level.lower.begin(), level.lower.end(), block);
            if (it == level.lower.end()) {
                throw ConstructionDefect("block alphabets failed to align at level " +
                                         std::to_string(i));
            }
            level.match.push_back(static_cast<std::size_t>(it - level.lower.begin()));
        }
        cert.levels.push_back(std::move(level));
    }
    const auto tail = equal_blocks(perms[r], d[r]);
    for (const Word& u : *tail) {
        cert.tail.push_back(alph(project(u, b)));
    }
    return cert;
}

}  // namespace

bool is_well_formed(const PartitionPair& pp) {
    const std::size_t k = pp.blocks_b.size();
    if (k == 0 || pp.blocks_c.size() != k || pp.ground.empty() || pp.ground.size() % k != 0) {
        return false;
    }
    const std::size_t size = pp.ground.size() / k;
    const auto sized = [&](const Alphabet& a) { return a.size() == size; };
    return std::all_of(pp.blocks_b.begin(), pp.blocks_b.end(), sized) &&
           std::all_of(pp.blocks_c.begin(), pp.blocks_c.end(), sized) &&
           is_partition_of(pp.blocks_b, pp.ground) && is_partition_of(pp.blocks_c, pp.ground);
}

std::optional<std::vector<std::size_t>> partition_bijection(const PartitionPair& pp) {
    if (!is_well_formed(pp)) {
        throw InvalidInput("partition pair is not two equal-block partitions of the ground set");
    }
    const std::size_t k = pp.blocks_b.size();
    std::vector<std::vector<char>> admissible(k, std::vector<char>(k, 0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            admissible[i][j] =
                static_cast<char>(intersection_size(pp.blocks_b[i], pp.blocks_c[j]) >= pp.x);
        }
    }
    return Matcher(std::move(admissible)).run();
}

NestingCertificate factorization_subset(const std::vector<Word>& perms,
                                        const std::vector<std::size_t>& d) {
    const auto shape = check_chain(perms, d);
    if (!shape) {
        throw InvalidInput(
            "factorization_subset needs r+1 permutations of A, d_i | d_{i-1}, and "
            "|A| = d_0 d_1^2 ... d_r^2");
    }
    // Work from the last level down: align w_l and w_{l+1} on d_l blocks, keep
    // x letters from each matched pair of blocks, and recurse on the survivors.
    Alphabet current = shape->ground;
    for (std::size_t level = shape->r; level >= 1; --level) {
        const std::size_t k = d[level];
        const Word upper = project(perms[level - 1], current);
        const Word lower = project(perms[level], current);
        const auto upper_blocks = *equal_blocks(upper, k);
        const auto lower_blocks = *equal_blocks(lower, k);
        PartitionPair pp;
        pp.ground = current;
        pp.blocks_b = block_alphabets(upper_blocks);
        pp.blocks_c = block_alphabets(lower_blocks);
        pp.x = current.size() / (k * k * k);
        const auto sigma = partition_bijection(pp);
        if (!sigma) {
            throw ConstructionDefect("no block matching at level " + std::to_string(level) +
                                     " although |A| = k^3 x");
        }
        std::vector<Symbol> kept;
        for (std::size_t a = 0; a < k; ++a) {
            const Alphabet& target = pp.blocks_c[(*sigma)[a]];
            std::size_t taken = 0;
            for (Symbol s : upper_blocks[a]) {
                if (taken == pp.x) {
                    break;
                }
                if (target.contains(s)) {
                    kept.push_back(s);
                    ++taken;
                }
            }
            if (taken != pp.x) {
                throw ConstructionDefect("matched blocks share fewer than x letters");
            }
        }
        current = Alphabet(std::move(kept));
    }
    NestingCertificate cert = describe(perms, d, current, NestingClaim::Factorization);
    if (!verify_nesting(perms, d, cert)) {
        throw ConstructionDefect("constructed nesting certificate failed verification");
    }
    return cert;
}

NestingCertificate corollary_subset(const std::vector<Word>& perms, std::size_t d0, std::size_t d) {
    if (perms.size() < 2 || d == 0 || d0 % d != 0) {
        throw InvalidInput("corollary_subset needs at least two permutations and d | d_0");
    }
    std::vector<std::size_t> dims(perms.size(), d);
    dims[0] = d0;
    NestingCertificate cert = factorization_subset(perms, dims);
    cert.claim = NestingClaim::Corollary;
    if (!verify_nesting(perms, dims, cert)) {
        throw ConstructionDefect("corollary certificate failed the all-pairs check");
    }
    return cert;
}

bool verify_nesting(const std::vector<Word>& perms, const std::vector<std::size_t>& d,
                    const NestingCertificate& cert) {
    const auto shape = check_chain(perms, d);
    if (!shape) {
        return false;
    }
    const std::size_t r = shape->r;
    if (cert.B.size() != d[0] || !cert.B.is_subset_of(shape->ground) || cert.levels.size() != r) {
        return false;
    }
    for (std::size_t i = 1; i <= r; ++i) {
        const NestingLevel& level = cert.levels[i - 1];
        if (level.blocks != d[i]) {
            return false;
        }
        const auto upper = projected_blocks(perms[i - 1], cert.B, d[i]);
        const auto lower = projected_blocks(perms[i], cert.B, d[i]);
        if (!upper || !lower || *upper != level.upper || *lower != level.lower ||
            level.match.size() != d[i]) {
            return false;
        }
        for (std::size_t j = 0; j < d[i]; ++j) {
            if (level.match[j] >= d[i] || level.upper[j] != level.lower[level.match[j]]) {
                return false;
            }
        }
    }
    const auto tail = equal_blocks(perms[r], d[r]);
    if (!tail || cert.tail.size() != d[r]) {
        return false;
    }
    for (std::size_t j = 0; j < d[r]; ++j) {
        const Word projected = project((*tail)[j], cert.B);
        if (projected.size() != d[0] / d[r] || alph(projected) != cert.tail[j]) {
            return false;
        }
    }
    if (cert.claim == NestingClaim::Corollary) {
        const std::size_t blocks = d[1];
        if (!std::all_of(d.begin() + 1, d.end(), [&](std::size_t v) { return v == blocks; })) {
            return false;
        }
        std::vector<std::vector<Alphabet>> per_perm;
        for (const Word& w : perms) {
            auto b = projected_blocks(w, cert.B, blocks);
            if (!b) {
                return false;
            }
            std::sort(b->begin(), b->end());
            per_perm.push_back(std::move(*b));
        }
        for (const auto& b : per_perm) {
            if (b != per_perm.front()) {
                return false;
            }
        }
    }
    return true;
}

bool verify_attack_structure(const Word& alpha, std::size_t n, std::size_t k,
                             const AttackCertificate& cert) {
    if (n == 0 || k == 0 || cert.n != n || cert.k != k || cert.p == 0 ||
        cert.splits.size() + 1 != cert.p) {
        return false;
    }
    if (cert.B.size() != sat_mul(sat_pow(n, cert.p - 1), k)) {
        return false;
    }
    const auto parts = factor_at_cuts(alpha, cert.splits);
    if (!parts) {
        return false;
    }
    std::vector<Word> condensed;
    for (const Word& part : *parts) {
        condensed.push_back(condense(part, cert.B));
        if (!is_permutation(condensed.back(), cert.B)) {
            return false;
        }
    }
    for (std::size_t i = 1; i < cert.p; ++i) {
        const auto z = equal_blocks(condensed[i - 1], sat_mul(sat_pow(n, cert.p - i), k));
        const auto u = equal_blocks(condensed[i], sat_mul(sat_pow(n, cert.p - i - 1), k));
        if (!z || !u) {
            return false;
        }
        const auto u_alph = block_alphabets(*u);
        for (const Word& zb : *z) {
            const Alphabet za = alph(zb);
            const bool contained = std::any_of(u_alph.begin(), u_alph.end(),
                                               [&](const Alphabet& ua) { return za.is_subset_of(ua); });
            if (!contained) {
                return false;
            }
        }
    }
    return true;
}

std::uint64_t attack_subalphabet_size(std::uint64_t n, std::uint64_t k, std::uint64_t p) {
    if (p <= 1) {
        return k;
    }
    if (p == 2) {
        return sat_mul(n, k);
    }
    return sat_mul(sat_pow(n, (p - 1) * (p - 1)), sat_pow(k, 2 * p - 1));
}

std::optional<std::uint64_t> attack_alphabet_threshold(std::uint64_t n, std::uint64_t k,
                                                       std::uint64_t q) {
    const std::uint64_t m = attack_subalphabet_size(n, k, q);
    if (m == kSaturated) {
        return std::nullopt;
    }
    if (q == 2 && m > (std::uint64_t{1} << 31)) {
        return std::nullopt;
    }
    return known_threshold(m, q);
}

AttackCertificate find_attack_structure(const Word& alpha, std::size_t n, std::size_t k,
                                        std::size_t q, const AttackStructureOptions& options) {
    if (n == 0 || k == 0 || q == 0) {
        throw InvalidInput("find_attack_structure needs n, k, q >= 1");
    }
    const WordStats stats = word_stats(alpha);
    if (!stats.is_bounded(q)) {
        throw InvalidInput("word is not " + std::to_string(q) + "-bounded");
    }
    const std::size_t letters = stats.alphabet.size();
    const std::uint64_t m = attack_subalphabet_size(n, k, q);
    bool guaranteed = false;
    if (const auto threshold = attack_alphabet_threshold(n, k, q)) {
        guaranteed = letters >= *threshold;
        if (options.require_threshold && !guaranteed) {
            throw ThresholdNotMet("alphabet has " + std::to_string(letters) +
                                      " symbols; the construction needs " +
                                      std::to_string(*threshold),
                                  static_cast<double>(*threshold));
        }
    } else {
        // Only the upper estimate m^{2^{q-1}} is available here.
        const double bound = std::pow(static_cast<double>(m), std::pow(2.0, static_cast<double>(q - 1)));
        guaranteed = static_cast<double>(letters) >= bound;
        if (options.require_threshold && !guaranteed) {
            throw ThresholdNotMet("no exact threshold for q >= 3; the available bound needs " +
                                      std::to_string(bound) + " symbols",
                                  bound);
        }
    }
    if (m > letters) {
        throw ThresholdNotMet("alphabet smaller than the required subalphabet size " +
                                  std::to_string(m),
                              static_cast<double>(m));
    }

    const SearchOutcome found = find_structure(alpha, static_cast<std::size_t>(m), q,
                                               SearchMode::Exhaustive, options.limits);
    if (!found.certificate) {
        if (guaranteed) {
            throw ConstructionDefect("no structure certificate above the guaranteed threshold");
        }
        throw ThresholdNotMet("no structure certificate of size " + std::to_string(m) + " exists",
                              static_cast<double>(m));
    }
    const StructureCertificate& sc = *found.certificate;
    const std::size_t p = sc.p;
    const auto needed = static_cast<std::size_t>(attack_subalphabet_size(n, k, p));

    // Trim A to the size this p needs, keeping first occurrences in α.
    std::vector<Symbol> trimmed;
    for (Symbol s : alpha) {
        if (trimmed.size() == needed) {
            break;
        }
        if (sc.A.contains(s) && std::find(trimmed.begin(), trimmed.end(), s) == trimmed.end()) {
            trimmed.push_back(s);
        }
    }
    AttackCertificate cert;
    cert.p = p;
    cert.splits = sc.splits;
    cert.n = n;
    cert.k = k;
    if (p <= 2) {
        cert.B = Alphabet(std::move(trimmed));
    } else {
        const Alphabet a_prime(std::move(trimmed));
        const auto parts = *factor_at_cuts(alpha, sc.splits);
        std::vector<Word> perms;
        for (const Word& part : parts) {
            perms.push_back(condense(part, a_prime));
        }
        std::vector<std::size_t> d(p);
        for (std::size_t i = 0; i < p; ++i) {
            d[i] = static_cast<std::size_t>(sat_mul(sat_pow(n, p - 1 - i), k));
        }
        cert.B = factorization_subset(perms, d).B;
    }
    if (!verify_attack_structure(alpha, n, k, cert)) {
        throw ConstructionDefect("attack certificate failed verification");
    }
    return cert;
}

}  // namespace qbound
