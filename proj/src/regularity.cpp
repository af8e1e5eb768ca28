#include "qbound/regularity.hpp"

#include "qbound/errors.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <unordered_map>

namespace qbound {

bool verify_structure(const Word& alpha, const StructureCertificate& cert, std::size_t m) {
    if (cert.A.size() != m || m == 0 || cert.p == 0 || cert.splits.size() + 1 != cert.p) {
        return false;
    }
    if (!cert.A.is_subset_of(alph(alpha))) {
        return false;
    }
    const auto parts = factor_at_cuts(alpha, cert.splits);
    if (!parts) {
        return false;
    }
    return std::all_of(parts->begin(), parts->end(),
                       [&](const Word& part) { return is_permutation(condense(part, cert.A), cert.A); });
}

namespace {

// Dynamic bitset over the viable letters of one factorization.
class Bits {
public:
    Bits() = default;
    explicit Bits(std::size_t n) : words_((n + 63) / 64, 0) {}

    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
    [[nodiscard]] bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

    [[nodiscard]] std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) {
            c += static_cast<std::size_t>(std::popcount(w));
        }
        return c;
    }

    /// Index of the lowest set bit, or npos.
    [[nodiscard]] std::size_t first() const {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            if (words_[k] != 0) {
                return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
            }
        }
        return npos;
    }

    [[nodiscard]] bool intersects(const Bits& other) const {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            if ((words_[k] & other.words_[k]) != 0) {
                return true;
            }
        }
        return false;
    }

    void subtract(const Bits& other) {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            words_[k] &= ~other.words_[k];
        }
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<std::uint64_t> words_;
};

enum class IndependentSetResult { Found, Absent, Truncated };

// Finds m pairwise non-conflicting vertices, preferring lower indices.
class IndependentSetSearch {
public:
    IndependentSetSearch(const std::vector<Bits>& conflicts, std::size_t m, std::uint64_t budget)
        : conflicts_(conflicts), m_(m), budget_(budget) {}

    IndependentSetResult run(Bits candidates) {
        chosen_.clear();
        if (search(std::move(candidates))) {
            return IndependentSetResult::Found;
        }
        return truncated_ ? IndependentSetResult::Truncated : IndependentSetResult::Absent;
    }

    [[nodiscard]] const std::vector<std::size_t>& chosen() const { return chosen_; }
    [[nodiscard]] std::uint64_t nodes() const { return nodes_; }

private:
    bool search(Bits candidates) {
        while (true) {
            if (chosen_.size() == m_) {
                return true;
            }
            if (chosen_.size() + candidates.count() < m_) {
                return false;
            }
            if (++nodes_ > budget_) {
                truncated_ = true;
                return false;
            }
            const std::size_t v = candidates.first();
            candidates.reset(v);
            const bool isolated = !candidates.intersects(conflicts_[v]);
            Bits with_v = candidates;
            with_v.subtract(conflicts_[v]);
            chosen_.push_back(v);
            if (search(std::move(with_v))) {
                return true;
            }
            chosen_.pop_back();
            // An isolated vertex can always be swapped into a solution that
            // avoids it, so excluding it cannot help.
            if (isolated || truncated_) {
                return false;
            }
        }
    }

    const std::vector<Bits>& conflicts_;
    std::size_t m_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    bool truncated_ = false;
    std::vector<std::size_t> chosen_;
};

class StructureSearch {
public:
    StructureSearch(const Word& alpha, std::size_t m, SearchMode mode, const SearchLimits& limits)
        : m_(m), mode_(mode), limits_(limits) {
        std::unordered_map<Symbol, std::size_t> dense;
        code_.reserve(alpha.size());
        for (Symbol s : alpha) {
            auto [it, inserted] = dense.emplace(s, letters_.size());
            if (inserted) {
                letters_.push_back(s);
            }
            code_.push_back(it->second);
        }
    }

    SearchOutcome run(std::size_t q) {
        SearchOutcome out;
        const std::size_t len = code_.size();
        for (std::size_t p = 1; p <= q && p <= len; ++p) {
            p_ = p;
            cuts_.clear();
            std::vector<char> all(letters_.size(), 1);
            if (descend(0, 0, all)) {
                out.certificate = found_;
                break;
            }
            if (stopped_) {
                break;
            }
        }
        out.exhaustive = !truncated_;
        out.nodes = nodes_;
        return out;
    }

private:
    void charge(std::uint64_t n) {
        nodes_ += n;
        if (mode_ == SearchMode::Exhaustive && nodes_ > limits_.node_budget) {
            throw CapExceeded("exhaustive structure search exceeded " +
                              std::to_string(limits_.node_budget) + " nodes");
        }
    }

    // Part `part` starts at `start`; `viable` marks letters present in every
    // earlier part.
    bool descend(std::size_t part, std::size_t start, const std::vector<char>& viable) {
        const std::size_t len = code_.size();
        const std::size_t letters = letters_.size();
        charge(1);
        if (part + 1 == p_) {
            std::vector<char> present(letters, 0);
            for (std::size_t i = start; i < len; ++i) {
                present[code_[i]] = 1;
            }
            std::vector<char> next(letters, 0);
            std::size_t count = 0;
            for (std::size_t a = 0; a < letters; ++a) {
                next[a] = static_cast<char>(viable[a] && present[a]);
                count += static_cast<std::size_t>(next[a]);
            }
            if (count < m_) {
                return false;
            }
            cuts_.push_back(len);
            const bool ok = solve_leaf(next);
            cuts_.pop_back();
            return ok;
        }

        // Letters must keep at least one occurrence for each later part.
        const std::size_t need_after = p_ - 1 - part;
        std::vector<std::size_t> in_part(letters, 0);
        std::vector<std::size_t> after(letters, 0);
        for (std::size_t i = start; i < len; ++i) {
            ++after[code_[i]];
        }
        std::size_t upper = 0;
        for (std::size_t a = 0; a < letters; ++a) {
            upper += static_cast<std::size_t>(viable[a] && after[a] >= need_after);
        }
        auto alive = [&](std::size_t a) {
            return viable[a] && in_part[a] >= 1 && after[a] >= need_after;
        };
        std::size_t current = 0;
        for (std::size_t end = start + 1; end + need_after <= len; ++end) {
            const std::size_t s = code_[end - 1];
            const bool before = alive(s);
            ++in_part[s];
            --after[s];
            if (viable[s] && after[s] + 1 == need_after) {
                --upper;
            }
            const bool now = alive(s);
            current = current + static_cast<std::size_t>(now) - static_cast<std::size_t>(before);
            if (upper < m_) {
                break;
            }
            if (current < m_) {
                continue;
            }
            std::vector<char> next(letters, 0);
            for (std::size_t a = 0; a < letters; ++a) {
                next[a] = static_cast<char>(alive(a));
            }
            cuts_.push_back(end);
            const bool ok = descend(part + 1, end, next);
            cuts_.pop_back();
            if (ok || stopped_) {
                return ok;
            }
        }
        return false;
    }

    bool solve_leaf(const std::vector<char>& viable) {
        if (mode_ == SearchMode::Greedy && ++leaves_ > limits_.greedy_factorizations) {
            truncated_ = true;
            stopped_ = true;
            return false;
        }
        const std::size_t letters = letters_.size();
        std::vector<std::size_t> local(letters, Bits::npos);
        std::vector<std::size_t> members;
        for (std::size_t a = 0; a < letters; ++a) {
            if (viable[a]) {
                local[a] = members.size();
                members.push_back(a);
            }
        }
        const std::size_t k = members.size();
        std::vector<Bits> conflicts(k, Bits(k));
        std::vector<std::size_t> first(k);
        std::vector<std::size_t> last(k);
        std::uint64_t work = 0;
        std::size_t begin = 0;
        for (std::size_t end : cuts_) {
            std::fill(first.begin(), first.end(), Bits::npos);
            for (std::size_t i = begin; i < end; ++i) {
                const std::size_t v = local[code_[i]];
                if (v == Bits::npos) {
                    continue;
                }
                if (first[v] == Bits::npos) {
                    first[v] = i;
                }
                last[v] = i;
            }
            // Two chosen letters clash when one occurs strictly inside the
            // other's span within a part.
            for (std::size_t v = 0; v < k; ++v) {
                for (std::size_t i = first[v] + 1; i < last[v]; ++i) {
                    const std::size_t u = local[code_[i]];
                    if (u != Bits::npos && u != v) {
                        conflicts[v].set(u);
                        conflicts[u].set(v);
                    }
                }
                if (last[v] > first[v]) {
                    work += last[v] - first[v];
                }
            }
            begin = end;
        }
        charge(work / 64);

        Bits candidates(k);
        for (std::size_t v = 0; v < k; ++v) {
            candidates.set(v);
        }
        const std::uint64_t budget = mode_ == SearchMode::Greedy
                                         ? limits_.greedy_nodes_per_factorization
                                         : limits_.node_budget - std::min(nodes_, limits_.node_budget);
        IndependentSetSearch is(conflicts, m_, budget);
        const auto result = is.run(std::move(candidates));
        charge(is.nodes());
        if (result == IndependentSetResult::Truncated) {
            if (mode_ == SearchMode::Exhaustive) {
                throw CapExceeded("exhaustive structure search exceeded its node budget");
            }
            truncated_ = true;
            return false;
        }
        if (result == IndependentSetResult::Absent) {
            return false;
        }
        std::vector<Symbol> chosen;
        for (std::size_t v : is.chosen()) {
            chosen.push_back(letters_[members[v]]);
        }
        found_.A = Alphabet(std::move(chosen));
        found_.p = p_;
        found_.splits.assign(cuts_.begin(), cuts_.end() - 1);
        return true;
    }

    std::size_t m_;
    SearchMode mode_;
    SearchLimits limits_;
    std::vector<Symbol> letters_;     // dense index -> symbol, first-occurrence order
    std::vector<std::size_t> code_;   // position -> dense index
    std::size_t p_ = 1;
    std::vector<std::size_t> cuts_;   // ends of the parts fixed so far
    std::uint64_t nodes_ = 0;
    std::uint64_t leaves_ = 0;
    bool truncated_ = false;
    bool stopped_ = false;
    StructureCertificate found_;
};

}  // namespace

SearchOutcome find_structure(const Word& alpha, std::size_t m, std::size_t q, SearchMode mode,
                             const SearchLimits& limits) {
    if (m == 0 || q == 0) {
        throw InvalidInput("find_structure needs m >= 1 and q >= 1");
    }
    const WordStats stats = word_stats(alpha);
    if (!stats.is_bounded(q)) {
        throw InvalidInput("word is not " + std::to_string(q) + "-bounded (a symbol occurs " +
                           std::to_string(stats.max_count) + " times)");
    }
    if (mode == SearchMode::Exhaustive && (alpha.size() > limits.max_length || q > limits.max_q)) {
        throw CapExceeded("exhaustive structure search is capped at length " +
                          std::to_string(limits.max_length) + " and q " +
                          std::to_string(limits.max_q));
    }
    if (stats.alphabet.size() < m) {
        return SearchOutcome{std::nullopt, true, 0};
    }
    return StructureSearch(alpha, m, mode, limits).run(q);
}

Word remark5_witness(std::size_t m) {
    if (m < 2) {
        throw InvalidInput("the witness family needs m >= 2");
    }
    std::vector<Symbol> out;
    out.reserve((m - 1) * (2 * m - 1));
    for (std::size_t i = 1; i < m; ++i) {
        const auto letter = [&](std::size_t j) { return static_cast<Symbol>((i - 1) * m + j); };
        for (std::size_t j = 1; j <= m; ++j) {
            out.push_back(letter(j));
        }
        for (std::size_t j = m - 1; j >= 1; --j) {
            out.push_back(letter(j));
        }
    }
    return Word(std::move(out));
}

std::optional<std::uint64_t> known_threshold(std::uint64_t m, std::uint64_t q) {
    if (m == 0 || q == 0) {
        return std::nullopt;
    }
    if (m == 1) {
        return 1;
    }
    if (q == 1) {
        return m;
    }
    if (q == 2) {
        return m * m - m + 1;
    }
    return std::nullopt;
}

ThresholdReport compute_N(std::size_t m, std::size_t q, std::size_t alphabet_cap) {
    if (m == 0 || q == 0) {
        throw InvalidInput("compute_N needs m >= 1 and q >= 1");
    }
    ThresholdReport report;
    report.m = m;
    report.q = q;
    report.cap = alphabet_cap;
    for (std::size_t s = 1; s <= alphabet_cap; ++s) {
        AlphabetSizeReport size_report;
        size_report.alphabet_size = s;
        if (s < m) {
            size_report.trivial = true;
            size_report.violations = 1;
            report.sizes.push_back(std::move(size_report));
            continue;
        }
        for_each_canonical_word(s, q, [&](const Word& w) {
            ++size_report.words_checked;
            const SearchOutcome found = find_structure(w, m, q, SearchMode::Exhaustive);
            if (!found.certificate) {
                ++size_report.violations;
                if (!size_report.example_violation) {
                    size_report.example_violation = w;
                }
            }
        });
        const bool clean = size_report.violations == 0;
        report.sizes.push_back(std::move(size_report));
        if (clean) {
            report.N = s;
            report.exhaustive = true;
            return report;
        }
    }
    return report;
}

}  // namespace qbound
