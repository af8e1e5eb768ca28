#include "qbound/words.hpp"

#include "qbound/errors.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <iterator>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace qbound {

Word Word::slice(std::size_t first, std::size_t last) const {
    if (first > last || last > symbols_.size()) {
        throw InvalidInput("word slice out of range");
    }
    return Word(std::vector<Symbol>(symbols_.begin() + static_cast<std::ptrdiff_t>(first),
                                    symbols_.begin() + static_cast<std::ptrdiff_t>(last)));
}

Word Word::concat(const Word& other) const {
    std::vector<Symbol> out;
    out.reserve(size() + other.size());
    out.insert(out.end(), symbols_.begin(), symbols_.end());
    out.insert(out.end(), other.symbols_.begin(), other.symbols_.end());
    return Word(std::move(out));
}

Alphabet::Alphabet(std::initializer_list<Symbol> symbols)
    : Alphabet(std::vector<Symbol>(symbols)) {}

Alphabet::Alphabet(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    std::sort(symbols_.begin(), symbols_.end());
    symbols_.erase(std::unique(symbols_.begin(), symbols_.end()), symbols_.end());
}

bool Alphabet::contains(Symbol s) const {
    return std::binary_search(symbols_.begin(), symbols_.end(), s);
}

bool Alphabet::is_subset_of(const Alphabet& other) const {
    return std::includes(other.symbols_.begin(), other.symbols_.end(), symbols_.begin(),
                         symbols_.end());
}

Alphabet Alphabet::intersect(const Alphabet& other) const {
    std::vector<Symbol> out;
    std::set_intersection(symbols_.begin(), symbols_.end(), other.symbols_.begin(),
                          other.symbols_.end(), std::back_inserter(out));
    return Alphabet(std::move(out));
}

WordStats word_stats(const Word& w) {
    WordStats stats;
    for (Symbol s : w) {
        ++stats.counts[s];
    }
    std::vector<Symbol> letters;
    letters.reserve(stats.counts.size());
    for (const auto& [s, c] : stats.counts) {
        letters.push_back(s);
        stats.max_count = std::max(stats.max_count, c);
    }
    stats.alphabet = Alphabet(std::move(letters));
    return stats;
}

Alphabet alph(const Word& w) {
    return Alphabet(std::vector<Symbol>(w.begin(), w.end()));
}

Word project(const Word& w, const Alphabet& b) {
    std::vector<Symbol> out;
    for (Symbol s : w) {
        if (b.contains(s)) {
            out.push_back(s);
        }
    }
    return Word(std::move(out));
}

Word condense(const Word& w, const Alphabet& b) {
    std::vector<Symbol> out;
    for (Symbol s : w) {
        if (b.contains(s) && (out.empty() || out.back() != s)) {
            out.push_back(s);
        }
    }
    return Word(std::move(out));
}

bool is_permutation(const Word& w, const Alphabet& a) {
    if (w.size() != a.size() || a.empty()) {
        return false;
    }
    std::vector<Symbol> sorted(w.begin(), w.end());
    std::sort(sorted.begin(), sorted.end());
    return std::equal(sorted.begin(), sorted.end(), a.begin(), a.end());
}

SymbolOrder ranked_order(std::span<const Symbol> smallest_first) {
    std::unordered_map<Symbol, std::size_t> rank;
    for (std::size_t i = 0; i < smallest_first.size(); ++i) {
        if (!rank.emplace(smallest_first[i], i).second) {
            throw InvalidInput("symbol order lists a symbol twice");
        }
    }
    return [rank = std::move(rank)](Symbol a, Symbol b) {
        const auto ia = rank.find(a);
        const auto ib = rank.find(b);
        const std::size_t ra = ia == rank.end() ? std::numeric_limits<std::size_t>::max() : ia->second;
        const std::size_t rb = ib == rank.end() ? std::numeric_limits<std::size_t>::max() : ib->second;
        if (ra != rb) {
            return ra < rb;
        }
        return a < b;
    };
}

bool lex_less(const Word& u, const Word& v, const SymbolOrder& order) {
    const std::size_t common = std::min(u.size(), v.size());
    for (std::size_t i = 0; i < common; ++i) {
        if (u[i] != v[i]) {
            return order ? order(u[i], v[i]) : u[i] < v[i];
        }
    }
    return u.size() < v.size();
}

std::optional<std::vector<Word>> factor_at_cuts(const Word& w,
                                                 std::span<const std::size_t> cuts) {
    std::vector<Word> parts;
    std::size_t prev = 0;
    for (std::size_t cut : cuts) {
        if (cut <= prev || cut >= w.size()) {
            return std::nullopt;
        }
        parts.push_back(w.slice(prev, cut));
        prev = cut;
    }
    if (prev >= w.size()) {
        return std::nullopt;
    }
    parts.push_back(w.slice(prev, w.size()));
    return parts;
}

std::optional<std::vector<Word>> equal_blocks(const Word& w, std::size_t blocks) {
    if (blocks == 0 || w.size() % blocks != 0) {
        return std::nullopt;
    }
    const std::size_t len = w.size() / blocks;
    std::vector<Word> out;
    out.reserve(blocks);
    for (std::size_t i = 0; i < blocks; ++i) {
        out.push_back(w.slice(i * len, (i + 1) * len));
    }
    return out;
}

Word canonical_form(const Word& w) {
    std::unordered_map<Symbol, Symbol> rename;
    std::vector<Symbol> out;
    out.reserve(w.size());
    for (Symbol s : w) {
        auto [it, inserted] = rename.emplace(s, static_cast<Symbol>(rename.size() + 1));
        out.push_back(it->second);
    }
    return Word(std::move(out));
}

namespace {

Word parse_line(std::string_view line, std::size_t line_no) {
    std::vector<Symbol> symbols;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        if (i == line.size()) {
            break;
        }
        Symbol value = 0;
        const auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), value);
        if (ec != std::errc{} || ptr == line.data() + i) {
            throw InvalidInput("line " + std::to_string(line_no) +
                               ": expected a non-negative decimal symbol");
        }
        i = static_cast<std::size_t>(ptr - line.data());
        if (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
            throw InvalidInput("line " + std::to_string(line_no) + ": malformed symbol");
        }
        symbols.push_back(value);
    }
    return Word(std::move(symbols));
}

}  // namespace

std::vector<Word> parse_words(std::string_view text) {
    std::vector<Word> words;
    std::size_t start = 0;
    std::size_t line_no = 1;
    while (start < text.size()) {
        const std::size_t nl = text.find('\n', start);
        const std::size_t stop = nl == std::string_view::npos ? text.size() : nl;
        words.push_back(parse_line(text.substr(start, stop - start), line_no));
        if (nl == std::string_view::npos) {
            break;
        }
        start = nl + 1;
        ++line_no;
    }
    return words;
}

std::vector<Word> read_words(std::istream& in) {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_words(buffer.str());
}

std::string format_word(const Word& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i != 0) {
            out += ' ';
        }
        out += std::to_string(w[i]);
    }
    return out;
}

std::string format_words(std::span<const Word> words) {
    std::string out;
    for (const Word& w : words) {
        out += format_word(w);
        out += '\n';
    }
    return out;
}

}  // namespace qbound
