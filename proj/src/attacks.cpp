#include "qbound/attacks.hpp"

#include "qbound/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <unordered_map>

namespace qbound {

namespace {

// Raised inside one attempt of the generalized attack when a level's 2^n
// candidates contain no collision; the driver retries with fresh fixed blocks.
struct CandidatesExhausted {};

struct CollisionFound {
    Block first;
    Block second;
    HashValue value;
};

template <typename Fn>
CollisionFound collide_table(Fn&& fn, BlockSampler& sampler) {
    std::unordered_map<std::uint32_t, Block> seen;
    while (true) {
        const Block b = sampler.next();
        const HashValue v = fn(b);
        const auto [it, inserted] = seen.emplace(v.value, b);
        if (!inserted) {
            return CollisionFound{it->second, b, v};
        }
    }
}

template <typename Fn>
CollisionFound collide_rho(Fn&& fn, BlockSampler& sampler, unsigned m, std::uint32_t mask) {
    while (true) {
        // A fresh key per attempt: embed is an injection of n-bit values into
        // blocks, so distinct values give distinct blocks.
        const std::uint64_t key = sampler.next().value;
        const BlockSampler embed(m, key);
        const auto step = [&](std::uint32_t x) { return fn(embed.at(x)).value; };
        const auto start = static_cast<std::uint32_t>(mix64(key) & mask);

        std::uint32_t tortoise = step(start);
        std::uint32_t hare = step(step(start));
        while (tortoise != hare) {
            tortoise = step(tortoise);
            hare = step(step(hare));
        }
        tortoise = start;
        if (tortoise == hare) {
            continue;  // start lies on the cycle; no tail, no collision
        }
        while (true) {
            const std::uint32_t nt = step(tortoise);
            const std::uint32_t nh = step(hare);
            if (nt == nh) {
                return CollisionFound{embed.at(tortoise), embed.at(hare), HashValue{nt}};
            }
            tortoise = nt;
            hare = nh;
        }
    }
}

template <typename Fn>
CollisionFound collide(Fn&& fn, BlockSampler& sampler, CollisionStrategy strategy,
                       const CompressionOracle& o) {
    if (strategy == CollisionStrategy::Table) {
        return collide_table(fn, sampler);
    }
    return collide_rho(fn, sampler, o.m(), o.hash_mask());
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    return a * b;
}

bool structurally_sound(const MulticollisionSet& mc) {
    if (mc.length == 0 || mc.base_blocks.size() != mc.length || mc.groups.empty()) {
        return false;
    }
    std::vector<char> used(mc.length + 1, 0);
    for (const CollisionGroup& g : mc.groups) {
        if (g.positions.empty() || g.choices.size() < 2) {
            return false;
        }
        for (std::size_t pos : g.positions) {
            if (pos == 0 || pos > mc.length || used[pos]) {
                return false;
            }
            used[pos] = 1;
        }
        for (const auto& c : g.choices) {
            if (c.size() != g.positions.size()) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

std::string to_string(CollisionStrategy s) {
    return s == CollisionStrategy::Rho ? "rho" : "table";
}

CollisionStrategy parse_collision_strategy(const std::string& name) {
    if (name == "rho") {
        return CollisionStrategy::Rho;
    }
    if (name == "table") {
        return CollisionStrategy::Table;
    }
    throw InvalidInput("unknown collision strategy '" + name + "' (expected rho or table)");
}

PairCollision block_pair_collision(CompressionOracle& o, HashValue h, BlockSampler& sampler,
                                   CollisionStrategy strategy) {
    const std::uint64_t before = o.query_count();
    const auto found = collide([&](Block b) { return o.compress(h, b); }, sampler, strategy, o);
    return PairCollision{found.first, found.second, found.value, o.query_count() - before};
}

std::uint64_t MulticollisionSet::expansion_size() const {
    std::uint64_t total = 1;
    for (const CollisionGroup& g : groups) {
        total = sat_mul(total, g.choices.size());
    }
    return total;
}

std::vector<Block> MulticollisionSet::message(std::uint64_t index) const {
    std::vector<Block> out = base_blocks;
    for (const CollisionGroup& g : groups) {
        const std::uint64_t radix = g.choices.size();
        const auto& choice = g.choices[index % radix];
        index /= radix;
        for (std::size_t j = 0; j < g.positions.size(); ++j) {
            out[g.positions[j] - 1] = choice[j];
        }
    }
    return out;
}

MulticollisionCheck verify_multicollision(CompressionOracle audit, const Schedule& sched,
                                          HashValue h0, const MulticollisionSet& mc,
                                          std::uint64_t cap, std::uint64_t sample_seed) {
    MulticollisionCheck check;
    check.well_formed = structurally_sound(mc);
    if (!check.well_formed) {
        return check;
    }
    const std::uint64_t total = mc.expansion_size();
    std::vector<std::uint64_t> indices;
    if (total <= cap) {
        indices.resize(total);
        for (std::uint64_t i = 0; i < total; ++i) {
            indices[i] = i;
        }
    } else {
        check.sampled = true;
        std::mt19937_64 rng(sample_seed);
        std::uniform_int_distribution<std::uint64_t> pick(0, total - 1);
        std::set<std::uint64_t> chosen;
        while (chosen.size() < cap) {
            chosen.insert(pick(rng));
        }
        indices.assign(chosen.begin(), chosen.end());
    }
    check.digests_equal = true;
    std::set<std::vector<std::uint64_t>> messages;
    for (std::uint64_t idx : indices) {
        const std::vector<Block> msg = mc.message(idx);
        std::vector<std::uint64_t> raw(msg.size());
        std::transform(msg.begin(), msg.end(), raw.begin(), [](Block b) { return b.value; });
        messages.insert(std::move(raw));
        try {
            if (gihf_eval(audit, sched, h0, msg) != mc.digest) {
                check.digests_equal = false;
            }
        } catch (const InvalidInput&) {
            check.digests_equal = false;
        }
        ++check.messages_checked;
        if (!check.digests_equal) {
            break;
        }
    }
    check.distinct = messages.size() == check.messages_checked;
    check.ok = check.digests_equal && check.distinct;
    return check;
}

ComplexityBound complexity_bound(unsigned n, std::size_t q, std::size_t r, double a_tilde) {
    if (q == 0 || r == 0) {
        throw InvalidInput("complexity_bound needs q >= 1 and r >= 1");
    }
    ComplexityBound b;
    const double nd = n;
    const double qd = static_cast<double>(q);
    const double rd = static_cast<double>(r);
    double log2_n_hat = 0;
    if (q == 1) {
        b.m = rd;
        b.N = rd;
        b.exact_N = true;
        b.runnable = true;
        log2_n_hat = std::log2(rd);
    } else if (q == 2) {
        b.m = nd * rd;
        b.N = b.m * b.m - b.m + 1;
        b.exact_N = true;
        b.runnable = true;
        log2_n_hat = std::log2(b.N);
    } else {
        const double log2_m = (qd - 1) * (qd - 1) * std::log2(nd) + (2 * qd - 3) * std::log2(rd);
        log2_n_hat = std::exp2(qd - 1) * log2_m;
        b.m = std::exp2(log2_m);
        b.N = std::exp2(log2_n_hat);
        b.exact_N = false;
        b.runnable = false;
    }
    // For q = 1 the factor q is 1 and N plays the role of r.
    b.log2_queries = std::log2(a_tilde) + std::log2(qd) + log2_n_hat + nd / 2;
    b.queries = a_tilde * qd * b.N * std::exp2(nd / 2);
    return b;
}

AttackOutcome joux_attack(CompressionOracle& o, std::size_t r, const AttackOptions& options) {
    if (r == 0) {
        throw InvalidInput("joux_attack needs r >= 1");
    }
    BlockSampler sampler(o.m(), options.seed);
    const std::uint64_t q_before = o.query_count();
    const std::uint64_t raw_before = o.raw_calls();

    AttackOutcome out;
    MulticollisionSet& mc = out.collision;
    mc.length = r;
    HashValue h = options.h0;
    for (std::size_t i = 1; i <= r; ++i) {
        const PairCollision pc = block_pair_collision(o, h, sampler, options.strategy);
        mc.groups.push_back(CollisionGroup{{i}, {{pc.first}, {pc.second}}});
        mc.base_blocks.push_back(pc.first);
        out.report.stage_queries.push_back(pc.queries);
        h = pc.next;
    }
    mc.digest = h;

    AttackReport& rep = out.report;
    rep.kind = "joux";
    rep.n = o.n();
    rep.m = o.m();
    rep.q = 1;
    rep.r = r;
    rep.l = r;
    rep.seed = options.seed;
    rep.attack_queries = o.query_count() - q_before;
    rep.raw_calls = o.raw_calls() - raw_before;
    rep.a_tilde = options.a_tilde;
    rep.bound = complexity_bound(o.n(), 1, r, options.a_tilde).queries;
    rep.strategy = to_string(options.strategy);
    const auto check = verify_multicollision(o.clone(), identity_schedule(), options.h0, mc,
                                             options.verify_cap, options.seed);
    rep.verify_ok = check.ok;
    rep.verify_sampled = check.sampled;
    return out;
}

double attack_threshold_length(unsigned n, std::size_t r, std::size_t q) {
    if (q <= 2) {
        if (const auto t = attack_alphabet_threshold(n, r, q)) {
            return static_cast<double>(*t);
        }
        return std::numeric_limits<double>::infinity();
    }
    const double m = static_cast<double>(attack_subalphabet_size(n, r, q));
    return std::pow(m, std::exp2(static_cast<double>(q) - 1));
}

namespace {

class LevelwiseAttack {
public:
    LevelwiseAttack(CompressionOracle& o, const Word& alpha, const AttackCertificate& cert,
                    BlockSampler& sampler, CollisionStrategy strategy)
        : o_(o), alpha_(alpha), cert_(cert), sampler_(sampler), strategy_(strategy) {
        l_ = 0;
        for (Symbol s : alpha) {
            l_ = std::max<std::size_t>(l_, s);
        }
    }

    MulticollisionSet run(HashValue h0, std::vector<std::uint64_t>& level_queries) {
        message_.assign(l_ + 1, Block{});
        for (std::size_t i = 1; i <= l_; ++i) {
            message_[i] = sampler_.next();
        }
        in_b_.assign(l_ + 1, 0);
        for (Symbol s : cert_.B) {
            in_b_[s] = 1;
        }
        const auto parts = *factor_at_cuts(alpha_, cert_.splits);

        std::vector<CollisionGroup> groups;
        std::vector<std::size_t> group_of(l_ + 1, 0);
        HashValue h = h0;
        level_queries.clear();
        for (std::size_t level = 1; level <= cert_.p; ++level) {
            const std::uint64_t before = o_.query_count();
            const Word& part = parts[level - 1];
            const Word cond = condense(part, cert_.B);
            std::size_t group_len = 1;
            for (std::size_t i = 1; i < level; ++i) {
                group_len *= cert_.n;
            }
            std::vector<CollisionGroup> next_groups;
            std::size_t pos = 0;
            for (std::size_t start = 0; start < cond.size(); start += group_len) {
                std::vector<char> member(l_ + 1, 0);
                for (std::size_t j = start; j < start + group_len; ++j) {
                    member[cond[j]] = 1;
                }
                std::size_t seg_begin = part.size();
                std::size_t seg_end = 0;
                for (std::size_t i = 0; i < part.size(); ++i) {
                    if (member[part[i]]) {
                        seg_begin = std::min(seg_begin, i);
                        seg_end = i + 1;
                    }
                }
                h = run_fixed(h, part, pos, seg_begin);
                CollisionGroup merged;
                if (level == 1) {
                    merged = collapse_letter(h, part, seg_begin, seg_end, cond[start]);
                } else {
                    merged = collapse_groups(h, part, seg_begin, seg_end, groups, group_of);
                }
                h = last_value_;
                next_groups.push_back(std::move(merged));
                pos = seg_end;
            }
            h = run_fixed(h, part, pos, part.size());
            groups = std::move(next_groups);
            for (std::size_t g = 0; g < groups.size(); ++g) {
                for (std::size_t position : groups[g].positions) {
                    group_of[position] = g;
                }
            }
            level_queries.push_back(o_.query_count() - before);
        }

        MulticollisionSet mc;
        mc.length = l_;
        mc.groups = std::move(groups);
        mc.base_blocks.assign(message_.begin() + 1, message_.end());
        for (const CollisionGroup& g : mc.groups) {
            for (std::size_t j = 0; j < g.positions.size(); ++j) {
                mc.base_blocks[g.positions[j] - 1] = g.choices[0][j];
            }
        }
        mc.digest = h;
        return mc;
    }

private:
    // Positions outside B: their blocks never change.
    HashValue run_fixed(HashValue h, const Word& part, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            if (in_b_[part[i]]) {
                throw ConstructionDefect("letter of B outside its group's segment");
            }
            h = o_.compress(h, message_[part[i]]);
        }
        return h;
    }

    HashValue run_segment(HashValue h, const Word& part, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            h = o_.compress(h, message_[part[i]]);
        }
        return h;
    }

    CollisionGroup collapse_letter(HashValue h, const Word& part, std::size_t begin,
                                   std::size_t end, Symbol letter) {
        const auto found = collide(
            [&](Block b) {
                message_[letter] = b;
                return run_segment(h, part, begin, end);
            },
            sampler_, strategy_, o_);
        message_[letter] = found.first;
        last_value_ = found.value;
        return CollisionGroup{{letter}, {{found.first}, {found.second}}};
    }

    CollisionGroup collapse_groups(HashValue h, const Word& part, std::size_t begin, std::size_t end,
                                   const std::vector<CollisionGroup>& previous,
                                   const std::vector<std::size_t>& group_of) {
        // Subgroups in order of first appearance inside the segment.
        std::vector<std::size_t> subs;
        for (std::size_t i = begin; i < end; ++i) {
            if (!in_b_[part[i]]) {
                continue;
            }
            const std::size_t g = group_of[part[i]];
            if (std::find(subs.begin(), subs.end(), g) == subs.end()) {
                subs.push_back(g);
            }
        }
        const std::size_t width = subs.size();
        if (width >= 63) {
            throw InvalidInput("level groups wider than 62 subgroups are not simulated");
        }
        // Bit 0 drives the last subgroup so consecutive candidates share
        // evaluation prefixes.
        const auto apply = [&](std::uint64_t x) {
            for (std::size_t j = 0; j < width; ++j) {
                const CollisionGroup& g = previous[subs[j]];
                const auto& choice = g.choices[(x >> (width - 1 - j)) & 1U];
                for (std::size_t t = 0; t < g.positions.size(); ++t) {
                    message_[g.positions[t]] = choice[t];
                }
            }
        };
        std::unordered_map<std::uint32_t, std::uint64_t> seen;
        const std::uint64_t candidates = std::uint64_t{1} << width;
        for (std::uint64_t x = 0; x < candidates; ++x) {
            apply(x);
            const HashValue v = run_segment(h, part, begin, end);
            const auto [it, inserted] = seen.emplace(v.value, x);
            if (inserted) {
                continue;
            }
            CollisionGroup merged;
            merged.choices.resize(2);
            for (std::uint64_t pick : {it->second, x}) {
                apply(pick);
                std::vector<Block> assignment;
                for (std::size_t j = 0; j < width; ++j) {
                    for (std::size_t position : previous[subs[j]].positions) {
                        if (pick == it->second) {
                            merged.positions.push_back(position);
                        }
                        assignment.push_back(message_[position]);
                    }
                }
                merged.choices[pick == it->second ? 0 : 1] = std::move(assignment);
            }
            apply(it->second);
            last_value_ = v;
            return merged;
        }
        throw CandidatesExhausted{};
    }

    CompressionOracle& o_;
    const Word& alpha_;
    const AttackCertificate& cert_;
    BlockSampler& sampler_;
    CollisionStrategy strategy_;
    std::size_t l_ = 0;
    std::vector<Block> message_;  // indexed by position 1..l
    std::vector<char> in_b_;
    HashValue last_value_;
};

}  // namespace

AttackOutcome generalized_attack(CompressionOracle& o, const Schedule& sched, std::size_t q,
                                 unsigned n_param, std::size_t r, const AttackOptions& options) {
    if (n_param != o.n()) {
        throw InvalidInput("n_param must equal the oracle's hash length");
    }
    if (q == 0 || r == 0) {
        throw InvalidInput("generalized_attack needs q >= 1 and r >= 1");
    }
    const double required = attack_threshold_length(n_param, r, q);
    const std::size_t kMaxSimulatedLength = 1'000'000;
    std::size_t l = 0;
    if (options.length) {
        l = *options.length;
        if (static_cast<double>(l) < required) {
            throw ThresholdNotMet("message length " + std::to_string(l) +
                                      " is below the required " + std::to_string(required),
                                  required);
        }
    } else {
        if (!std::isfinite(required) || required > static_cast<double>(kMaxSimulatedLength)) {
            throw ThresholdNotMet("required message length " + std::to_string(required) +
                                      " is beyond simulation scale",
                                  required);
        }
        l = static_cast<std::size_t>(std::ceil(required));
    }
    const Word alpha = sched.word(l);
    const AttackCertificate cert = find_attack_structure(alpha, n_param, r, q);

    AttackOutcome out;
    out.certificate = cert;
    AttackReport& rep = out.report;
    const std::uint64_t q_before = o.query_count();
    const std::uint64_t raw_before = o.raw_calls();
    BlockSampler sampler(o.m(), options.seed);
    LevelwiseAttack attack(o, alpha, cert, sampler, options.strategy);
    for (std::size_t attempt = 0;; ++attempt) {
        try {
            out.collision = attack.run(options.h0, rep.stage_queries);
            break;
        } catch (const CandidatesExhausted&) {
            if (attempt >= options.max_restarts) {
                throw std::runtime_error("every level candidate space was exhausted after " +
                                         std::to_string(attempt + 1) + " attempts");
            }
            rep.restarts = attempt + 1;
        }
    }

    rep.kind = "gihf";
    rep.n = o.n();
    rep.m = o.m();
    rep.q = q;
    rep.r = r;
    rep.l = l;
    rep.seed = options.seed;
    rep.attack_queries = o.query_count() - q_before;
    rep.raw_calls = o.raw_calls() - raw_before;
    rep.a_tilde = options.a_tilde;
    rep.bound = complexity_bound(n_param, q, r, options.a_tilde).queries;
    rep.strategy = to_string(options.strategy);
    rep.p = cert.p;
    rep.b_size = cert.B.size();
    const auto parts = *factor_at_cuts(alpha, cert.splits);
    rep.level1_positions = parts.front().size();
    const double birthday = std::exp2(static_cast<double>(n_param) / 2);
    rep.level1_cost_by_positions = options.a_tilde * static_cast<double>(rep.level1_positions) * birthday;
    rep.level1_cost_by_letters = options.a_tilde * static_cast<double>(rep.b_size) * birthday;

    const auto check = verify_multicollision(o.clone(), sched, options.h0, out.collision,
                                             options.verify_cap, options.seed);
    rep.verify_ok = check.ok;
    rep.verify_sampled = check.sampled;
    return out;
}

}  // namespace qbound
