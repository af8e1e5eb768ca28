#include "qbound/json_io.hpp"

#include "qbound/errors.hpp"

#include <algorithm>
#include <limits>

namespace qbound {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) {
        throw InvalidInput(std::string("expected a JSON object holding '") + key + "'");
    }
    const auto it = j.find(key);
    if (it == j.end()) {
        throw InvalidInput(std::string("missing field '") + key + "'");
    }
    return *it;
}

std::uint64_t to_uint(const Json& j, const char* what,
                      std::uint64_t max = std::numeric_limits<std::uint64_t>::max()) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        throw InvalidInput(std::string("'") + what + "' must be a non-negative integer");
    }
    const auto v = j.get<std::uint64_t>();
    if (v > max) {
        throw InvalidInput(std::string("'") + what + "' is out of range");
    }
    return v;
}

std::uint64_t uint_field(const Json& j, const char* key,
                         std::uint64_t max = std::numeric_limits<std::uint64_t>::max()) {
    return to_uint(field(j, key), key, max);
}

std::vector<std::size_t> index_list(const Json& j, const char* what) {
    if (!j.is_array()) {
        throw InvalidInput(std::string("'") + what + "' must be an array");
    }
    std::vector<std::size_t> out;
    out.reserve(j.size());
    for (const Json& e : j) {
        out.push_back(static_cast<std::size_t>(to_uint(e, what)));
    }
    return out;
}

Json alphabets_to_json(const std::vector<Alphabet>& list) {
    Json out = Json::array();
    for (const Alphabet& a : list) {
        out.push_back(alphabet_to_json(a));
    }
    return out;
}

std::vector<Alphabet> alphabets_from_json(const Json& j, const char* what) {
    if (!j.is_array()) {
        throw InvalidInput(std::string("'") + what + "' must be an array of alphabets");
    }
    std::vector<Alphabet> out;
    for (const Json& e : j) {
        out.push_back(alphabet_from_json(e));
    }
    return out;
}

Json blocks_to_json(const std::vector<Block>& blocks) {
    Json out = Json::array();
    for (Block b : blocks) {
        out.push_back(b.value);
    }
    return out;
}

std::vector<Block> blocks_from_json(const Json& j, const char* what) {
    if (!j.is_array()) {
        throw InvalidInput(std::string("'") + what + "' must be an array of blocks");
    }
    std::vector<Block> out;
    for (const Json& e : j) {
        out.push_back(Block{to_uint(e, what)});
    }
    return out;
}

}  // namespace

Json word_to_json(const Word& w) {
    return Json(std::vector<Symbol>(w.begin(), w.end()));
}

Word word_from_json(const Json& j) {
    if (!j.is_array()) {
        throw InvalidInput("a word must be a JSON array of symbols");
    }
    std::vector<Symbol> out;
    for (const Json& e : j) {
        out.push_back(static_cast<Symbol>(to_uint(e, "symbol", std::numeric_limits<Symbol>::max())));
    }
    return Word(std::move(out));
}

Json alphabet_to_json(const Alphabet& a) {
    return Json(std::vector<Symbol>(a.begin(), a.end()));
}

Alphabet alphabet_from_json(const Json& j) {
    const Word w = word_from_json(j);
    std::vector<Symbol> symbols(w.begin(), w.end());
    std::sort(symbols.begin(), symbols.end());
    if (std::adjacent_find(symbols.begin(), symbols.end()) != symbols.end()) {
        throw InvalidInput("alphabet lists a symbol twice");
    }
    return Alphabet(std::move(symbols));
}

Json structure_to_json(const StructureCertificate& c) {
    Json j;
    j["A"] = alphabet_to_json(c.A);
    j["p"] = c.p;
    j["splits"] = c.splits;
    return j;
}

StructureCertificate structure_from_json(const Json& j) {
    StructureCertificate c;
    c.A = alphabet_from_json(field(j, "A"));
    c.p = uint_field(j, "p");
    c.splits = index_list(field(j, "splits"), "splits");
    return c;
}

Json attack_cert_to_json(const AttackCertificate& c) {
    Json j;
    j["B"] = alphabet_to_json(c.B);
    j["p"] = c.p;
    j["splits"] = c.splits;
    j["n"] = c.n;
    j["k"] = c.k;
    return j;
}

AttackCertificate attack_cert_from_json(const Json& j) {
    AttackCertificate c;
    c.B = alphabet_from_json(field(j, "B"));
    c.p = uint_field(j, "p");
    c.splits = index_list(field(j, "splits"), "splits");
    c.n = uint_field(j, "n");
    c.k = uint_field(j, "k");
    return c;
}

Json nesting_to_json(const NestingCertificate& c) {
    Json j;
    j["B"] = alphabet_to_json(c.B);
    j["claim"] = c.claim == NestingClaim::Corollary ? "corollary" : "factorization";
    Json levels = Json::array();
    for (const NestingLevel& level : c.levels) {
        Json l;
        l["blocks"] = level.blocks;
        l["upper"] = alphabets_to_json(level.upper);
        l["lower"] = alphabets_to_json(level.lower);
        l["match"] = level.match;
        levels.push_back(std::move(l));
    }
    j["levels"] = std::move(levels);
    j["tail"] = alphabets_to_json(c.tail);
    return j;
}

NestingCertificate nesting_from_json(const Json& j) {
    NestingCertificate c;
    c.B = alphabet_from_json(field(j, "B"));
    const Json& claim = field(j, "claim");
    if (claim == "corollary") {
        c.claim = NestingClaim::Corollary;
    } else if (claim == "factorization") {
        c.claim = NestingClaim::Factorization;
    } else {
        throw InvalidInput("claim must be 'factorization' or 'corollary'");
    }
    const Json& levels = field(j, "levels");
    if (!levels.is_array()) {
        throw InvalidInput("'levels' must be an array");
    }
    for (const Json& l : levels) {
        NestingLevel level;
        level.blocks = uint_field(l, "blocks");
        level.upper = alphabets_from_json(field(l, "upper"), "upper");
        level.lower = alphabets_from_json(field(l, "lower"), "lower");
        level.match = index_list(field(l, "match"), "match");
        c.levels.push_back(std::move(level));
    }
    c.tail = alphabets_from_json(field(j, "tail"), "tail");
    return c;
}

Json cadence_to_json(const Cadence& c) {
    Json j;
    j["positions"] = c.positions;
    j["difference"] = c.difference;
    j["order"] = c.order();
    return j;
}

Json n_division_to_json(const NDivision& d) {
    Json j;
    j["u"] = word_to_json(d.u);
    Json factors = Json::array();
    for (const Word& x : d.factors) {
        factors.push_back(word_to_json(x));
    }
    j["factors"] = std::move(factors);
    j["v"] = word_to_json(d.v);
    return j;
}

Json collision_to_json(const CollisionRecord& rec) {
    Json j;
    j["n"] = rec.n;
    j["m"] = rec.m;
    j["oracle_seed"] = rec.oracle_seed;
    j["h0"] = rec.h0.value;
    j["schedule"] = rec.schedule;
    j["l"] = rec.set.length;
    j["digest"] = rec.set.digest.value;
    Json groups = Json::array();
    for (const CollisionGroup& g : rec.set.groups) {
        Json gj;
        gj["positions"] = g.positions;
        Json choices = Json::array();
        for (const auto& c : g.choices) {
            choices.push_back(blocks_to_json(c));
        }
        gj["choices"] = std::move(choices);
        groups.push_back(std::move(gj));
    }
    j["groups"] = std::move(groups);
    j["base_blocks"] = blocks_to_json(rec.set.base_blocks);
    return j;
}

CollisionRecord collision_from_json(const Json& j) {
    CollisionRecord rec;
    rec.n = static_cast<unsigned>(uint_field(j, "n", 32));
    rec.m = static_cast<unsigned>(uint_field(j, "m", 64));
    rec.oracle_seed = uint_field(j, "oracle_seed");
    rec.h0 = HashValue{static_cast<std::uint32_t>(uint_field(j, "h0", 0xffffffffULL))};
    const Json& sched = field(j, "schedule");
    if (!sched.is_string()) {
        throw InvalidInput("'schedule' must be a string");
    }
    rec.schedule = sched.get<std::string>();
    rec.set.length = uint_field(j, "l");
    rec.set.digest = HashValue{static_cast<std::uint32_t>(uint_field(j, "digest", 0xffffffffULL))};
    const Json& groups = field(j, "groups");
    if (!groups.is_array()) {
        throw InvalidInput("'groups' must be an array");
    }
    for (const Json& gj : groups) {
        CollisionGroup g;
        g.positions = index_list(field(gj, "positions"), "positions");
        const Json& choices = field(gj, "choices");
        if (!choices.is_array()) {
            throw InvalidInput("'choices' must be an array");
        }
        for (const Json& c : choices) {
            g.choices.push_back(blocks_from_json(c, "choices"));
        }
        rec.set.groups.push_back(std::move(g));
    }
    rec.set.base_blocks = blocks_from_json(field(j, "base_blocks"), "base_blocks");
    return rec;
}

Json bound_to_json(const ComplexityBound& b) {
    Json j;
    j["queries"] = b.queries;
    j["log2_queries"] = b.log2_queries;
    j["m"] = b.m;
    j["N"] = b.N;
    j["exact_N"] = b.exact_N;
    j["runnable"] = b.runnable;
    return j;
}

Json report_to_json(const AttackReport& r) {
    Json j;
    j["kind"] = r.kind;
    j["params"] = {{"n", r.n}, {"m", r.m}, {"q", r.q}, {"r", r.r}, {"l", r.l}};
    j["seed"] = r.seed;
    j["attack_queries"] = r.attack_queries;
    j["raw_calls"] = r.raw_calls;
    j["stage_queries"] = r.stage_queries;
    j["restarts"] = r.restarts;
    j["strategy"] = r.strategy;
    j["a_tilde"] = r.a_tilde;
    j["bound"] = r.bound;
    j["within_bound"] = static_cast<double>(r.attack_queries) <= r.bound;
    j["verify_ok"] = r.verify_ok;
    j["verify_sampled"] = r.verify_sampled;
    if (r.kind == "gihf") {
        j["structure"] = {{"p", r.p}, {"b_size", r.b_size}};
        // Two readings of the level-1 cost: per position of β_1 and per letter of B.
        j["level1"] = {{"positions", r.level1_positions},
                       {"cost_by_positions", r.level1_cost_by_positions},
                       {"cost_by_letters", r.level1_cost_by_letters}};
    }
    return j;
}

}  // namespace qbound
