#include "cli.hpp"

#include "qbound/attacks.hpp"
#include "qbound/classics.hpp"
#include "qbound/errors.hpp"
#include "qbound/hashsim.hpp"
#include "qbound/json_io.hpp"
#include "qbound/nesting.hpp"
#include "qbound/regularity.hpp"
#include "qbound/words.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

namespace qbound::cli {

namespace {

constexpr const char* kSeedEnv = "QBOUND_SEED";

struct Outcome {
    Json config = Json::object();
    Json result = Json::object();
    int code = kOk;
    std::string summary;
};

// Raised for parameter problems detected after parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string format = "json";
    std::optional<std::uint64_t> seed;
};

std::vector<Word> load_words(const std::string& path, std::istream& in) {
    if (path == "-") {
        return read_words(in);
    }
    std::ifstream file(path);
    if (!file) {
        throw UsageError("cannot open input file '" + path + "'");
    }
    return read_words(file);
}

Json load_json(const std::string& path) {
    std::ifstream file(path);
    if (!file) {
        throw UsageError("cannot open JSON file '" + path + "'");
    }
    try {
        return Json::parse(file);
    } catch (const Json::parse_error& e) {
        throw InvalidInput("malformed JSON in '" + path + "': " + e.what());
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream file(path);
    if (!file) {
        throw UsageError("cannot write '" + path + "'");
    }
    file << text;
}

std::uint64_t resolve_seed(const Common& c, Json& config) {
    if (c.seed) {
        config["seed"] = *c.seed;
        config["seed_source"] = "flag";
        return *c.seed;
    }
    if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
        std::size_t used = 0;
        std::uint64_t value = 0;
        try {
            value = std::stoull(env, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != std::string(env).size()) {
            throw UsageError(std::string(kSeedEnv) + " must be a decimal integer");
        }
        config["seed"] = value;
        config["seed_source"] = "env";
        return value;
    }
    throw UsageError(std::string("this command is stochastic: pass --seed or set ") + kSeedEnv);
}

void check_widths(unsigned n, unsigned m) {
    if (n < 1 || n > 32 || m <= n || m > 64) {
        throw UsageError("need 1 <= n <= 32 and n < m <= 64");
    }
}

double median(std::vector<std::uint64_t> v) {
    if (v.empty()) {
        return 0;
    }
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    if (v.size() % 2 == 1) {
        return static_cast<double>(v[h]);
    }
    return (static_cast<double>(v[h - 1]) + static_cast<double>(v[h])) / 2;
}

double mean(const std::vector<std::uint64_t>& v) {
    if (v.empty()) {
        return 0;
    }
    double s = 0;
    for (auto x : v) {
        s += static_cast<double>(x);
    }
    return s / static_cast<double>(v.size());
}

Schedule schedule_by_name(const std::string& name, const std::string& file, std::istream& in) {
    if (name == "identity") {
        return identity_schedule();
    }
    if (name == "mirror") {
        return mirror_schedule();
    }
    if (name == "file") {
        if (file.empty()) {
            throw UsageError("--schedule file needs --schedule-file");
        }
        return file_schedule(load_words(file, in));
    }
    throw UsageError("unknown schedule '" + name + "'");
}

// Per-trial seeds: independent streams for the oracle, the block sampler
// and the initial value.
struct TrialSeeds {
    std::uint64_t oracle;
    std::uint64_t sampler;
    std::uint64_t h0;
};

TrialSeeds trial_seeds(std::uint64_t seed, std::size_t trial) {
    return TrialSeeds{derive_seed(seed, 0, trial), derive_seed(seed, 1, trial),
                      derive_seed(seed, 2, trial)};
}

Json size_report_json(const AlphabetSizeReport& s) {
    Json j;
    j["alphabet_size"] = s.alphabet_size;
    j["words_checked"] = s.words_checked;
    j["violations"] = s.violations;
    j["trivial"] = s.trivial;
    j["example_violation"] = s.example_violation ? word_to_json(*s.example_violation) : Json();
    return j;
}

using Action = std::function<Outcome()>;

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Unavoidable regularities in bounded words and multicollision attacks", "qbound"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Common common;
    Action action;
    std::string command;

    const auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
        CLI::App* sub = parent->add_subcommand(name, help);
        sub->add_option("--format", common.format, "Report format")
            ->check(CLI::IsMember({"json"}))
            ->capture_default_str();
        sub->add_option("--seed", common.seed, std::string("Seed (falls back to ") + kSeedEnv + ")");
        return sub;
    };
    const auto bind = [&](CLI::App* sub, std::string name, Action a) {
        sub->callback([&, name = std::move(name), a = std::move(a)] {
            command = name;
            action = a;
        });
    };

    // classics -----------------------------------------------------------
    CLI::App* classics = app.add_subcommand("classics", "Arithmetic cadences and n-divisions");
    classics->require_subcommand(1);

    std::string input = "-";
    std::size_t cad_s = 0;
    CLI::App* cadence = leaf(classics, "cadence", "First arithmetic cadence of a given order");
    cadence->add_option("--input", input, "Word file ('-' for stdin)")->capture_default_str();
    cadence->add_option("--s", cad_s, "Cadence order")->required()->check(CLI::PositiveNumber);
    bind(cadence, "classics cadence", [&] {
        Outcome o;
        o.config = {{"input", input}, {"s", cad_s}};
        Json results = Json::array();
        std::size_t found = 0;
        for (const Word& w : load_words(input, in)) {
            const auto c = find_arithmetic_cadence(w, cad_s);
            Json r = {{"found", c.has_value()}};
            if (c) {
                ++found;
                r.update(cadence_to_json(*c));
            }
            results.push_back(std::move(r));
        }
        o.result = {{"words", results}};
        o.summary = std::to_string(found) + "/" + std::to_string(results.size()) +
                    " words have an arithmetic cadence of order " + std::to_string(cad_s);
        return o;
    });

    std::size_t ndiv_n = 2;
    std::vector<Symbol> ndiv_order;
    CLI::App* ndiv = leaf(classics, "ndiv", "n-division of each word");
    ndiv->add_option("--input", input, "Word file ('-' for stdin)")->capture_default_str();
    ndiv->add_option("--n", ndiv_n, "Number of middle factors")->required();
    ndiv->add_option("--order", ndiv_order, "Symbols from smallest to largest (default numeric)");
    bind(ndiv, "classics ndiv", [&] {
        if (ndiv_n < 2) {
            throw UsageError("--n must be at least 2");
        }
        Outcome o;
        o.config = {{"input", input}, {"n", ndiv_n}, {"order", ndiv_order}};
        const SymbolOrder order = ndiv_order.empty() ? SymbolOrder{} : ranked_order(ndiv_order);
        Json results = Json::array();
        std::size_t found = 0;
        for (const Word& w : load_words(input, in)) {
            const auto d = find_n_division(w, ndiv_n, order);
            Json r = {{"found", d.has_value()}};
            if (d) {
                ++found;
                r.update(n_division_to_json(*d));
            }
            results.push_back(std::move(r));
        }
        o.result = {{"words", results}};
        o.summary = std::to_string(found) + "/" + std::to_string(results.size()) +
                    " words are " + std::to_string(ndiv_n) + "-divided";
        return o;
    });

    // regularity ---------------------------------------------------------
    CLI::App* regularity = app.add_subcommand("regularity", "Structure certificates and N(m,q)");
    regularity->require_subcommand(1);

    std::size_t reg_m = 0;
    std::size_t reg_q = 0;
    std::string reg_mode = "exhaustive";
    CLI::App* find = leaf(regularity, "find", "Search each word for a structure certificate");
    find->add_option("--input", input, "Word file ('-' for stdin)")->capture_default_str();
    find->add_option("--m", reg_m, "Subalphabet size")->required()->check(CLI::PositiveNumber);
    find->add_option("--q", reg_q, "Occurrence bound")->required()->check(CLI::PositiveNumber);
    find->add_option("--mode", reg_mode, "Search mode")
        ->check(CLI::IsMember({"exhaustive", "greedy"}))
        ->capture_default_str();
    bind(find, "regularity find", [&] {
        Outcome o;
        o.config = {{"input", input}, {"m", reg_m}, {"q", reg_q}, {"mode", reg_mode}};
        const SearchMode mode = reg_mode == "greedy" ? SearchMode::Greedy : SearchMode::Exhaustive;
        Json results = Json::array();
        std::size_t found = 0;
        for (const Word& w : load_words(input, in)) {
            const SearchOutcome s = find_structure(w, reg_m, reg_q, mode);
            Json r = {{"found", s.certificate.has_value()}, {"exhaustive", s.exhaustive}};
            r["certificate"] = s.certificate ? structure_to_json(*s.certificate) : Json();
            r["nodes"] = s.nodes;
            found += s.certificate ? 1 : 0;
            results.push_back(std::move(r));
        }
        o.result = {{"words", results}};
        o.summary = std::to_string(found) + "/" + std::to_string(results.size()) +
                    " words carry a certificate";
        return o;
    });

    std::string witness_out;
    CLI::App* witness = leaf(regularity, "witness", "Word over m(m-1) letters without a certificate");
    witness->add_option("--m", reg_m, "Subalphabet size (>= 2)")->required();
    witness->add_option("--output", witness_out, "Also write the word file here");
    bind(witness, "regularity witness", [&] {
        if (reg_m < 2) {
            throw UsageError("--m must be at least 2");
        }
        Outcome o;
        o.config = {{"m", reg_m}, {"output", witness_out}};
        const Word w = remark5_witness(reg_m);
        const WordStats stats = word_stats(w);
        o.result = {{"word", word_to_json(w)},
                    {"text", format_word(w)},
                    {"length", w.size()},
                    {"alphabet_size", stats.alphabet.size()},
                    {"max_count", stats.max_count}};
        if (!witness_out.empty()) {
            write_file(witness_out, format_word(w) + "\n");
        }
        o.summary = "witness of length " + std::to_string(w.size()) + " over " +
                    std::to_string(stats.alphabet.size()) + " symbols";
        return o;
    });

    std::size_t reg_cap = 6;
    CLI::App* compute_n = leaf(regularity, "compute-n", "Exact N(m,q) by enumeration");
    compute_n->add_option("--m", reg_m, "Subalphabet size")->required()->check(CLI::PositiveNumber);
    compute_n->add_option("--q", reg_q, "Occurrence bound")->required()->check(CLI::PositiveNumber);
    compute_n->add_option("--cap", reg_cap, "Largest alphabet size enumerated")
        ->capture_default_str();
    bind(compute_n, "regularity compute-n", [&] {
        Outcome o;
        o.config = {{"m", reg_m}, {"q", reg_q}, {"cap", reg_cap}};
        const ThresholdReport t = compute_N(reg_m, reg_q, reg_cap);
        o.result["N"] = t.N ? Json(*t.N) : Json();
        o.result["exhaustive"] = t.exhaustive;
        o.result["cap_reached"] = !t.N.has_value();
        const auto known = known_threshold(reg_m, reg_q);
        o.result["known"] = known ? Json(*known) : Json();
        Json sizes = Json::array();
        for (const auto& s : t.sizes) {
            sizes.push_back(size_report_json(s));
        }
        o.result["sizes"] = std::move(sizes);
        o.summary = t.N ? "N(" + std::to_string(reg_m) + "," + std::to_string(reg_q) +
                              ") = " + std::to_string(*t.N)
                        : "no answer up to alphabet size " + std::to_string(reg_cap) +
                              " (partial report)";
        return o;
    });

    // nesting ------------------------------------------------------------
    CLI::App* nesting = app.add_subcommand("nesting", "Nested block structure for the attack");
    nesting->require_subcommand(1);

    std::size_t nest_n = 0;
    std::size_t nest_k = 0;
    std::size_t nest_q = 0;
    bool nest_force = false;
    CLI::App* attack_structure = leaf(nesting, "attack-structure", "Attack certificate per word");
    attack_structure->add_option("--input", input, "Word file ('-' for stdin)")
        ->capture_default_str();
    attack_structure->add_option("--n", nest_n, "Hash length n")->required()->check(CLI::PositiveNumber);
    attack_structure->add_option("--k", nest_k, "Collision exponent k")->required()->check(CLI::PositiveNumber);
    attack_structure->add_option("--q", nest_q, "Occurrence bound")->required()->check(CLI::PositiveNumber);
    attack_structure->add_flag("--below-threshold", nest_force,
                               "Search even when the alphabet is below the guaranteed size");
    bind(attack_structure, "nesting attack-structure", [&] {
        Outcome o;
        o.config = {{"input", input},
                    {"n", nest_n},
                    {"k", nest_k},
                    {"q", nest_q},
                    {"below_threshold", nest_force}};
        AttackStructureOptions opts;
        opts.require_threshold = !nest_force;
        Json results = Json::array();
        std::size_t found = 0;
        for (const Word& w : load_words(input, in)) {
            const AttackCertificate c = find_attack_structure(w, nest_n, nest_k, nest_q, opts);
            Json r = attack_cert_to_json(c);
            r["verified"] = verify_attack_structure(w, nest_n, nest_k, c);
            if (!r["verified"].get<bool>()) {
                o.code = kVerifyFailed;
            }
            ++found;
            results.push_back(std::move(r));
        }
        const auto threshold = attack_alphabet_threshold(nest_n, nest_k, nest_q);
        o.result = {{"threshold", threshold ? Json(*threshold) : Json()}, {"words", results}};
        o.summary = std::to_string(found) + " attack certificate(s)";
        return o;
    });

    // hashsim ------------------------------------------------------------
    CLI::App* hashsim = app.add_subcommand("hashsim", "Simulated compression function");
    hashsim->require_subcommand(1);

    unsigned hs_n = 16;
    unsigned hs_m = 64;
    std::size_t hs_k = 2;
    std::size_t trials = 1;
    CLI::App* birthday = leaf(hashsim, "birthday", "k-collisions of f(h, .) by table search");
    birthday->add_option("--n", hs_n, "Hash length in bits")->capture_default_str();
    birthday->add_option("--m", hs_m, "Block length in bits")->capture_default_str();
    birthday->add_option("--k", hs_k, "Collision size")->capture_default_str();
    birthday->add_option("--trials", trials, "Independent trials")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bind(birthday, "hashsim birthday", [&] {
        check_widths(hs_n, hs_m);
        if (hs_k < 2) {
            throw UsageError("--k must be at least 2");
        }
        Outcome o;
        o.config = {{"n", hs_n}, {"m", hs_m}, {"k", hs_k}, {"trials", trials}};
        const std::uint64_t seed = resolve_seed(common, o.config);
        Json list = Json::array();
        std::vector<std::uint64_t> queries;
        for (std::size_t t = 0; t < trials; ++t) {
            const TrialSeeds s = trial_seeds(seed, t);
            CompressionOracle oracle(hs_n, hs_m, s.oracle);
            BlockSampler sampler(hs_m, s.sampler);
            const HashValue h{static_cast<std::uint32_t>(s.h0 & oracle.hash_mask())};
            const BirthdayResult r = birthday_search(oracle, h, hs_k, sampler);
            Json blocks = Json::array();
            for (Block b : r.blocks) {
                blocks.push_back(b.value);
            }
            list.push_back({{"trial", t},
                            {"oracle_seed", s.oracle},
                            {"h0", h.value},
                            {"queries", r.queries},
                            {"digest", r.digest.value},
                            {"blocks", blocks}});
            queries.push_back(r.queries);
        }
        o.result = {{"median_queries", median(queries)},
                    {"mean_queries", mean(queries)},
                    {"trials", list}};
        o.summary = "median " + std::to_string(median(queries)) + " queries over " +
                    std::to_string(trials) + " trial(s)";
        return o;
    });

    // attack -------------------------------------------------------------
    CLI::App* attack = app.add_subcommand("attack", "Multicollision attacks");
    attack->require_subcommand(1);

    unsigned at_n = 16;
    unsigned at_m = 64;
    std::size_t at_r = 1;
    std::size_t at_q = 2;
    double a_tilde = kDefaultATilde;
    std::string strategy = "table";
    std::string save_path;
    std::uint64_t verify_cap = kDefaultExpansionCap;
    const auto attack_options = [&](CLI::App* sub) {
        sub->add_option("--n", at_n, "Hash length in bits")->capture_default_str();
        sub->add_option("--m", at_m, "Block length in bits")->capture_default_str();
        sub->add_option("--r", at_r, "Collision exponent (2^r messages)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--trials", trials, "Independent trials")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--a-tilde", a_tilde, "Constant in the query bound")->capture_default_str();
        sub->add_option("--strategy", strategy, "Block-pair collision search")
            ->check(CLI::IsMember({"table", "rho"}))
            ->capture_default_str();
        sub->add_option("--verify-cap", verify_cap, "Largest expansion hashed in full")
            ->capture_default_str();
        sub->add_option("--save", save_path, "Write the first trial's multicollision here");
    };

    const auto run_trials = [&](Outcome& o, const std::string& schedule_name,
                                const std::function<AttackOutcome(CompressionOracle&,
                                                                  const AttackOptions&)>& body) {
        const std::uint64_t seed = resolve_seed(common, o.config);
        Json list = Json::array();
        std::vector<std::uint64_t> queries;
        bool all_ok = true;
        for (std::size_t t = 0; t < trials; ++t) {
            const TrialSeeds s = trial_seeds(seed, t);
            CompressionOracle oracle(at_n, at_m, s.oracle);
            AttackOptions opts;
            opts.h0 = HashValue{static_cast<std::uint32_t>(s.h0 & oracle.hash_mask())};
            opts.seed = s.sampler;
            opts.strategy = parse_collision_strategy(strategy);
            opts.a_tilde = a_tilde;
            opts.verify_cap = verify_cap;
            const AttackOutcome a = body(oracle, opts);
            Json r = report_to_json(a.report);
            r["trial"] = t;
            r["oracle_seed"] = s.oracle;
            r["h0"] = opts.h0.value;
            r["digest"] = a.collision.digest.value;
            r["expansion_size"] = a.collision.expansion_size();
            if (a.certificate) {
                r["certificate"] = attack_cert_to_json(*a.certificate);
            }
            all_ok = all_ok && a.report.verify_ok;
            queries.push_back(a.report.attack_queries);
            list.push_back(std::move(r));
            if (t == 0 && !save_path.empty()) {
                const CollisionRecord rec{at_n, at_m, s.oracle, opts.h0, schedule_name, a.collision};
                write_file(save_path, collision_to_json(rec).dump(2) + "\n");
            }
        }
        o.result = {{"all_verified", all_ok},
                    {"mean_queries", mean(queries)},
                    {"median_queries", median(queries)},
                    {"trials", list}};
        o.code = all_ok ? kOk : kVerifyFailed;
        o.summary = std::to_string(trials) + " trial(s), mean " + std::to_string(mean(queries)) +
                    " queries, " + (all_ok ? "all verified" : "VERIFICATION FAILED");
    };

    CLI::App* joux = leaf(attack, "joux", "Joux 2^r-collision on the iterated hash");
    attack_options(joux);
    bind(joux, "attack joux", [&] {
        check_widths(at_n, at_m);
        Outcome o;
        o.config = {{"n", at_n},       {"m", at_m},         {"r", at_r},
                    {"trials", trials}, {"a_tilde", a_tilde}, {"strategy", strategy},
                    {"verify_cap", verify_cap}};
        run_trials(o, "identity", [&](CompressionOracle& oracle, const AttackOptions& opts) {
            return joux_attack(oracle, at_r, opts);
        });
        return o;
    });

    std::string schedule_name = "mirror";
    std::string schedule_file;
    std::optional<std::size_t> length;
    CLI::App* gihf = leaf(attack, "gihf", "Level-wise attack on a q-bounded generalized hash");
    attack_options(gihf);
    gihf->add_option("--q", at_q, "Occurrence bound of the schedule")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    gihf->add_option("--schedule", schedule_name, "Schedule family")
        ->check(CLI::IsMember({"identity", "mirror", "file"}))
        ->capture_default_str();
    gihf->add_option("--schedule-file", schedule_file, "Word file: line l is the l-th word");
    gihf->add_option("--length", length, "Message length in blocks (default: threshold)");
    bind(gihf, "attack gihf", [&] {
        check_widths(at_n, at_m);
        const Schedule sched = schedule_by_name(schedule_name, schedule_file, in);
        if (sched.q_bound() > at_q) {
            throw UsageError("schedule '" + sched.name() + "' is " + std::to_string(sched.q_bound()) +
                             "-bounded, above --q " + std::to_string(at_q));
        }
        Outcome o;
        o.config = {{"n", at_n},
                    {"m", at_m},
                    {"q", at_q},
                    {"r", at_r},
                    {"schedule", schedule_name},
                    {"schedule_file", schedule_file},
                    {"length", length ? Json(*length) : Json()},
                    {"trials", trials},
                    {"a_tilde", a_tilde},
                    {"strategy", strategy},
                    {"verify_cap", verify_cap}};
        o.config["bound"] = bound_to_json(complexity_bound(at_n, at_q, at_r, a_tilde));
        run_trials(o, schedule_name, [&](CompressionOracle& oracle, AttackOptions opts) {
            opts.length = length;
            return generalized_attack(oracle, sched, at_q, at_n, at_r, opts);
        });
        return o;
    });

    std::size_t bound_q = 2;
    CLI::App* bound = leaf(attack, "bound", "Query bound for (n, q, r) without running");
    bound->add_option("--n", at_n, "Hash length in bits")->capture_default_str();
    bound->add_option("--q", bound_q, "Occurrence bound")->check(CLI::PositiveNumber)->capture_default_str();
    bound->add_option("--r", at_r, "Collision exponent")->check(CLI::PositiveNumber)->capture_default_str();
    bound->add_option("--a-tilde", a_tilde, "Constant in the query bound")->capture_default_str();
    bind(bound, "attack bound", [&] {
        Outcome o;
        o.config = {{"n", at_n}, {"q", bound_q}, {"r", at_r}, {"a_tilde", a_tilde}};
        o.result = bound_to_json(complexity_bound(at_n, bound_q, at_r, a_tilde));
        o.result["threshold_length"] = attack_threshold_length(at_n, at_r, bound_q);
        o.summary = "log2 bound " + std::to_string(o.result["log2_queries"].get<double>());
        return o;
    });

    // verify -------------------------------------------------------------
    CLI::App* verify = app.add_subcommand("verify", "Re-check certificates and collisions");
    verify->require_subcommand(1);

    std::string cert_path;
    std::string cert_kind = "structure";
    std::optional<std::size_t> ver_m;
    std::optional<std::size_t> ver_n;
    std::optional<std::size_t> ver_k;
    std::vector<std::size_t> ver_d;
    CLI::App* cert = leaf(verify, "cert", "Check a certificate against a word file");
    cert->add_option("--input", input, "Word file ('-' for stdin)")->capture_default_str();
    cert->add_option("--cert", cert_path, "Certificate JSON")->required();
    cert->add_option("--kind", cert_kind, "Certificate kind")
        ->check(CLI::IsMember({"structure", "attack", "nesting"}))
        ->capture_default_str();
    cert->add_option("--m", ver_m, "Structure size (default |A|)");
    cert->add_option("--n", ver_n, "Attack n (default from certificate)");
    cert->add_option("--k", ver_k, "Attack k (default from certificate)");
    cert->add_option("--d", ver_d, "Nesting block counts d_0 ... d_r");
    bind(cert, "verify cert", [&] {
        Outcome o;
        o.config = {{"input", input}, {"cert", cert_path}, {"kind", cert_kind}};
        const Json cj = load_json(cert_path);
        const std::vector<Word> words = load_words(input, in);
        bool valid = false;
        if (cert_kind == "nesting") {
            if (ver_d.empty()) {
                throw UsageError("--kind nesting needs --d");
            }
            o.config["d"] = ver_d;
            valid = verify_nesting(words, ver_d, nesting_from_json(cj));
        } else {
            if (words.size() != 1) {
                throw UsageError("--kind " + cert_kind + " needs exactly one word in the input");
            }
            if (cert_kind == "structure") {
                const StructureCertificate c = structure_from_json(cj);
                const std::size_t m = ver_m.value_or(c.A.size());
                o.config["m"] = m;
                valid = verify_structure(words.front(), c, m);
            } else {
                const AttackCertificate c = attack_cert_from_json(cj);
                const std::size_t n = ver_n.value_or(c.n);
                const std::size_t k = ver_k.value_or(c.k);
                o.config["n"] = n;
                o.config["k"] = k;
                valid = verify_attack_structure(words.front(), n, k, c);
            }
        }
        o.result = {{"valid", valid}};
        o.code = valid ? kOk : kVerifyFailed;
        o.summary = cert_kind + " certificate " + (valid ? "valid" : "INVALID");
        return o;
    });

    std::string collision_path;
    CLI::App* collision = leaf(verify, "collision", "Re-hash every message of a multicollision");
    collision->add_option("--collision", collision_path, "Multicollision JSON")->required();
    collision->add_option("--schedule-file", schedule_file, "Word file for a 'file' schedule");
    collision->add_option("--verify-cap", verify_cap, "Largest expansion hashed in full")
        ->capture_default_str();
    bind(collision, "verify collision", [&] {
        Outcome o;
        o.config = {{"collision", collision_path},
                    {"schedule_file", schedule_file},
                    {"verify_cap", verify_cap}};
        const CollisionRecord rec = collision_from_json(load_json(collision_path));
        check_widths(rec.n, rec.m);
        const Schedule sched = schedule_by_name(rec.schedule, schedule_file, in);
        const std::uint64_t sample_seed = common.seed.value_or(0);
        o.config["sample_seed"] = sample_seed;
        const MulticollisionCheck c = verify_multicollision(
            CompressionOracle(rec.n, rec.m, rec.oracle_seed), sched, rec.h0, rec.set, verify_cap,
            sample_seed);
        o.result = {{"ok", c.ok},
                    {"well_formed", c.well_formed},
                    {"digests_equal", c.digests_equal},
                    {"distinct", c.distinct},
                    {"sampled", c.sampled},
                    {"messages_checked", c.messages_checked},
                    {"expansion_size", rec.set.expansion_size()}};
        o.code = c.ok ? kOk : kVerifyFailed;
        o.summary = std::string("multicollision ") + (c.ok ? "verified" : "REJECTED") + " (" +
                    std::to_string(c.messages_checked) + " messages hashed)";
        return o;
    });

    // --------------------------------------------------------------------
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    Json report;
    report["tool"] = "qbound";
    report["version"] = kVersion;
    report["command"] = command;
    const auto start = std::chrono::steady_clock::now();
    int code = kOk;
    try {
        Outcome o = action();
        report["config"] = std::move(o.config);
        report["result"] = std::move(o.result);
        code = o.code;
        err << command << ": " << o.summary << "\n";
    } catch (const UsageError& e) {
        err << command << ": " << e.what() << "\n";
        report["error"] = {{"type", "usage"}, {"message", e.what()}};
        code = kUsage;
    } catch (const InvalidInput& e) {
        err << command << ": invalid input: " << e.what() << "\n";
        report["error"] = {{"type", "invalid_input"}, {"message", e.what()}};
        code = kUsage;
    } catch (const ThresholdNotMet& e) {
        err << command << ": " << e.what() << "\n";
        report["error"] = {{"type", "threshold_not_met"},
                           {"message", e.what()},
                           {"required_length", e.required_length()}};
        code = kRuntimeError;
    } catch (const CapExceeded& e) {
        err << command << ": " << e.what() << "\n";
        report["error"] = {{"type", "cap_exceeded"}, {"message", e.what()}};
        code = kRuntimeError;
    } catch (const std::exception& e) {
        err << command << ": error: " << e.what() << "\n";
        report["error"] = {{"type", "runtime"}, {"message", e.what()}};
        code = kRuntimeError;
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    report["exit_code"] = code;
    report["timing"] = {{"seconds", elapsed.count()}};
    out << report.dump(2) << "\n";
    return code;
}

}  // namespace qbound::cli
