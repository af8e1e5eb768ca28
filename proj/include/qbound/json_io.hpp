// json_io.hpp -- JSON encodings of certificates, multicollision sets and
// attack reports. Decoders validate shape and throw InvalidInput.

#pragma once

#include "qbound/attacks.hpp"
#include "qbound/classics.hpp"
#include "qbound/nesting.hpp"
#include "qbound/regularity.hpp"
#include "qbound/words.hpp"

#include <json.hpp>

#include <string>

namespace qbound {

using Json = nlohmann::ordered_json;

[[nodiscard]] Json word_to_json(const Word& w);
[[nodiscard]] Word word_from_json(const Json& j);
[[nodiscard]] Json alphabet_to_json(const Alphabet& a);
/// Rejects duplicate symbols instead of silently merging them.
[[nodiscard]] Alphabet alphabet_from_json(const Json& j);

/// {"A": [...], "p": p, "splits": [...]}
[[nodiscard]] Json structure_to_json(const StructureCertificate& c);
[[nodiscard]] StructureCertificate structure_from_json(const Json& j);

/// {"B": [...], "p": p, "splits": [...], "n": n, "k": k}
[[nodiscard]] Json attack_cert_to_json(const AttackCertificate& c);
[[nodiscard]] AttackCertificate attack_cert_from_json(const Json& j);

/// {"B", "claim", "levels": [{"blocks", "upper", "lower", "match"}], "tail"}
[[nodiscard]] Json nesting_to_json(const NestingCertificate& c);
[[nodiscard]] NestingCertificate nesting_from_json(const Json& j);

[[nodiscard]] Json cadence_to_json(const Cadence& c);
[[nodiscard]] Json n_division_to_json(const NDivision& d);

/// Everything needed to re-check a multicollision without the attacker:
/// oracle parameters, h0, the schedule name and the product-form set.
struct CollisionRecord {
    unsigned n = 0;
    unsigned m = 0;
    std::uint64_t oracle_seed = 0;
    HashValue h0;
    std::string schedule;
    MulticollisionSet set;
};

[[nodiscard]] Json collision_to_json(const CollisionRecord& rec);
[[nodiscard]] CollisionRecord collision_from_json(const Json& j);

[[nodiscard]] Json report_to_json(const AttackReport& r);
[[nodiscard]] Json bound_to_json(const ComplexityBound& b);

}  // namespace qbound
