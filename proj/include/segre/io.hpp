#pragma once

// JSON, CSV and DOT encodings of the engine's inputs and results. Field order
// is fixed so identical runs produce identical bytes.

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "segre/bounds.hpp"
#include "segre/reduction.hpp"
#include "segre/safety.hpp"
#include "segre/secants.hpp"
#include "segre/statement.hpp"
#include "segre/tangent.hpp"

namespace segre::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* tool_version = "0.1.0";

class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Inline JSON text, or "@path" to read it from a file.
Json read_input(const std::string& arg);

/// {"shape": [...], "s": n, "a": [...]}; "a" defaults to zeros.
Statement parse_statement(const Json& j);
/// [n_1, ..., n_k] or {"shape": [...]}.
SegreShape parse_shape(const Json& j);
/// {"factor", "left_dim", "left_s", "left_a"}; the right side is the complement.
Split parse_split(const Json& j, const Statement& st);

Json to_json(const Statement& st);
Json to_json(const SegreShape& shape);
Json to_json(const VerificationResult& r);
Json to_json(const Split& sp);
Json to_json(const EligibilityReport& rep);
/// Nested {statement, room, abundance, split, children}; leaf verdicts are
/// attached when a verification is given.
Json tree_to_json(const ReductionTree& tree, const TreeVerification* verification = nullptr);
Json to_json(const ReductionOutcome& out);
Json to_json(const SafetyRegion& region);
Json to_json(const ConjectureReport& rep);
Json to_json(const BoundReport& rep);
Json to_json(const SecantScan& scan);

/// Integers as numbers, other rationals as "p/q" strings.
Json rational_json(const Rational& q);

/// One node per statement, labelled "T(n;s;a) | room | abundance | verdict".
std::string to_dot(const ReductionTree& tree, const TreeVerification* verification = nullptr);

std::string result_csv(const std::vector<VerificationResult>& results);
std::string secants_csv(const SecantScan& scan);
/// shape,o_plus,o_minus,source
std::string safety_csv(const std::vector<SafetyRegion>& regions);
std::string bounds_csv(const std::vector<BoundReport>& reports);

}  // namespace segre::io
