#pragma once

// Closed-form bounds: the false witness and the lower bound it gives for O+,
// the O+ band of (P^1)^k, the transfer of safety bounds along halvings, and
// the non-defectivity thresholds built from Delta_k and Theta_k.

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "segre/statement.hpp"

namespace segre {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class BoundKind {
    WitnessLowerBound,     // O+ >= n_k (n_1 + ... + n_{k-1} - 1)
    BinaryCubeBand,        // O+ of (P^1)^k lies in {k-2, k-1}
    HalvingTransfer,       // bounds for n_i+1 = 2^{d_i} c from those of (P^{c-1})^k
    GeneralThreshold,      // s <= Theta_k prod/(1+sum)
    PowerOfTwoThreshold,   // s <= Delta_k prod/(1+sum) when every n_i+1 is a power of 2
};

const char* to_string(BoundKind k) noexcept;

struct NamedValue {
    std::string name;
    Rational value;

    bool operator==(const NamedValue&) const = default;
};

struct BoundReport {
    SegreShape shape;
    BoundKind kind = BoundKind::WitnessLowerBound;
    std::vector<NamedValue> values;
    /// Hypotheses checked against the shape before the report was built.
    std::vector<std::string> assumptions;
    std::optional<Statement> witness;

    /// Value by name; throws std::out_of_range if absent.
    const Rational& value(const std::string& name) const;
};

/// T(n_1..n_k; 1; 0, ..., 0, a_k) with a_k = prod_{i<k}(n_i+1) - sum_{i<k} n_i over
/// the shape sorted ascending. Its room is n_k(sum_{i<k} n_i - 1) - 1 and it is
/// false whenever k >= 3. Throws std::invalid_argument for k < 2.
Statement witness_statement(const SegreShape& shape);

/// n_k (n_1 + ... + n_{k-1} - 1) over the shape sorted ascending (k >= 2).
Count witness_lower_bound(const SegreShape& shape);

struct Band {
    Count lower = 0;
    Count upper = 0;
    /// Known exact value (k = 3..7).
    std::optional<Count> exact;
};

/// O+ of (P^1)^k. Throws std::invalid_argument for k < 3.
Band binary_cube_band(int k);

struct Transfer {
    int halvings = 0;  // d_1 + ... + d_k
    Count C = 0;       // c(k-1)^2 - k(k-1)/2
    Count o_plus_upper = 0;
    Count o_minus_lower = 0;
};

/// Requires n_i + 1 = 2^{d_i} c for every factor and k >= 3; the error names
/// the first factor that fails.
Transfer halving_transfer(const SegreShape& shape, Count c, Count o_plus_y, Count o_minus_y);

/// Delta_k = 1 - (3k^2 - 5k + 2) / 2^{k+1}. Throws std::invalid_argument for k < 3.
Rational delta(int k);
/// Theta_k = Delta_k / 2^k.
Rational theta(int k);

struct Threshold {
    Count s_max = 0;
    BoundKind kind = BoundKind::GeneralThreshold;
    Rational coefficient;  // Delta_k or Theta_k
};

/// Largest s covered by the non-defectivity threshold. Throws for k < 3.
Threshold nondefectivity_threshold(const SegreShape& shape);

struct TransferInputs {
    Count c = 0;
    Count o_plus_y = 0;
    Count o_minus_y = 0;
};

/// Every report whose hypotheses hold for the shape. The transfer is included
/// only when inputs are given and the divisibility hypothesis holds.
std::vector<BoundReport> bound_reports(const SegreShape& shape, const std::optional<TransferInputs>& transfer = {});

}  // namespace segre
