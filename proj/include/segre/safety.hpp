#pragma once

// Safety bounds of a Segre shape. The largest room of a false subabundant
// statement is R+ and the smallest room of a false superabundant one is R-;
// the safety bounds are O+ = R+ + 1 and O- = R- - 1. Every statement whose
// room lies outside (O-, O+) is true.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "segre/statement.hpp"
#include "segre/tangent.hpp"

namespace segre {

enum class BoundStatus {
    Exact,        // the scan closed; the bound is the extreme false room +/- 1
    NoneFound,    // the scan closed without any false statement of this kind
    Horizon,      // the scan stopped at its horizon; the bound is one-sided
    NotComputed,
};

const char* to_string(BoundStatus s) noexcept;

struct Witness {
    Statement statement;
    Count room = 0;
    VerificationResult result;

    bool operator==(const Witness&) const = default;
};

struct ScanResult {
    BoundStatus status = BoundStatus::NotComputed;
    /// R+ (subabundant scan) or R- (superabundant scan). Meaningful only when
    /// witnesses is nonempty.
    Count extreme_room = 0;
    /// False statements found, one representative per canonical form, most
    /// extreme room first.
    std::vector<Witness> witnesses;
    /// Last room level examined (subabundant) or lowest room reached (superabundant).
    Count horizon = 0;
    std::size_t verified = 0;
    std::size_t implied = 0;
    int restarts = 0;
};

struct SafetyConfig {
    /// trials is raised to at least 3 for every verdict feeding a scan.
    VerifyConfig verify;
    unsigned jobs = 1;
    /// Highest room level the subabundant scan may reach (-1 = unlimited).
    Count max_room_level = -1;
    /// Cap on statements examined by the superabundant search (0 = unlimited).
    std::size_t max_super_nodes = 0;
    /// Rounds of fresh-seed re-verification for the extreme witnesses.
    int confirm_rounds = 1;
};

/// All (s, a) with room exactly r over the shape, in lexicographic order of (s, a).
std::vector<Statement> statements_with_room(const SegreShape& shape, Count r);

/// Ascending room levels from 0, skipping statements with a known-true unit
/// successor. Stops after min(n_i)+1 consecutive all-true levels above the
/// largest false room. Throws CapExceeded if a verification exceeds the cap.
ScanResult scan_subabundant(const SegreShape& shape, const SafetyConfig& cfg, const VerifyFn& verify_fn = verify);

/// Seeds with all statements of room in (-(1+sum n_i), 0] and walks upward in
/// the dominance order from the false ones, stopping at true statements.
ScanResult scan_superabundant(const SegreShape& shape, const SafetyConfig& cfg, const VerifyFn& verify_fn = verify);

struct SafetyRegion {
    SegreShape shape;
    /// O+; a lower bound when plus_status is Horizon, 0 when NoneFound.
    Count o_plus = 0;
    /// O-; an upper bound when minus_status is Horizon, 0 when NoneFound.
    Count o_minus = 0;
    ScanResult sub;
    ScanResult super;
    /// False witnesses are Monte-Carlo evidence; true verdicts are proofs.
    bool monte_carlo = true;
};

SafetyRegion safety_region(const SegreShape& shape, const SafetyConfig& cfg, const VerifyFn& verify_fn = verify,
                           bool o_plus_only = false);

struct ConjectureReport {
    SegreShape sorted_shape;  // ascending
    bool bounds_exact = false;
    bool symmetric = false;           // O- == -O+
    Count formula_o_plus = 0;         // (n_1 + ... + n_{k-1} - 1) n_k
    bool formula_holds = false;
    /// T(n; n_k; 0, ..., 0, a_k) with a_k = prod_{i<k}(n_i+1) - (n_k+1), when a_k >= 0.
    std::optional<Statement> witness;
    std::optional<VerificationResult> witness_result;
    Count witness_room = 0;
    bool witness_false = false;
    /// Compared with R- (the smallest false superabundant room).
    bool witness_room_matches = false;
};

ConjectureReport conjecture_check(const SafetyRegion& region, const SafetyConfig& cfg,
                                  const VerifyFn& verify_fn = verify);

}  // namespace segre
