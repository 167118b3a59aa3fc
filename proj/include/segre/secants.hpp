#pragma once

// Secant scans T(n; s; 0, ..., 0) for s = 1 up to the first space-filling s.
// Verification starts at the largest subabundant s and walks down until a
// proof, which then covers every smaller s; the superabundant side walks up
// from the smallest superabundant s in the same way.

#include <optional>
#include <string>
#include <vector>

#include "segre/statement.hpp"
#include "segre/tangent.hpp"

namespace segre {

struct SecantRow {
    Count s = 0;
    Verdict verdict = Verdict::ProbablyFalse;
    Count rank = 0;
    Count expected = 0;
    /// True when the verdict follows from a proven neighbour by monotonicity.
    bool implied = false;
    std::optional<VerificationResult> result;
};

struct SecantScan {
    SegreShape shape;
    Count generic_rank = 0;
    /// Ascending in s. May extend past generic_rank when that s is not proven.
    std::vector<SecantRow> rows;
    /// Set when a verification exceeded the entry cap; rows are then partial.
    std::optional<std::string> cap_error;
    std::size_t verified = 0;

    bool all_proven() const;
};

SecantScan scan_secants(const SegreShape& shape, const VerifyConfig& cfg, const VerifyFn& verify_fn = verify);

}  // namespace segre
