#pragma once

// Monte-Carlo verification of statements via the tangent span
//   L = T_s X + (T_{a_1} X)_1 + ... + (T_{a_k} X)_k
// at random points over GF(p). A rank equal to the expected dimension is a
// proof (rank mod p <= rank over Q <= expected); anything lower is evidence.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "segre/field.hpp"
#include "segre/statement.hpp"

namespace segre {

/// Thrown when an assembly would exceed the configured entry cap.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One point v_1 (x) ... (x) v_k, stored by its factor vectors.
struct SegrePoint {
    std::vector<std::vector<ff::Residue>> vectors;
};

struct PointSample {
    std::vector<SegrePoint> points;
    std::uint64_t seed = 0;
    ff::PrimeModulus prime;
};

struct VerifyConfig {
    int trials = 3;
    std::uint64_t base_seed = 0;
    std::uint64_t max_entries = ff::default_max_entries;
};

enum class Verdict { ProvenTrue, ProbablyFalse };

const char* to_string(Verdict v) noexcept;

struct VerificationResult {
    Statement statement;
    Verdict verdict = Verdict::ProbablyFalse;
    Count best_rank = 0;
    Count expected = 0;
    int trials_run = 0;
    std::vector<std::uint32_t> primes_used;
    std::vector<std::uint64_t> seeds_used;

    Count deficiency() const noexcept { return expected - best_rank; }
    bool proven() const noexcept { return verdict == Verdict::ProvenTrue; }

    bool operator==(const VerificationResult&) const = default;
};

/// Seed of trial `index` derived from a base seed (splitmix64 step).
std::uint64_t trial_seed(std::uint64_t base_seed, int index) noexcept;

PointSample sample_points(const SegreShape& shape, Count count, const ff::PrimeModulus& p, std::uint64_t seed);

/// Sum (n_i+1) rows spanning T_p X, ordered by factor then basis index.
ff::FieldMatrix tangent_rows(const SegrePoint& point, const SegreShape& shape, const ff::PrimeModulus& p);

/// n_j+1 rows v_1 .. e_t .. v_k spanning (T_p X)_j. Throws std::out_of_range for a bad j.
ff::FieldMatrix partial_tangent_rows(const SegrePoint& point, const SegreShape& shape, std::size_t j,
                                     const ff::PrimeModulus& p);

/// Row count of the L-matrix for st: s * sum(n_i+1) + sum a_i (n_i+1).
Count assembly_rows(const Statement& st);

/// Points are drawn in a fixed order: s full points, then a_1 points for
/// factor 1, and so on.
ff::FieldMatrix assemble_L(const Statement& st, const ff::PrimeModulus& p, std::uint64_t seed,
                           std::uint64_t max_entries = ff::default_max_entries);

VerificationResult verify(const Statement& st, const VerifyConfig& cfg = {});

/// Pluggable verification (the CLI layers its cache on top of verify).
using VerifyFn = std::function<VerificationResult(const Statement&, const VerifyConfig&)>;

}  // namespace segre
