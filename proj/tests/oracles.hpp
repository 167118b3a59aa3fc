#pragma once

// Test-only reference implementations, independent of the library's paths.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "segre/field.hpp"
#include "segre/statement.hpp"
#include "segre/tangent.hpp"

namespace oracle {

using BigInt = boost::multiprecision::cpp_int;
using IntMatrix = std::vector<std::vector<BigInt>>;

/// Exact rank over Q by fraction-free (Bareiss) elimination.
std::size_t rational_rank(IntMatrix m);

/// Integer generator matrix of L for st with point coordinates drawn
/// uniformly from [-range, range] (all-zero vectors rejected). Entries are
/// computed entry-by-entry from the multi-index, not by Kronecker products.
IntMatrix integer_L(const segre::Statement& st, std::mt19937_64& rng, int range = 5);

/// Reduces an integer matrix mod p.
segre::ff::FieldMatrix reduce_mod(const IntMatrix& m, const segre::ff::PrimeModulus& p);

/// Room by the defining formula, in big integers.
BigInt room(const segre::Statement& st);

}  // namespace oracle

namespace oracle {

struct SplitScan {
    std::size_t count = 0;          // legal splits enumerated
    BigInt best_scaled;             // min |R'(n_j+1) - (n'_j+1) R|
    std::int64_t best_left_s = 0;   // lexicographically first minimizer
    std::vector<std::int64_t> best_left_a;  // a'_i for i != j, in factor order
};

/// Enumerates every legal split of factor j with n'_j = left_dim, computing
/// each child directly from the reduction arithmetic and its room from the
/// defining formula.
SplitScan scan_splits(const segre::Statement& st, std::size_t j, std::int64_t left_dim);

}  // namespace oracle

namespace oracle {

/// Max false subabundant room and min false superabundant room over every
/// statement of the shape (no pruning). Statements with s + sum a >= prod
/// are skipped as trivially true. Empty when no false statement exists.
struct ExhaustiveSafety {
    std::optional<std::int64_t> max_false_sub;
    std::optional<std::int64_t> min_false_super;
    std::size_t verified = 0;
};

ExhaustiveSafety exhaustive_safety(const segre::SegreShape& shape, const segre::VerifyConfig& cfg);

}  // namespace oracle
