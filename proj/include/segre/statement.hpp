#pragma once

// Arithmetic of Segre shapes and statements T(n; s; a).
//
// All dimensions are affine: the expected dimension of a statement is the
// expected rank of its tangent-span matrix, not the projective dimension.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace segre {

using Count = std::int64_t;

// Checked helpers; throw std::overflow_error instead of wrapping.
Count checked_add(Count x, Count y);
Count checked_mul(Count x, Count y);

/// Factor dimensions n_1..n_k of P^{n_1} x ... x P^{n_k}.
class SegreShape {
public:
    SegreShape() = default;
    explicit SegreShape(std::vector<Count> dims);

    const std::vector<Count>& dims() const noexcept { return dims_; }
    std::size_t factors() const noexcept { return dims_.size(); }
    Count operator[](std::size_t i) const { return dims_.at(i); }

    /// prod (n_i + 1), the dimension of the ambient tensor space.
    Count ambient_product() const;
    /// 1 + sum n_i, the affine dimension of a full tangent space.
    Count tangent_count() const;
    /// sum (n_i + 1), the number of generator rows a full tangent block emits.
    Count tangent_rows() const;

    bool operator==(const SegreShape&) const = default;

private:
    std::vector<Count> dims_;
};

enum class Abundance { Subabundant, Superabundant, Equiabundant };

const char* to_string(Abundance a) noexcept;

/// Equiabundant is compatible with both sides.
bool is_subabundant(Abundance a) noexcept;
bool is_superabundant(Abundance a) noexcept;

class Statement {
public:
    Statement() = default;
    Statement(SegreShape shape, Count s, std::vector<Count> a);
    Statement(std::vector<Count> dims, Count s, std::vector<Count> a);

    const SegreShape& shape() const noexcept { return shape_; }
    const std::vector<Count>& dims() const noexcept { return shape_.dims(); }
    Count s() const noexcept { return s_; }
    const std::vector<Count>& a() const noexcept { return a_; }
    std::size_t factors() const noexcept { return shape_.factors(); }

    /// s (1 + sum n_i) + sum a_i (n_i + 1).
    Count generator_count() const;
    /// s + sum a_i, the number of sampled points.
    Count point_count() const;

    bool operator==(const Statement&) const = default;

private:
    SegreShape shape_;
    Count s_ = 0;
    std::vector<Count> a_;
};

Count expected_dim(const Statement& st);
Count room(const Statement& st);
Abundance abundance(const Statement& st);

/// ceil(prod (n_i+1) / (1 + sum n_i)); exact only when no secant is defective.
Count generic_rank(const SegreShape& shape);

/// Sorts the (n_i, a_i) pairs lexicographically descending.
Statement canonicalize(const Statement& st);

/// Coordinatewise order on (n, s, a). Throws std::invalid_argument on
/// mismatched factor counts.
bool dominates(const Statement& lo, const Statement& hi);

/// "T(1,1,3;2;0,0,0)"
std::string to_string(const Statement& st);
std::string to_string(const SegreShape& shape);
std::ostream& operator<<(std::ostream& os, const Statement& st);

struct StatementHash {
    std::size_t operator()(const Statement& st) const noexcept;
};

}  // namespace segre
