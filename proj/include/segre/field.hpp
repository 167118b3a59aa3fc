#pragma once

// Dense linear algebra over prime fields GF(p), 2^30 <= p < 2^31.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace segre::ff {

using Residue = std::uint32_t;

/// Deterministic Miller-Rabin; exact for all 32-bit inputs.
bool is_prime(std::uint64_t n) noexcept;

class PrimeModulus {
public:
    /// Throws std::invalid_argument unless p is a prime in [2^30, 2^31).
    explicit PrimeModulus(std::uint32_t p);

    std::uint32_t value() const noexcept { return p_; }

    Residue reduce(std::uint64_t x) const noexcept { return static_cast<Residue>(x % p_); }
    Residue add(Residue x, Residue y) const noexcept {
        const std::uint32_t s = x + y;  // < 2^32
        return s >= p_ ? s - p_ : s;
    }
    Residue sub(Residue x, Residue y) const noexcept { return x >= y ? x - y : x + (p_ - y); }
    Residue mul(Residue x, Residue y) const noexcept {
        return static_cast<Residue>(static_cast<std::uint64_t>(x) * y % p_);
    }
    Residue pow(Residue x, std::uint64_t e) const noexcept;
    /// x must be nonzero.
    Residue inverse(Residue x) const noexcept { return pow(x, p_ - 2); }

    bool operator==(const PrimeModulus&) const = default;

private:
    std::uint32_t p_;
};

/// Deterministic in seed; stable across platforms.
PrimeModulus random_prime(std::uint64_t seed);

/// Entry count above which matrices are refused unless the cap is raised.
inline constexpr std::uint64_t default_max_entries = std::uint64_t{1} << 30;

class FieldMatrix {
public:
    FieldMatrix() = default;
    FieldMatrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Residue& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    Residue operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<Residue> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const Residue> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    /// Appends a row; its length must equal cols().
    void push_row(std::span<const Residue> values);

    std::span<const Residue> entries() const noexcept { return data_; }

    FieldMatrix transposed() const;

    bool operator==(const FieldMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Residue> data_;
};

struct RankProfile {
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_columns;
};

/// Row-echelon reduction in place; m is left in echelon form.
RankProfile rank_profile(FieldMatrix& m, const PrimeModulus& p);
RankProfile rank_profile(FieldMatrix&& m, const PrimeModulus& p);

std::size_t rank(FieldMatrix& m, const PrimeModulus& p);
std::size_t rank(FieldMatrix&& m, const PrimeModulus& p);

}  // namespace segre::ff
