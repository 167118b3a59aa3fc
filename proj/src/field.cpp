#include "segre/field.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <utility>

namespace segre::ff {

namespace {

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod64(r, b, m);
        b = mulmod64(b, b, m);
        e >>= 1;
    }
    return r;
}

constexpr std::uint32_t kLow = std::uint32_t{1} << 30;
constexpr std::uint32_t kHigh = std::uint32_t{1} << 31;

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // These bases are a deterministic witness set for n < 3.3e24.
    for (std::uint64_t base : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = powmod64(base, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PrimeModulus::PrimeModulus(std::uint32_t p) : p_(p) {
    if (p < kLow || p >= kHigh || !is_prime(p))
        throw std::invalid_argument("segre: modulus must be a prime in [2^30, 2^31)");
}

Residue PrimeModulus::pow(Residue x, std::uint64_t e) const noexcept {
    return static_cast<Residue>(powmod64(x, e, p_));
}

PrimeModulus random_prime(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uint32_t candidate = kLow + static_cast<std::uint32_t>(gen() % kLow);
    candidate |= 1u;
    // 2^31 - 1 is prime, so the walk never leaves the interval.
    while (!is_prime(candidate)) candidate += 2;
    return PrimeModulus(candidate);
}

FieldMatrix::FieldMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

void FieldMatrix::push_row(std::span<const Residue> values) {
    if (values.size() != cols_) throw std::invalid_argument("segre: row length does not match column count");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
}

FieldMatrix FieldMatrix::transposed() const {
    FieldMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

RankProfile rank_profile(FieldMatrix& m, const PrimeModulus& p) {
    RankProfile out;
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    const std::uint64_t mod = p.value();
    std::size_t pivot_row = 0;
    for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
        std::size_t sel = pivot_row;
        while (sel < rows && m(sel, c) == 0) ++sel;
        if (sel == rows) continue;
        if (sel != pivot_row) {
            auto a = m.row(sel);
            auto b = m.row(pivot_row);
            std::swap_ranges(a.begin() + c, a.end(), b.begin() + c);
        }
        auto piv = m.row(pivot_row);
        const Residue inv = p.inverse(piv[c]);
        for (std::size_t r = pivot_row + 1; r < rows; ++r) {
            auto row = m.row(r);
            if (row[c] == 0) continue;
            // row -= (row[c] / piv[c]) * piv
            const std::uint64_t neg = mod - p.mul(row[c], inv);
            row[c] = 0;
            for (std::size_t j = c + 1; j < cols; ++j) {
                if (piv[j] == 0) continue;
                row[j] = static_cast<Residue>((row[j] + neg * piv[j]) % mod);
            }
        }
        out.pivot_columns.push_back(c);
        ++pivot_row;
    }
    out.rank = pivot_row;
    return out;
}

RankProfile rank_profile(FieldMatrix&& m, const PrimeModulus& p) { return rank_profile(m, p); }

std::size_t rank(FieldMatrix& m, const PrimeModulus& p) { return rank_profile(m, p).rank; }
std::size_t rank(FieldMatrix&& m, const PrimeModulus& p) { return rank_profile(m, p).rank; }

}  // namespace segre::ff
