#include "segre/statement.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <ostream>
#include <sstream>
#include <utility>

namespace segre {

Count checked_add(Count x, Count y) {
    Count out;
    if (__builtin_add_overflow(x, y, &out)) throw std::overflow_error("segre: integer overflow in addition");
    return out;
}

Count checked_mul(Count x, Count y) {
    Count out;
    if (__builtin_mul_overflow(x, y, &out)) throw std::overflow_error("segre: integer overflow in multiplication");
    return out;
}

SegreShape::SegreShape(std::vector<Count> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw std::invalid_argument("segre: shape needs at least one factor");
    for (Count n : dims_)
        if (n < 0) throw std::invalid_argument("segre: factor dimensions must be nonnegative");
    // Overflow must surface at construction, not at first use.
    (void)ambient_product();
    (void)tangent_rows();
}

Count SegreShape::ambient_product() const {
    Count p = 1;
    for (Count n : dims_) p = checked_mul(p, checked_add(n, 1));
    return p;
}

Count SegreShape::tangent_count() const {
    Count t = 1;
    for (Count n : dims_) t = checked_add(t, n);
    return t;
}

Count SegreShape::tangent_rows() const {
    Count t = 0;
    for (Count n : dims_) t = checked_add(t, checked_add(n, 1));
    return t;
}

const char* to_string(Abundance a) noexcept {
    switch (a) {
        case Abundance::Subabundant: return "Subabundant";
        case Abundance::Superabundant: return "Superabundant";
        case Abundance::Equiabundant: return "Equiabundant";
    }
    return "?";
}

bool is_subabundant(Abundance a) noexcept { return a != Abundance::Superabundant; }
bool is_superabundant(Abundance a) noexcept { return a != Abundance::Subabundant; }

Statement::Statement(SegreShape shape, Count s, std::vector<Count> a)
    : shape_(std::move(shape)), s_(s), a_(std::move(a)) {
    if (a_.size() != shape_.factors())
        throw std::invalid_argument("segre: a-vector length must match the number of factors");
    if (s_ < 0) throw std::invalid_argument("segre: s must be nonnegative");
    for (Count x : a_)
        if (x < 0) throw std::invalid_argument("segre: a-values must be nonnegative");
    (void)generator_count();
    (void)point_count();
}

Statement::Statement(std::vector<Count> dims, Count s, std::vector<Count> a)
    : Statement(SegreShape(std::move(dims)), s, std::move(a)) {}

Count Statement::generator_count() const {
    Count g = checked_mul(s_, shape_.tangent_count());
    for (std::size_t i = 0; i < a_.size(); ++i) g = checked_add(g, checked_mul(a_[i], checked_add(shape_[i], 1)));
    return g;
}

Count Statement::point_count() const {
    Count c = s_;
    for (Count x : a_) c = checked_add(c, x);
    return c;
}

Count expected_dim(const Statement& st) {
    return std::min(st.generator_count(), st.shape().ambient_product());
}

Count room(const Statement& st) {
    return st.shape().ambient_product() - st.generator_count();
}

Abundance abundance(const Statement& st) {
    const Count r = room(st);
    if (r > 0) return Abundance::Subabundant;
    if (r < 0) return Abundance::Superabundant;
    return Abundance::Equiabundant;
}

Count generic_rank(const SegreShape& shape) {
    const Count p = shape.ambient_product();
    const Count t = shape.tangent_count();
    return p / t + (p % t != 0 ? 1 : 0);
}

Statement canonicalize(const Statement& st) {
    std::vector<std::pair<Count, Count>> pairs;
    pairs.reserve(st.factors());
    for (std::size_t i = 0; i < st.factors(); ++i) pairs.emplace_back(st.dims()[i], st.a()[i]);
    std::sort(pairs.begin(), pairs.end(), std::greater<>());
    std::vector<Count> dims, a;
    for (auto [n, x] : pairs) {
        dims.push_back(n);
        a.push_back(x);
    }
    return Statement(std::move(dims), st.s(), std::move(a));
}

bool dominates(const Statement& lo, const Statement& hi) {
    if (lo.factors() != hi.factors()) throw std::invalid_argument("segre: dominance needs equal factor counts");
    if (lo.s() > hi.s()) return false;
    for (std::size_t i = 0; i < lo.factors(); ++i) {
        if (lo.a()[i] > hi.a()[i]) return false;
        if (lo.dims()[i] > hi.dims()[i]) return false;
    }
    return true;
}

namespace {
void join(std::ostream& os, const std::vector<Count>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
}
}  // namespace

std::string to_string(const Statement& st) {
    std::ostringstream os;
    os << st;
    return os.str();
}

std::string to_string(const SegreShape& shape) {
    std::ostringstream os;
    os << '(';
    join(os, shape.dims());
    os << ')';
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Statement& st) {
    os << "T(";
    join(os, st.dims());
    os << ';' << st.s() << ';';
    join(os, st.a());
    return os << ')';
}

std::size_t StatementHash::operator()(const Statement& st) const noexcept {
    std::size_t h = std::hash<Count>{}(st.s());
    auto mix = [&h](Count v) { h ^= std::hash<Count>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    for (Count n : st.dims()) mix(n);
    for (Count x : st.a()) mix(x);
    return h;
}

}  // namespace segre
