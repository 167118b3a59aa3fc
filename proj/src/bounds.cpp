#include "segre/bounds.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace segre {

const char* to_string(BoundKind k) noexcept {
    switch (k) {
        case BoundKind::WitnessLowerBound: return "witness_lower_bound";
        case BoundKind::BinaryCubeBand: return "binary_cube_band";
        case BoundKind::HalvingTransfer: return "halving_transfer";
        case BoundKind::GeneralThreshold: return "general_threshold";
        case BoundKind::PowerOfTwoThreshold: return "power_of_two_threshold";
    }
    return "?";
}

const Rational& BoundReport::value(const std::string& name) const {
    for (const auto& v : values)
        if (v.name == name) return v.value;
    throw std::out_of_range("segre: bound report has no value " + name);
}

namespace {

std::vector<Count> ascending(const SegreShape& shape) {
    auto dims = shape.dims();
    std::sort(dims.begin(), dims.end());
    return dims;
}

void require_factors(const SegreShape& shape, std::size_t k) {
    if (shape.factors() < k)
        throw std::invalid_argument("segre: needs at least " + std::to_string(k) + " factors, got " +
                                    to_string(shape));
}

BigInt pow2(int e) { return BigInt(1) << e; }

// d with n + 1 == 2^d c, if any.
std::optional<int> halving_depth(Count n, Count c) {
    Count m = n + 1;
    if (m % c != 0) return std::nullopt;
    m /= c;
    if ((m & (m - 1)) != 0) return std::nullopt;
    int d = 0;
    while (m > 1) {
        m >>= 1;
        ++d;
    }
    return d;
}

}  // namespace

Statement witness_statement(const SegreShape& shape) {
    require_factors(shape, 2);
    const auto dims = ascending(shape);
    Count prefix = 1, head = 0;
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        prefix = checked_mul(prefix, dims[i] + 1);
        head += dims[i];
    }
    std::vector<Count> a(dims.size(), 0);
    a.back() = prefix - head;
    return Statement(dims, 1, a);
}

Count witness_lower_bound(const SegreShape& shape) {
    require_factors(shape, 2);
    const auto dims = ascending(shape);
    const Count head = std::accumulate(dims.begin(), dims.end() - 1, Count{0});
    return checked_mul(dims.back(), head - 1);
}

Band binary_cube_band(int k) {
    if (k < 3) throw std::invalid_argument("segre: the (P^1)^k band needs k >= 3");
    Band b{k - 2, k - 1, std::nullopt};
    if (k <= 7) b.exact = k - 2;
    return b;
}

Transfer halving_transfer(const SegreShape& shape, Count c, Count o_plus_y, Count o_minus_y) {
    require_factors(shape, 3);
    if (c < 1) throw std::invalid_argument("segre: c must be positive");
    Transfer t;
    for (std::size_t i = 0; i < shape.factors(); ++i) {
        const auto d = halving_depth(shape[i], c);
        if (!d)
            throw std::invalid_argument("segre: factor " + std::to_string(i + 1) + " has n+1 = " +
                                        std::to_string(shape[i] + 1) + ", not 2^d * " + std::to_string(c));
        t.halvings += *d;
    }
    if (t.halvings > 61) throw std::overflow_error("segre: too many halvings");
    const Count k = static_cast<Count>(shape.factors());
    t.C = checked_mul(c, (k - 1) * (k - 1)) - k * (k - 1) / 2;
    const Count scale = Count{1} << t.halvings;
    t.o_plus_upper = checked_mul(scale, checked_add(o_plus_y, t.C));
    t.o_minus_lower = checked_mul(scale, o_minus_y - t.C);
    return t;
}

Rational delta(int k) {
    if (k < 3) throw std::invalid_argument("segre: Delta_k needs k >= 3");
    const BigInt kk(k);
    return Rational(1) - Rational(3 * kk * kk - 5 * kk + 2, pow2(k + 1));
}

Rational theta(int k) { return delta(k) / Rational(pow2(k)); }

Threshold nondefectivity_threshold(const SegreShape& shape) {
    require_factors(shape, 3);
    const int k = static_cast<int>(shape.factors());
    const bool powers = std::all_of(shape.dims().begin(), shape.dims().end(), [](Count n) {
        const Count m = n + 1;
        return m >= 2 && (m & (m - 1)) == 0;
    });
    Threshold t;
    t.kind = powers ? BoundKind::PowerOfTwoThreshold : BoundKind::GeneralThreshold;
    t.coefficient = powers ? delta(k) : theta(k);
    const Rational bound = t.coefficient * Rational(BigInt(shape.ambient_product()), BigInt(shape.tangent_count()));
    const BigInt floor = numerator(bound) / denominator(bound);
    t.s_max = floor < 0 ? Count{0} : static_cast<Count>(floor);
    return t;
}

std::vector<BoundReport> bound_reports(const SegreShape& shape, const std::optional<TransferInputs>& transfer) {
    std::vector<BoundReport> out;
    const std::size_t k = shape.factors();
    if (k >= 2) {
        BoundReport r{shape, BoundKind::WitnessLowerBound, {}, {"factors sorted ascending"}, witness_statement(shape)};
        r.values.push_back({"o_plus_lower", Rational(witness_lower_bound(shape))});
        r.values.push_back({"witness_room", Rational(room(*r.witness))});
        if (k < 3) r.assumptions.push_back("k = 2: the witness is not known to be false");
        out.push_back(std::move(r));
    }
    if (k < 3) return out;

    if (std::all_of(shape.dims().begin(), shape.dims().end(), [](Count n) { return n == 1; })) {
        const auto band = binary_cube_band(static_cast<int>(k));
        BoundReport r{shape, BoundKind::BinaryCubeBand, {}, {"every n_i = 1", "k >= 3"}, std::nullopt};
        r.values.push_back({"o_plus_lower", Rational(band.lower)});
        r.values.push_back({"o_plus_upper", Rational(band.upper)});
        if (band.exact) r.values.push_back({"o_plus", Rational(*band.exact)});
        out.push_back(std::move(r));
    }

    const auto th = nondefectivity_threshold(shape);
    BoundReport r{shape, th.kind, {}, {"k >= 3"}, std::nullopt};
    if (th.kind == BoundKind::PowerOfTwoThreshold) r.assumptions.push_back("every n_i + 1 is a power of 2");
    r.values.push_back({"coefficient", th.coefficient});
    r.values.push_back({"s_max", Rational(th.s_max)});
    out.push_back(std::move(r));

    if (transfer) {
        try {
            const auto t = halving_transfer(shape, transfer->c, transfer->o_plus_y, transfer->o_minus_y);
            BoundReport tr{shape, BoundKind::HalvingTransfer, {}, {"n_i + 1 = 2^d_i * c", "k >= 3"}, std::nullopt};
            tr.values.push_back({"c", Rational(transfer->c)});
            tr.values.push_back({"halvings", Rational(t.halvings)});
            tr.values.push_back({"C", Rational(t.C)});
            tr.values.push_back({"o_plus_upper", Rational(t.o_plus_upper)});
            tr.values.push_back({"o_minus_lower", Rational(t.o_minus_lower)});
            out.push_back(std::move(tr));
        } catch (const std::invalid_argument&) {
            // hypothesis fails for this shape: no report
        }
    }
    return out;
}

}  // namespace segre
