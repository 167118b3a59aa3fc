#include "segre/tangent.hpp"

#include <algorithm>
#include <random>

namespace segre {

const char* to_string(Verdict v) noexcept {
    return v == Verdict::ProvenTrue ? "ProvenTrue" : "ProbablyFalse";
}

std::uint64_t trial_seed(std::uint64_t base_seed, int index) noexcept {
    std::uint64_t z = base_seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

PointSample sample_points(const SegreShape& shape, Count count, const ff::PrimeModulus& p, std::uint64_t seed) {
    if (count < 0) throw std::invalid_argument("segre: point count must be nonnegative");
    std::mt19937_64 gen(seed ^ (static_cast<std::uint64_t>(p.value()) << 32));
    PointSample out{{}, seed, p};
    out.points.reserve(static_cast<std::size_t>(count));
    for (Count i = 0; i < count; ++i) {
        SegrePoint pt;
        for (Count n : shape.dims()) {
            std::vector<ff::Residue> v(static_cast<std::size_t>(n + 1));
            do {
                for (auto& x : v) x = static_cast<ff::Residue>(gen() % p.value());
            } while (std::all_of(v.begin(), v.end(), [](ff::Residue x) { return x == 0; }));
            pt.vectors.push_back(std::move(v));
        }
        out.points.push_back(std::move(pt));
    }
    return out;
}

namespace {

// Flattened Kronecker product of the given vectors, first factor most significant.
std::vector<ff::Residue> kron(const std::vector<std::vector<ff::Residue>>& vs, std::size_t begin, std::size_t end,
                              const ff::PrimeModulus& p) {
    std::vector<ff::Residue> out{1};
    for (std::size_t i = begin; i < end; ++i) {
        std::vector<ff::Residue> next;
        next.reserve(out.size() * vs[i].size());
        for (ff::Residue x : out)
            for (ff::Residue y : vs[i]) next.push_back(p.mul(x, y));
        out = std::move(next);
    }
    return out;
}

// Appends v_1 .. e_t .. v_k for t = 0..n_j onto m.
void append_partial_rows(ff::FieldMatrix& m, const SegrePoint& point, std::size_t j, const ff::PrimeModulus& p) {
    const auto prefix = kron(point.vectors, 0, j, p);
    const auto suffix = kron(point.vectors, j + 1, point.vectors.size(), p);
    const std::size_t width = point.vectors[j].size();
    std::vector<ff::Residue> row(prefix.size() * width * suffix.size());
    for (std::size_t t = 0; t < width; ++t) {
        std::fill(row.begin(), row.end(), 0);
        for (std::size_t a = 0; a < prefix.size(); ++a) {
            const std::size_t base = (a * width + t) * suffix.size();
            for (std::size_t b = 0; b < suffix.size(); ++b) row[base + b] = p.mul(prefix[a], suffix[b]);
        }
        m.push_row(row);
    }
}

void check_point(const SegrePoint& point, const SegreShape& shape) {
    if (point.vectors.size() != shape.factors()) throw std::invalid_argument("segre: point does not match shape");
    for (std::size_t i = 0; i < shape.factors(); ++i)
        if (point.vectors[i].size() != static_cast<std::size_t>(shape[i] + 1))
            throw std::invalid_argument("segre: point vector length does not match factor dimension");
}

}  // namespace

ff::FieldMatrix tangent_rows(const SegrePoint& point, const SegreShape& shape, const ff::PrimeModulus& p) {
    check_point(point, shape);
    ff::FieldMatrix m(0, static_cast<std::size_t>(shape.ambient_product()));
    for (std::size_t j = 0; j < shape.factors(); ++j) append_partial_rows(m, point, j, p);
    return m;
}

ff::FieldMatrix partial_tangent_rows(const SegrePoint& point, const SegreShape& shape, std::size_t j,
                                     const ff::PrimeModulus& p) {
    if (j >= shape.factors()) throw std::out_of_range("segre: factor index out of range");
    check_point(point, shape);
    ff::FieldMatrix m(0, static_cast<std::size_t>(shape.ambient_product()));
    append_partial_rows(m, point, j, p);
    return m;
}

Count assembly_rows(const Statement& st) {
    Count rows = checked_mul(st.s(), st.shape().tangent_rows());
    for (std::size_t i = 0; i < st.factors(); ++i)
        rows = checked_add(rows, checked_mul(st.a()[i], checked_add(st.dims()[i], 1)));
    return rows;
}

namespace {
void check_cap(const Statement& st, std::uint64_t max_entries) {
    const Count entries = checked_mul(assembly_rows(st), st.shape().ambient_product());
    if (static_cast<std::uint64_t>(entries) > max_entries)
        throw CapExceeded("segre: " + to_string(st) + " needs " + std::to_string(entries) +
                          " matrix entries, above the cap of " + std::to_string(max_entries));
}
}  // namespace

ff::FieldMatrix assemble_L(const Statement& st, const ff::PrimeModulus& p, std::uint64_t seed,
                           std::uint64_t max_entries) {
    check_cap(st, max_entries);
    const auto sample = sample_points(st.shape(), st.point_count(), p, seed);
    const auto cols = static_cast<std::size_t>(st.shape().ambient_product());
    ff::FieldMatrix m(0, cols);
    std::size_t next = 0;
    for (Count i = 0; i < st.s(); ++i) {
        const auto& pt = sample.points[next++];
        for (std::size_t j = 0; j < st.factors(); ++j) append_partial_rows(m, pt, j, p);
    }
    for (std::size_t j = 0; j < st.factors(); ++j)
        for (Count i = 0; i < st.a()[j]; ++i) append_partial_rows(m, sample.points[next++], j, p);
    return m;
}

VerificationResult verify(const Statement& st, const VerifyConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("segre: trials must be at least 1");
    VerificationResult res;
    res.statement = st;
    res.expected = expected_dim(st);

    // s + sum a_i general points of a nondegenerate variety already span the
    // ambient space, so the statement holds without any rank computation.
    const Count ambient = st.shape().ambient_product();
    if (room(st) <= 0 && st.point_count() >= ambient) {
        res.verdict = Verdict::ProvenTrue;
        res.best_rank = res.expected;
        return res;
    }

    check_cap(st, cfg.max_entries);
    for (int t = 0; t < cfg.trials; ++t) {
        const std::uint64_t seed = trial_seed(cfg.base_seed, t);
        const ff::PrimeModulus p = ff::random_prime(seed);
        const auto r = static_cast<Count>(ff::rank(assemble_L(st, p, seed, cfg.max_entries), p));
        if (r > res.expected) throw std::logic_error("segre: tangent span exceeds expected dimension for " + to_string(st));
        ++res.trials_run;
        res.primes_used.push_back(p.value());
        res.seeds_used.push_back(seed);
        res.best_rank = std::max(res.best_rank, r);
        if (r == res.expected) break;
    }
    res.verdict = res.best_rank == res.expected ? Verdict::ProvenTrue : Verdict::ProbablyFalse;
    return res;
}

}  // namespace segre
