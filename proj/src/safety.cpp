#include "segre/safety.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "segre/parallel.hpp"

namespace segre {

const char* to_string(BoundStatus s) noexcept {
    switch (s) {
        case BoundStatus::Exact: return "exact";
        case BoundStatus::NoneFound: return "none_found";
        case BoundStatus::Horizon: return "horizon";
        case BoundStatus::NotComputed: return "not_computed";
    }
    return "?";
}

std::vector<Statement> statements_with_room(const SegreShape& shape, Count r) {
    std::vector<Statement> out;
    const Count target = shape.ambient_product() - r;
    if (target < 0) return out;
    const Count t = shape.tangent_count();
    const std::size_t k = shape.factors();
    std::vector<Count> a(k, 0);
    for (Count s = 0; s * t <= target; ++s) {
        std::function<void(std::size_t, Count)> rec = [&](std::size_t i, Count left) {
            const Count w = shape[i] + 1;
            if (i + 1 == k) {
                if (left % w != 0) return;
                a[i] = left / w;
                out.emplace_back(shape, s, a);
                return;
            }
            for (Count x = 0; x * w <= left; ++x) {
                a[i] = x;
                rec(i + 1, left - x * w);
            }
        };
        rec(0, target - s * t);
    }
    return out;
}

namespace {

struct Entry {
    bool proven = false;
    std::optional<VerificationResult> result;  // empty when implied
};

using Table = std::unordered_map<Statement, Entry, StatementHash>;

VerifyConfig scan_config(const SafetyConfig& cfg) {
    VerifyConfig v = cfg.verify;
    v.trials = std::max(v.trials, 3);
    return v;
}

std::vector<Statement> unit_successors(const Statement& st) {
    std::vector<Statement> out;
    out.emplace_back(st.shape(), st.s() + 1, st.a());
    for (std::size_t i = 0; i < st.factors(); ++i) {
        auto a = st.a();
        ++a[i];
        out.emplace_back(st.shape(), st.s(), std::move(a));
    }
    return out;
}

std::vector<Statement> unit_predecessors(const Statement& st) {
    std::vector<Statement> out;
    if (st.s() > 0) out.emplace_back(st.shape(), st.s() - 1, st.a());
    for (std::size_t i = 0; i < st.factors(); ++i) {
        if (st.a()[i] == 0) continue;
        auto a = st.a();
        --a[i];
        out.emplace_back(st.shape(), st.s(), std::move(a));
    }
    return out;
}

bool known_true(const Table& table, const Statement& st) {
    const auto it = table.find(canonicalize(st));
    return it != table.end() && it->second.proven;
}

// Verifies the statements of one level (or BFS layer) not yet in the table.
// `implied` decides whether monotonicity already proves a statement.
// Returns the representatives in order, one per canonical form.
std::vector<Statement> settle(const std::vector<Statement>& stmts, Table& table, const VerifyConfig& vcfg,
                              const VerifyFn& verify_fn, unsigned jobs, ScanResult& res,
                              const std::function<bool(const Statement&)>& implied) {
    std::vector<Statement> reps;
    std::unordered_set<Statement, StatementHash> seen;
    std::vector<Statement> todo;
    for (const auto& st : stmts) {
        const auto key = canonicalize(st);
        if (!seen.insert(key).second) continue;
        reps.push_back(st);
        if (table.count(key)) continue;
        if (implied(st)) {
            table[key] = Entry{true, std::nullopt};
            ++res.implied;
        } else {
            todo.push_back(st);
        }
    }
    std::vector<VerificationResult> results(todo.size());
    parallel_for(todo.size(), jobs, [&](std::size_t i) { results[i] = verify_fn(todo[i], vcfg); });
    for (std::size_t i = 0; i < todo.size(); ++i) {
        table[canonicalize(todo[i])] = Entry{results[i].proven(), results[i]};
        ++res.verified;
    }
    return reps;
}

Witness make_witness(const Statement& st, const Table& table) {
    const auto& e = table.at(canonicalize(st));
    return Witness{st, room(st), e.result.value_or(VerificationResult{})};
}

// Re-verifies the witnesses at the extreme room with fresh seeds. Overturned
// ones are recorded as true; returns whether any was overturned.
bool confirm(const ScanResult& res, Table& table, const VerifyConfig& vcfg, const VerifyFn& verify_fn,
             int rounds, unsigned jobs, std::uint64_t& stream) {
    std::vector<Statement> extreme;
    for (const auto& w : res.witnesses)
        if (w.room == res.extreme_room) extreme.push_back(w.statement);
    bool overturned = false;
    for (int round = 0; round < rounds; ++round) {
        VerifyConfig fresh = vcfg;
        fresh.base_seed = trial_seed(vcfg.base_seed ^ 0x5afe5afe5afe5afeULL, static_cast<int>(stream++));
        std::vector<VerificationResult> again(extreme.size());
        parallel_for(extreme.size(), jobs, [&](std::size_t i) { again[i] = verify_fn(extreme[i], fresh); });
        for (std::size_t i = 0; i < extreme.size(); ++i) {
            if (!again[i].proven()) continue;
            table[canonicalize(extreme[i])] = Entry{true, again[i]};
            overturned = true;
        }
    }
    return overturned;
}

ScanResult sub_pass(const SegreShape& shape, Table& table, const SafetyConfig& cfg, const VerifyConfig& vcfg,
                    const VerifyFn& verify_fn) {
    ScanResult res;
    const Count window = *std::min_element(shape.dims().begin(), shape.dims().end()) + 1;
    Count clean = 0;
    bool any_false = false;
    const auto implied = [&](const Statement& st) {
        for (const auto& up : unit_successors(st))
            if (room(up) >= 0 && known_true(table, up)) return true;
        return false;
    };
    for (Count r = 0;; ++r) {
        if (cfg.max_room_level >= 0 && r > cfg.max_room_level) {
            res.status = BoundStatus::Horizon;
            res.horizon = r - 1;
            break;
        }
        const auto reps = settle(statements_with_room(shape, r), table, vcfg, verify_fn, cfg.jobs, res, implied);
        bool level_false = false;
        for (const auto& st : reps) {
            if (table.at(canonicalize(st)).proven) continue;
            res.witnesses.push_back(make_witness(st, table));
            level_false = true;
        }
        if (level_false) {
            any_false = true;
            res.extreme_room = r;
            clean = 0;
        } else if (++clean >= window) {
            res.status = any_false ? BoundStatus::Exact : BoundStatus::NoneFound;
            res.horizon = r;
            break;
        }
    }
    std::stable_sort(res.witnesses.begin(), res.witnesses.end(),
                     [](const Witness& x, const Witness& y) { return x.room > y.room; });
    return res;
}

ScanResult super_pass(const SegreShape& shape, Table& table, const SafetyConfig& cfg, const VerifyConfig& vcfg,
                      const VerifyFn& verify_fn) {
    ScanResult res;
    res.status = BoundStatus::NoneFound;
    const Count t = shape.tangent_count();
    std::vector<Statement> layer;
    for (Count r = 0; r > -t; --r) {
        const auto level = statements_with_room(shape, r);
        layer.insert(layer.end(), level.begin(), level.end());
    }
    const auto implied = [&](const Statement& st) {
        for (const auto& down : unit_predecessors(st))
            if (room(down) <= 0 && known_true(table, down)) return true;
        return false;
    };
    std::unordered_set<Statement, StatementHash> visited;
    std::size_t examined = 0;
    res.horizon = 0;
    while (!layer.empty()) {
        if (cfg.max_super_nodes > 0 && examined + layer.size() > cfg.max_super_nodes) {
            res.status = BoundStatus::Horizon;
            break;
        }
        const auto reps = settle(layer, table, vcfg, verify_fn, cfg.jobs, res, implied);
        std::vector<Statement> next;
        for (const auto& st : reps) {
            ++examined;
            visited.insert(canonicalize(st));
            res.horizon = std::min(res.horizon, room(st));
            if (table.at(canonicalize(st)).proven) continue;
            res.witnesses.push_back(make_witness(st, table));
            for (auto& up : unit_successors(st))
                if (!visited.count(canonicalize(up))) next.push_back(std::move(up));
        }
        layer = std::move(next);
    }
    if (!res.witnesses.empty()) {
        if (res.status != BoundStatus::Horizon) res.status = BoundStatus::Exact;
        std::stable_sort(res.witnesses.begin(), res.witnesses.end(),
                         [](const Witness& x, const Witness& y) { return x.room < y.room; });
        res.extreme_room = res.witnesses.front().room;
    }
    return res;
}

using Pass = ScanResult (*)(const SegreShape&, Table&, const SafetyConfig&, const VerifyConfig&, const VerifyFn&);

ScanResult run_scan(Pass pass, const SegreShape& shape, const SafetyConfig& cfg, const VerifyFn& verify_fn) {
    if (shape.factors() < 2) throw std::invalid_argument("segre: safety scans need at least two factors");
    const VerifyConfig vcfg = scan_config(cfg);
    Table table;
    std::uint64_t stream = 0;
    int restarts = 0;
    for (;;) {
        ScanResult res = pass(shape, table, cfg, vcfg, verify_fn);
        if (res.witnesses.empty() || !confirm(res, table, vcfg, verify_fn, cfg.confirm_rounds, cfg.jobs, stream)) {
            res.restarts = restarts;
            return res;
        }
        ++restarts;
    }
}

}  // namespace

ScanResult scan_subabundant(const SegreShape& shape, const SafetyConfig& cfg, const VerifyFn& verify_fn) {
    return run_scan(sub_pass, shape, cfg, verify_fn);
}

ScanResult scan_superabundant(const SegreShape& shape, const SafetyConfig& cfg, const VerifyFn& verify_fn) {
    return run_scan(super_pass, shape, cfg, verify_fn);
}

SafetyRegion safety_region(const SegreShape& shape, const SafetyConfig& cfg, const VerifyFn& verify_fn,
                           bool o_plus_only) {
    SafetyRegion region{shape, 0, 0, {}, {}, true};
    region.sub = scan_subabundant(shape, cfg, verify_fn);
    if (!region.sub.witnesses.empty()) region.o_plus = region.sub.extreme_room + 1;
    if (!o_plus_only) {
        region.super = scan_superabundant(shape, cfg, verify_fn);
        if (!region.super.witnesses.empty()) region.o_minus = region.super.extreme_room - 1;
    }
    return region;
}

ConjectureReport conjecture_check(const SafetyRegion& region, const SafetyConfig& cfg, const VerifyFn& verify_fn) {
    ConjectureReport rep;
    auto dims = region.shape.dims();
    std::sort(dims.begin(), dims.end());
    rep.sorted_shape = SegreShape(dims);
    const std::size_t k = dims.size();
    const Count nk = dims.back();

    rep.bounds_exact = region.sub.status == BoundStatus::Exact && region.super.status == BoundStatus::Exact;
    rep.symmetric = rep.bounds_exact && region.o_minus == -region.o_plus;
    const Count head = std::accumulate(dims.begin(), dims.end() - 1, Count{0});
    rep.formula_o_plus = checked_mul(head - 1, nk);
    rep.formula_holds = region.sub.status == BoundStatus::Exact && region.o_plus == rep.formula_o_plus;

    Count prefix = 1;
    for (std::size_t i = 0; i + 1 < k; ++i) prefix = checked_mul(prefix, dims[i] + 1);
    const Count ak = prefix - (nk + 1);
    if (ak >= 0) {
        std::vector<Count> a(k, 0);
        a.back() = ak;
        const Statement w(rep.sorted_shape, nk, a);
        rep.witness = w;
        rep.witness_room = room(w);
        rep.witness_result = verify_fn(w, scan_config(cfg));
        rep.witness_false = !rep.witness_result->proven();
        rep.witness_room_matches =
            !region.super.witnesses.empty() && rep.witness_room == region.super.extreme_room;
    }
    return rep;
}

}  // namespace segre
