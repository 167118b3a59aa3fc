#include "segre/reduction.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "segre/parallel.hpp"

namespace segre {

std::pair<Statement, Statement> apply_split(const Statement& st, const Split& sp) {
    const std::size_t k = st.factors();
    const std::size_t j = sp.factor;
    if (j >= k) throw std::invalid_argument("segre: split factor index out of range");
    if (sp.left_dim < 0 || sp.right_dim < 0 || sp.left_dim + sp.right_dim + 2 != st.dims()[j] + 1)
        throw std::invalid_argument("segre: split dimensions do not partition n_j + 1");
    if (sp.left_s < 0 || sp.right_s < 0 || sp.left_s + sp.right_s != st.s())
        throw std::invalid_argument("segre: split does not partition s");
    if (sp.left_a.size() != k || sp.right_a.size() != k)
        throw std::invalid_argument("segre: split a-vectors have the wrong length");

    std::vector<Count> ldims = st.dims(), rdims = st.dims();
    ldims[j] = sp.left_dim;
    rdims[j] = sp.right_dim;
    std::vector<Count> la(k), ra(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (i == j) continue;
        if (sp.left_a[i] < 0 || sp.right_a[i] < 0 || sp.left_a[i] + sp.right_a[i] != st.a()[i])
            throw std::invalid_argument("segre: split does not partition a_" + std::to_string(i + 1));
        la[i] = sp.left_a[i];
        ra[i] = sp.right_a[i];
    }
    la[j] = checked_add(st.a()[j], sp.right_s);
    ra[j] = checked_add(st.a()[j], sp.left_s);
    return {Statement(std::move(ldims), sp.left_s, std::move(la)), Statement(std::move(rdims), sp.right_s, std::move(ra))};
}

bool ProportionalSplit::meets_bound() const {
    return static_cast<__int128>(scaled_deviation) * 2 <= static_cast<__int128>(other_dims) * denominator;
}

bool ProportionalSplit::eligibility_guaranteed(const Statement& st) const {
    const __int128 r = room(st);
    const __int128 abs_room = r < 0 ? -r : r;
    const __int128 smaller = std::min(split.left_dim, split.right_dim) + 1;
    return static_cast<__int128>(other_dims) * denominator <= 2 * smaller * abs_room;
}

namespace {

// Everything about one (statement, factor, cut) needed to score a split.
struct SplitSpace {
    const Statement& st;
    std::size_t j;
    Count left_dim;
    Count width;      // n_j + 1
    Count other_dims; // sum_{i != j} n_i
    Count base;       // R' when s' = 0 and a' = 0
    Count target;     // (n_j+1) * base - (n'_j+1) * R, the ideal (n_j+1) * x
    std::vector<std::size_t> others;  // factor indices != j

    SplitSpace(const Statement& s, std::size_t factor, Count left) : st(s), j(factor), left_dim(left) {
        const std::size_t k = st.factors();
        if (j >= k) throw std::invalid_argument("segre: split factor index out of range");
        const Count n = st.dims()[j];
        if (left_dim < 0 || left_dim > n - 1)
            throw std::invalid_argument("segre: no legal cut of factor " + std::to_string(j + 1) + " with n'_j = " +
                                        std::to_string(left_dim) + " in " + to_string(st));
        width = n + 1;
        Count prod_other = 1;
        other_dims = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (i == j) continue;
            others.push_back(i);
            prod_other = checked_mul(prod_other, st.dims()[i] + 1);
            other_dims = checked_add(other_dims, st.dims()[i]);
        }
        base = checked_mul(left_dim + 1, prod_other - st.a()[j] - st.s());
        target = checked_mul(width, base) - checked_mul(left_dim + 1, room(st));
    }

    // x = s' sum_{i != j} n_i + sum_{i != j} a'_i (n_i + 1) is what the left child consumes.
    Count scaled(Count x) const {
        const Count d = checked_mul(width, x) - target;
        return d < 0 ? -d : d;
    }

    bool hypotheses() const {
        if (st.factors() < 3) return false;
        for (Count n : st.dims())
            if (n < 1) return false;
        if (st.s() >= 1) return true;
        for (std::size_t i : others)
            if (st.a()[i] != 0) return false;
        return true;
    }

    ProportionalSplit make(Count left_s, const std::vector<Count>& left_other, Count dev, bool exhaustive) const {
        ProportionalSplit out;
        Split& sp = out.split;
        const std::size_t k = st.factors();
        sp.factor = j;
        sp.left_dim = left_dim;
        sp.right_dim = width - 2 - left_dim;
        sp.left_s = left_s;
        sp.right_s = st.s() - left_s;
        sp.left_a.assign(k, 0);
        sp.right_a.assign(k, 0);
        for (std::size_t t = 0; t < others.size(); ++t) {
            const std::size_t i = others[t];
            sp.left_a[i] = left_other[t];
            sp.right_a[i] = st.a()[i] - left_other[t];
        }
        out.scaled_deviation = dev;
        out.denominator = width;
        out.other_dims = other_dims;
        out.within_hypotheses = hypotheses();
        out.exhaustive = exhaustive;
        return out;
    }

    Count space_size() const {
        __int128 size = st.s() + 1;
        for (std::size_t i : others) {
            size *= st.a()[i] + 1;
            if (size > exhaustive_split_limit) return exhaustive_split_limit + 1;
        }
        return static_cast<Count>(size);
    }
};

struct Candidate {
    Count dev;
    Count left_s;
    std::vector<Count> left_other;
};

// Keeps the `count` best candidates; among equal deviations the earlier
// (lexicographically smaller) one stays ahead.
void offer(std::vector<Candidate>& best, std::size_t count, Count dev, Count left_s, const std::vector<Count>& left_other) {
    if (best.size() == count && best.back().dev <= dev) return;
    auto pos = std::upper_bound(best.begin(), best.end(), dev, [](Count d, const Candidate& c) { return d < c.dev; });
    best.insert(pos, Candidate{dev, left_s, left_other});
    if (best.size() > count) best.pop_back();
}

std::vector<Candidate> search_exhaustive(const SplitSpace& sp, std::size_t count) {
    const Statement& st = sp.st;
    const std::size_t m = sp.others.size();
    std::vector<Count> weight(m), cap(m);
    for (std::size_t t = 0; t < m; ++t) {
        weight[t] = st.dims()[sp.others[t]] + 1;
        cap[t] = st.a()[sp.others[t]];
    }
    std::vector<Candidate> best;
    std::vector<Count> a(m, 0);
    for (Count s = 0; s <= st.s(); ++s) {
        std::fill(a.begin(), a.end(), 0);
        Count x = s * sp.other_dims;
        while (true) {
            offer(best, count, sp.scaled(x), s, a);
            // odometer over a', last coordinate fastest
            bool advanced = false;
            for (std::size_t t = m; t-- > 0;) {
                if (a[t] < cap[t]) {
                    ++a[t];
                    x += weight[t];
                    advanced = true;
                    break;
                }
                x -= a[t] * weight[t];
                a[t] = 0;
            }
            if (!advanced) break;
        }
    }
    return best;
}

// Constructive walk for large split spaces: fill coarse coordinates until the
// target falls inside the ladder of the fine coordinate, then round along it.
std::vector<Candidate> search_walk(const SplitSpace& sp, std::size_t count) {
    const Statement& st = sp.st;
    const std::size_t m = sp.others.size();
    // fine ladder: s' when s >= 1, else the a'_d with the widest factor
    int fine = -1;  // -1: s', otherwise index into others
    Count fine_w = sp.other_dims, fine_cap = st.s();
    if (st.s() == 0) {
        fine_cap = 0;
        fine_w = 0;
        for (std::size_t t = 0; t < m; ++t) {
            const std::size_t i = sp.others[t];
            if (st.a()[i] > 0 && (fine < 0 || st.dims()[i] + 1 > fine_w)) {
                fine = static_cast<int>(t);
                fine_w = st.dims()[i] + 1;
                fine_cap = st.a()[i];
            }
        }
        if (fine < 0) {
            return {Candidate{sp.scaled(0), 0, std::vector<Count>(m, 0)}};
        }
    }

    std::vector<Count> a(m, 0);
    Count coarse = 0;
    const __int128 ladder = static_cast<__int128>(fine_cap) * fine_w;
    for (std::size_t t = 0; t < m; ++t) {
        if (static_cast<int>(t) == fine) continue;
        const std::size_t i = sp.others[t];
        const Count w = st.dims()[i] + 1;
        const __int128 need = static_cast<__int128>(sp.target) - (coarse + ladder) * sp.width;
        if (need <= 0) break;
        const __int128 step = static_cast<__int128>(w) * sp.width;
        const Count take = static_cast<Count>(std::min<__int128>(st.a()[i], (need + step - 1) / step));
        a[t] = take;
        coarse = checked_add(coarse, checked_mul(take, w));
    }

    // rank fine-ladder values by deviation around the rounding point
    const __int128 rem = static_cast<__int128>(sp.target) - static_cast<__int128>(coarse) * sp.width;
    const __int128 unit = static_cast<__int128>(fine_w) * sp.width;
    Count centre = rem <= 0 ? 0 : static_cast<Count>(std::min<__int128>(fine_cap, rem / unit));
    std::vector<Candidate> best;
    const Count spread = static_cast<Count>(count) + 1;
    for (Count f = std::max<Count>(0, centre - spread); f <= std::min(fine_cap, centre + spread); ++f) {
        const Count x = coarse + f * fine_w;
        std::vector<Count> left = a;
        Count left_s = 0;
        if (fine < 0) left_s = f;
        else left[static_cast<std::size_t>(fine)] = f;
        offer(best, count, sp.scaled(x), left_s, left);
    }
    return best;
}

}  // namespace

std::vector<ProportionalSplit> ranked_proportional_splits(const Statement& st, std::size_t j, Count left_dim,
                                                          std::size_t count) {
    const SplitSpace space(st, j, left_dim);
    if (count == 0) return {};
    const bool exhaustive = space.space_size() <= exhaustive_split_limit;
    const auto found = exhaustive ? search_exhaustive(space, count) : search_walk(space, count);
    std::vector<ProportionalSplit> out;
    for (const auto& c : found) out.push_back(space.make(c.left_s, c.left_other, c.dev, exhaustive));
    return out;
}

ProportionalSplit find_proportional_split(const Statement& st, std::size_t j, Count left_dim) {
    auto ranked = ranked_proportional_splits(st, j, left_dim, 1);
    if (ranked.empty()) throw std::invalid_argument("segre: no legal split for " + to_string(st));
    return ranked.front();
}

StripResult strip_zero_factors(const Statement& st, StripDirection direction) {
    StripResult out;
    Statement cur = st;
    bool sound = true;
    while (cur.factors() > 1) {
        const auto& dims = cur.dims();
        const auto it = std::find(dims.begin(), dims.end(), Count{0});
        if (it == dims.end()) break;
        const auto i = static_cast<std::size_t>(it - dims.begin());
        StripStep step;
        step.removed_factor = i;
        step.removed_a = cur.a()[i];
        const Abundance ab = abundance(cur);
        step.lifts = true;
        step.descends_sub = is_subabundant(ab);
        step.descends_super = is_superabundant(ab) && cur.a()[i] == 0;
        if (direction == StripDirection::ProveStripped && !step.descends_sub && !step.descends_super) sound = false;

        std::vector<Count> nd, na;
        for (std::size_t t = 0; t < cur.factors(); ++t) {
            if (t == i) continue;
            nd.push_back(dims[t]);
            na.push_back(cur.a()[t]);
        }
        cur = Statement(std::move(nd), cur.s(), std::move(na));
        out.steps.push_back(step);
    }
    if (out.steps.empty()) throw std::invalid_argument("segre: no zero-dimensional factor to strip in " + to_string(st));
    out.stripped = std::move(cur);
    out.sound = sound;
    return out;
}

namespace {

using RankOverrides = std::map<std::string, std::size_t>;

bool is_leaf_statement(const Statement& st, const TreePolicy& policy) {
    const auto& d = st.dims();
    const Count largest = *std::max_element(d.begin(), d.end());
    if (largest <= policy.leaf_max_dim || largest == 0) return true;
    return policy.leaf_max_columns > 0 && st.shape().ambient_product() <= policy.leaf_max_columns;
}

std::size_t split_factor(const Statement& st) {
    const auto& d = st.dims();
    return static_cast<std::size_t>(std::max_element(d.begin(), d.end()) - d.begin());
}

Count cut_for(const Statement& st, std::size_t j, const TreePolicy& policy) {
    if (policy.cut) return policy.cut(st, j);
    const Count width = st.dims()[j] + 1;
    return (width + 1) / 2 - 1;  // ceil(width / 2) - 1
}

ReductionNode build_node(const Statement& st, const TreePolicy& policy, const RankOverrides& overrides,
                         const std::string& path) {
    ReductionNode node;
    node.statement = st;
    node.room = room(st);
    node.abundance = abundance(st);
    if (is_leaf_statement(st, policy)) {
        const auto& d = st.dims();
        if (st.factors() > 1 && std::find(d.begin(), d.end(), Count{0}) != d.end())
            node.stripped = strip_zero_factors(st, StripDirection::ProveOriginal).stripped;
        return node;
    }
    const std::size_t j = split_factor(st);
    const Count left = cut_for(st, j, policy);
    const auto it = overrides.find(path);
    const std::size_t want = it == overrides.end() ? 0 : it->second;
    const auto ranked = ranked_proportional_splits(st, j, left, want + 1);
    if (ranked.empty()) throw std::invalid_argument("segre: no legal split for " + to_string(st));
    node.split_rank = std::min(want, ranked.size() - 1);
    node.split = ranked[node.split_rank].split;
    auto [l, r] = apply_split(st, *node.split);
    node.children.push_back(build_node(l, policy, overrides, path + '0'));
    node.children.push_back(build_node(r, policy, overrides, path + '1'));
    return node;
}

void collect_leaves(const ReductionNode& n, std::vector<const ReductionNode*>& out, std::vector<std::string>* paths,
                    const std::string& path) {
    if (n.is_leaf()) {
        out.push_back(&n);
        if (paths) paths->push_back(path);
        return;
    }
    collect_leaves(n.children[0], out, paths, path + '0');
    collect_leaves(n.children[1], out, paths, path + '1');
}

const ReductionNode* node_at(const ReductionNode& root, const std::string& path) {
    const ReductionNode* n = &root;
    for (char c : path) n = &n->children.at(c == '0' ? 0 : 1);
    return n;
}

}  // namespace

ReductionTree build_tree(const Statement& st, const TreePolicy& policy) {
    if (st.factors() < 3) throw std::invalid_argument("segre: reduction trees need at least three factors");
    if (policy.leaf_max_dim < 0) throw std::invalid_argument("segre: leaf dimension threshold must be nonnegative");
    return build_node(st, policy, {}, "");
}

ReductionTree build_tree(const Statement& st, const Split& root_split, const TreePolicy& policy) {
    if (st.factors() < 3) throw std::invalid_argument("segre: reduction trees need at least three factors");
    ReductionNode node;
    node.statement = st;
    node.room = room(st);
    node.abundance = abundance(st);
    auto [l, r] = apply_split(st, root_split);
    node.split = root_split;
    node.children.push_back(build_node(l, policy, {}, "0"));
    node.children.push_back(build_node(r, policy, {}, "1"));
    return node;
}

std::vector<const ReductionNode*> leaves(const ReductionTree& tree) {
    std::vector<const ReductionNode*> out;
    collect_leaves(tree, out, nullptr, "");
    return out;
}

std::size_t node_count(const ReductionTree& tree) {
    std::size_t n = 1;
    for (const auto& c : tree.children) n += node_count(c);
    return n;
}

std::size_t depth(const ReductionTree& tree) {
    std::size_t d = 0;
    for (const auto& c : tree.children) d = std::max(d, 1 + depth(c));
    return d;
}

EligibilityReport check_eligibility(const ReductionTree& tree) {
    EligibilityReport rep;
    const auto ls = leaves(tree);
    std::size_t sub = 0, super = 0;
    for (const auto* l : ls) {
        rep.leaf_abundances.push_back(l->abundance);
        if (l->abundance == Abundance::Subabundant) ++sub;
        if (l->abundance == Abundance::Superabundant) ++super;
    }
    rep.eligible = sub == 0 || super == 0;
    if (rep.eligible) return rep;
    // The side matching the root's room is the intended one; on a zero-room
    // root the smaller group is reported.
    Abundance bad;
    if (tree.room > 0) bad = Abundance::Superabundant;
    else if (tree.room < 0) bad = Abundance::Subabundant;
    else bad = super <= sub ? Abundance::Superabundant : Abundance::Subabundant;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        if (ls[i]->abundance == bad) {
            rep.offending.push_back(i);
            rep.offending_statements.push_back(ls[i]->statement);
        }
    }
    return rep;
}

IneligibleTree::IneligibleTree(EligibilityReport report)
    : std::invalid_argument("segre: reduction tree leaves do not share an abundance"), report_(std::move(report)) {}

const char* to_string(TreeVerdict v) noexcept { return v == TreeVerdict::ProvenTrue ? "ProvenTrue" : "Inconclusive"; }

const char* to_string(ReductionStatus s) noexcept {
    switch (s) {
        case ReductionStatus::ProvenTrue: return "ProvenTrue";
        case ReductionStatus::Inconclusive: return "Inconclusive";
        case ReductionStatus::Ineligible: return "Ineligible";
    }
    return "?";
}

TreeVerification verify_tree(const ReductionTree& tree, const VerifyConfig& cfg, const VerifyFn& verify_fn,
                             unsigned jobs) {
    auto report = check_eligibility(tree);
    if (!report.eligible) throw IneligibleTree(std::move(report));
    const auto ls = leaves(tree);
    TreeVerification out;
    out.leaf_results.resize(ls.size());
    parallel_for(ls.size(), jobs, [&](std::size_t i) {
        const ReductionNode& leaf = *ls[i];
        if (leaf.stripped) {
            auto r = verify_fn(*leaf.stripped, cfg);
            if (r.proven()) {
                out.leaf_results[i] = std::move(r);
                return;
            }
        }
        out.leaf_results[i] = verify_fn(leaf.statement, cfg);
    });
    const bool all = std::all_of(out.leaf_results.begin(), out.leaf_results.end(),
                                 [](const VerificationResult& r) { return r.proven(); });
    out.verdict = all ? TreeVerdict::ProvenTrue : TreeVerdict::Inconclusive;
    return out;
}

ReductionOutcome reduce(const Statement& st, const TreePolicy& policy, const VerifyConfig& cfg,
                        const VerifyFn& verify_fn, unsigned jobs) {
    if (st.factors() < 3) throw std::invalid_argument("segre: reduction trees need at least three factors");
    RankOverrides overrides;
    std::optional<ReductionOutcome> best;
    auto score = [](const ReductionOutcome& o, std::size_t culprits) {
        return std::pair{o.status == ReductionStatus::Ineligible ? 1 : 0, culprits};
    };
    std::pair<int, std::size_t> best_score{2, 0};

    for (int attempt = 0; attempt <= policy.retry_budget; ++attempt) {
        ReductionOutcome cur;
        cur.attempts = attempt + 1;
        cur.tree = build_node(st, policy, overrides, "");
        cur.eligibility = check_eligibility(cur.tree);

        std::vector<const ReductionNode*> ls;
        std::vector<std::string> paths;
        collect_leaves(cur.tree, ls, &paths, "");
        std::vector<std::size_t> culprits;
        if (cur.eligibility.eligible) {
            cur.verification = verify_tree(cur.tree, cfg, verify_fn, jobs);
            if (cur.verification->verdict == TreeVerdict::ProvenTrue) {
                cur.status = ReductionStatus::ProvenTrue;
                return cur;
            }
            cur.status = ReductionStatus::Inconclusive;
            for (std::size_t i = 0; i < ls.size(); ++i)
                if (!cur.verification->leaf_results[i].proven()) culprits.push_back(i);
        } else {
            cur.status = ReductionStatus::Ineligible;
            culprits = cur.eligibility.offending;
        }

        const auto sc = score(cur, culprits.size());
        if (!best || sc < best_score) {
            best_score = sc;
            best = cur;
        }
        if (attempt == policy.retry_budget || culprits.empty()) break;

        // Bump the split rank at the deepest ancestor of a culprit that still
        // has an untried alternative.
        std::string path = paths[culprits.front()];
        bool bumped = false;
        while (!path.empty() && !bumped) {
            path.pop_back();
            const ReductionNode* n = node_at(cur.tree, path);
            const std::size_t next = n->split_rank + 1;
            const auto ranked = ranked_proportional_splits(n->statement, n->split->factor, n->split->left_dim, next + 1);
            if (ranked.size() > next) {
                overrides[path] = next;
                // subtrees below change shape; drop their stale overrides
                for (auto it = overrides.begin(); it != overrides.end();) {
                    if (it->first.size() > path.size() && it->first.compare(0, path.size(), path) == 0)
                        it = overrides.erase(it);
                    else
                        ++it;
                }
                bumped = true;
            }
        }
        if (!bumped) break;
    }
    return *best;
}

}  // namespace segre
