#pragma once

// Inductive reduction calculus: splitting one statement into two on a
// factor, proportional split search, zero-factor stripping, halving-schedule
// reduction trees and their verification.

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "segre/statement.hpp"
#include "segre/tangent.hpp"

namespace segre {

/// Cut of factor j into (left_dim+1) + (right_dim+1) = n_j+1, with s and the
/// a-values of the other factors distributed between the two children.
/// Entries left_a[factor] / right_a[factor] are unused: the children's
/// a-value on the cut factor is a_j + right_s and a_j + left_s.
struct Split {
    std::size_t factor = 0;
    Count left_dim = 0;
    Count right_dim = 0;
    Count left_s = 0;
    Count right_s = 0;
    std::vector<Count> left_a;
    std::vector<Count> right_a;

    bool operator==(const Split&) const = default;
};

/// Throws std::invalid_argument if the split arithmetic does not match st.
std::pair<Statement, Statement> apply_split(const Statement& st, const Split& split);

struct ProportionalSplit {
    Split split;
    /// |R'(n_j+1) - (n'_j+1) R|, i.e. the deviation |R' - gamma' R| scaled by n_j+1.
    Count scaled_deviation = 0;
    Count denominator = 1;  // n_j + 1
    Count other_dims = 0;   // sum of n_i over i != j
    bool within_hypotheses = false;
    bool exhaustive = false;

    double deviation() const noexcept { return static_cast<double>(scaled_deviation) / static_cast<double>(denominator); }
    /// |R' - gamma' R| <= (1/2) sum_{i != j} n_i, checked exactly.
    bool meets_bound() const;
    /// (1/2) sum_{i != j} n_i <= min(gamma', gamma'') |R|, which forces both
    /// children to share the parent's abundance.
    bool eligibility_guaranteed(const Statement& st) const;
};

/// Split spaces up to this size are searched exhaustively.
inline constexpr Count exhaustive_split_limit = 1'000'000;

/// Best split of factor j with left part of dimension left_dim: minimizes
/// |R' - gamma' R|, ties broken by the lexicographically smallest
/// (s', a'_i for i != j). Throws std::invalid_argument for an illegal cut.
ProportionalSplit find_proportional_split(const Statement& st, std::size_t j, Count left_dim);

/// The `count` best splits in the same order (fewer if the space is smaller).
std::vector<ProportionalSplit> ranked_proportional_splits(const Statement& st, std::size_t j, Count left_dim,
                                                          std::size_t count);

enum class StripDirection {
    ProveOriginal,  // truth of the stripped statement implies the original
    ProveStripped,  // truth of the original implies the stripped statement
};

/// Flags for removing one zero-dimensional factor i:
///   lifts:          stripped true => original true (always)
///   descends_sub:   original true and subabundant => stripped true and subabundant
///   descends_super: original true, superabundant and a_i = 0 => stripped true and superabundant
struct StripStep {
    std::size_t removed_factor = 0;
    Count removed_a = 0;
    bool lifts = true;
    bool descends_sub = false;
    bool descends_super = false;
};

struct StripResult {
    Statement stripped;
    std::vector<StripStep> steps;
    /// Every step is usable in the requested direction.
    bool sound = false;
};

/// Removes zero-dimensional factors one at a time (never the last factor).
/// Throws std::invalid_argument if there is nothing to strip.
StripResult strip_zero_factors(const Statement& st, StripDirection direction);

struct TreePolicy {
    /// A node is a leaf once every factor has dimension <= leaf_max_dim ...
    Count leaf_max_dim = 3;
    /// ... or its ambient space has at most this many columns (0 disables).
    Count leaf_max_columns = 4096;
    /// Custom cut: returns n'_j for the chosen factor. Default is central.
    std::function<Count(const Statement&, std::size_t)> cut;
    /// Alternative splits tried by reduce() after a failed attempt.
    int retry_budget = 3;
};

struct ReductionNode {
    Statement statement;
    Count room = 0;
    Abundance abundance = Abundance::Equiabundant;
    std::optional<Split> split;
    /// Index into the ranked split list that produced the children.
    std::size_t split_rank = 0;
    std::vector<ReductionNode> children;
    /// Leaves with zero-dimensional factors carry their stripped form.
    std::optional<Statement> stripped;

    bool is_leaf() const noexcept { return children.empty(); }
};

using ReductionTree = ReductionNode;

/// Largest-factor-first halving. Throws std::invalid_argument for k < 3.
ReductionTree build_tree(const Statement& st, const TreePolicy& policy = {});

/// Same, but the root is cut by the given split (validated by apply_split).
ReductionTree build_tree(const Statement& st, const Split& root_split, const TreePolicy& policy = {});

/// Leaves in left-to-right order.
std::vector<const ReductionNode*> leaves(const ReductionTree& tree);
std::size_t node_count(const ReductionTree& tree);
std::size_t depth(const ReductionTree& tree);

struct EligibilityReport {
    bool eligible = false;
    std::vector<Abundance> leaf_abundances;
    /// Indices into leaves(tree) whose abundance disagrees with the majority side.
    std::vector<std::size_t> offending;
    std::vector<Statement> offending_statements;
};

EligibilityReport check_eligibility(const ReductionTree& tree);

class IneligibleTree : public std::invalid_argument {
public:
    explicit IneligibleTree(EligibilityReport report);
    const EligibilityReport& report() const noexcept { return report_; }

private:
    EligibilityReport report_;
};

enum class TreeVerdict { ProvenTrue, Inconclusive };

const char* to_string(TreeVerdict v) noexcept;

struct TreeVerification {
    TreeVerdict verdict = TreeVerdict::Inconclusive;
    /// One result per leaf, in leaves() order. For stripped leaves this is
    /// the result that decided the leaf.
    std::vector<VerificationResult> leaf_results;
};

/// Throws IneligibleTree if the leaves do not share an abundance.
TreeVerification verify_tree(const ReductionTree& tree, const VerifyConfig& cfg, const VerifyFn& verify_fn = verify,
                             unsigned jobs = 1);

enum class ReductionStatus { ProvenTrue, Inconclusive, Ineligible };

const char* to_string(ReductionStatus s) noexcept;

struct ReductionOutcome {
    ReductionStatus status = ReductionStatus::Inconclusive;
    ReductionTree tree;
    EligibilityReport eligibility;
    std::optional<TreeVerification> verification;
    int attempts = 0;
};

/// Builds, checks and verifies a tree; on failure retries with the
/// next-ranked split at the deepest node above a failing leaf, up to the
/// policy's retry budget. Returns the proven tree or the best near miss.
ReductionOutcome reduce(const Statement& st, const TreePolicy& policy, const VerifyConfig& cfg,
                        const VerifyFn& verify_fn = verify, unsigned jobs = 1);

}  // namespace segre
