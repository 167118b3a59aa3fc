// Command-line front end.
//
// Exit codes: 0 proven / success, 10 probably false or inconclusive,
// 2 entry cap exceeded, 3 ineligible reduction tree, 1 malformed input.

#include <CLI11.hpp>

#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "segre/bounds.hpp"
#include "segre/cache.hpp"
#include "segre/io.hpp"
#include "segre/reduction.hpp"
#include "segre/safety.hpp"
#include "segre/secants.hpp"

using namespace segre;

namespace {

enum Exit : int { ok = 0, malformed = 1, cap = 2, ineligible = 3, not_proven = 10 };

struct Globals {
    int trials = 3;
    std::uint64_t seed = 0;
    std::uint64_t max_entries = ff::default_max_entries;
    std::string cache_path;
    unsigned jobs = 1;
    std::string format = "json";
};

struct Context {
    VerifyConfig cfg;
    std::unique_ptr<ResultCache> cache;
    VerifyFn verify_fn = verify;
    bool csv = false;
};

Context make_context(const Globals& g) {
    Context c;
    c.cfg.trials = g.trials;
    c.cfg.base_seed = g.seed;
    c.cfg.max_entries = g.max_entries;
    c.csv = g.format == "csv";
    if (!g.cache_path.empty()) {
        c.cache = std::make_unique<ResultCache>(g.cache_path);
        c.verify_fn = cached_verify(*c.cache);
    }
    return c;
}

// "1,2,3" is accepted as shorthand for [1,2,3].
SegreShape read_shape(const std::string& arg) {
    const bool bare = !arg.empty() && arg.find_first_of("[{@") == std::string::npos;
    return io::parse_shape(io::read_input(bare ? "[" + arg + "]" : arg));
}

void emit(const io::Json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_check(const Context& c, const std::string& input) {
    const auto st = io::parse_statement(io::read_input(input));
    const auto r = c.verify_fn(st, c.cfg);
    if (c.csv) std::cout << io::result_csv({r});
    else emit(io::to_json(r));
    return r.proven() ? ok : not_proven;
}

int cmd_scan(const Context& c, const std::string& input) {
    const auto scan = scan_secants(read_shape(input), c.cfg, c.verify_fn);
    if (c.csv) std::cout << io::secants_csv(scan);
    else emit(io::to_json(scan));
    if (scan.cap_error) {
        std::cerr << *scan.cap_error << '\n';
        return cap;
    }
    return scan.all_proven() ? ok : not_proven;
}

struct SafetyOpts {
    bool o_plus_only = false;
    Count max_level = -1;
    std::size_t max_super_nodes = 0;
};

SafetyConfig safety_config(const Context& c, const SafetyOpts& o, unsigned jobs) {
    SafetyConfig sc;
    sc.verify = c.cfg;
    sc.jobs = jobs;
    sc.max_room_level = o.max_level;
    sc.max_super_nodes = o.max_super_nodes;
    return sc;
}

int cmd_safety(const Context& c, const std::string& input, const SafetyOpts& o, unsigned jobs) {
    const auto region = safety_region(read_shape(input), safety_config(c, o, jobs), c.verify_fn, o.o_plus_only);
    if (c.csv) std::cout << io::safety_csv({region});
    else emit(io::to_json(region));
    return ok;
}

int cmd_conjecture(const Context& c, const std::string& input, const SafetyOpts& o, unsigned jobs) {
    const auto sc = safety_config(c, o, jobs);
    const auto region = safety_region(read_shape(input), sc, c.verify_fn);
    const auto rep = conjecture_check(region, sc, c.verify_fn);
    io::Json j;
    j["region"] = io::to_json(region);
    j["conjecture"] = io::to_json(rep);
    emit(j);
    const bool holds =
        rep.bounds_exact && rep.symmetric && rep.formula_holds && (!rep.witness || (rep.witness_false && rep.witness_room_matches));
    return holds ? ok : not_proven;
}

struct ReduceOpts {
    Count leaf_dim = 3;
    Count leaf_columns = 4096;
    int retries = 3;
    std::string split;
    std::string emit = "json";
};

int cmd_reduce(const Context& c, const std::string& input, const ReduceOpts& o, unsigned jobs) {
    const auto st = io::parse_statement(io::read_input(input));
    TreePolicy policy;
    policy.leaf_max_dim = o.leaf_dim;
    policy.leaf_max_columns = o.leaf_columns;
    policy.retry_budget = o.retries;

    ReductionOutcome out;
    if (!o.split.empty()) {
        // forced root split: one attempt, no retries
        out.tree = build_tree(st, io::parse_split(io::read_input(o.split), st), policy);
        out.attempts = 1;
        out.eligibility = check_eligibility(out.tree);
        if (!out.eligibility.eligible) {
            out.status = ReductionStatus::Ineligible;
        } else {
            out.verification = verify_tree(out.tree, c.cfg, c.verify_fn, jobs);
            out.status = out.verification->verdict == TreeVerdict::ProvenTrue ? ReductionStatus::ProvenTrue
                                                                             : ReductionStatus::Inconclusive;
        }
    } else {
        out = reduce(st, policy, c.cfg, c.verify_fn, jobs);
    }

    if (o.emit == "dot") std::cout << io::to_dot(out.tree, out.verification ? &*out.verification : nullptr);
    else emit(io::to_json(out));
    switch (out.status) {
        case ReductionStatus::ProvenTrue: return ok;
        case ReductionStatus::Inconclusive: return not_proven;
        case ReductionStatus::Ineligible:
            std::cerr << "reduction tree is ineligible: " << out.eligibility.offending.size()
                      << " leaves disagree with the root's abundance\n";
            return ineligible;
    }
    return not_proven;
}

struct BoundsOpts {
    Count c = 0;
    Count o_plus_y = 0;
    Count o_minus_y = 0;
};

int cmd_bounds(const Context& c, const std::string& input, const BoundsOpts& o) {
    const auto shape = read_shape(input);
    std::optional<TransferInputs> transfer;
    if (o.c > 0) {
        transfer = TransferInputs{o.c, o.o_plus_y, o.o_minus_y};
        halving_transfer(shape, o.c, o.o_plus_y, o.o_minus_y);  // report a failed hypothesis as an error
    }
    const auto reports = bound_reports(shape, transfer);
    if (reports.empty()) throw io::ParseError("no bounds apply to a single-factor shape");
    if (c.csv) {
        std::cout << io::bounds_csv(reports);
    } else {
        io::Json arr = io::Json::array();
        for (const auto& r : reports) arr.push_back(io::to_json(r));
        emit(arr);
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Defectivity checks for secant varieties of Segre varieties"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--trials", g.trials, "Random trials per statement")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Base seed");
    app.add_option("--max-entries", g.max_entries, "Cap on matrix entries per verification");
    app.add_option("--cache", g.cache_path, "JSONL result cache");
    app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    std::string input;
    auto* check = app.add_subcommand("check", "Verify one statement");
    check->add_option("statement", input, "Statement JSON or @file")->required();

    auto* scan = app.add_subcommand("scan-secants", "Verify T(shape; s; 0) for s up to the generic rank");
    scan->add_option("shape", input, "Shape JSON, @file or n1,n2,...")->required();

    SafetyOpts so;
    auto* safety = app.add_subcommand("safety", "Compute the safety bounds of a shape");
    safety->add_option("shape", input, "Shape JSON, @file or n1,n2,...")->required();
    safety->add_flag("--o-plus-only", so.o_plus_only, "Skip the superabundant scan");
    safety->add_option("--max-level", so.max_level, "Highest room level of the subabundant scan");
    safety->add_option("--max-super-nodes", so.max_super_nodes, "Cap on superabundant statements examined");

    auto* conj = app.add_subcommand("conjecture", "Check the symmetry and formula of the safety bounds");
    conj->add_option("shape", input, "Shape JSON, @file or n1,n2,...")->required();
    conj->add_option("--max-level", so.max_level, "Highest room level of the subabundant scan");
    conj->add_option("--max-super-nodes", so.max_super_nodes, "Cap on superabundant statements examined");

    ReduceOpts ro;
    auto* red = app.add_subcommand("reduce", "Prove a statement through a reduction tree");
    red->add_option("statement", input, "Statement JSON or @file")->required();
    red->add_option("--leaf-dim", ro.leaf_dim, "Leaves have every n_i at most this")->check(CLI::NonNegativeNumber);
    red->add_option("--leaf-columns", ro.leaf_columns, "Leaves have at most this many columns (0 disables)")
        ->check(CLI::NonNegativeNumber);
    red->add_option("--retries", ro.retries, "Alternative splits tried after a failure")->check(CLI::NonNegativeNumber);
    red->add_option("--split", ro.split, "Force the root split (JSON or @file)");
    red->add_option("--emit", ro.emit, "Output format")->check(CLI::IsMember({"json", "dot"}));

    BoundsOpts bo;
    auto* bounds = app.add_subcommand("bounds", "Closed-form bounds for a shape");
    bounds->add_option("shape", input, "Shape JSON, @file or n1,n2,...")->required();
    bounds->add_option("--c", bo.c, "Base dimension c for the halving transfer")->check(CLI::PositiveNumber);
    bounds->add_option("--o-plus-y", bo.o_plus_y, "O+ of (P^{c-1})^k");
    bounds->add_option("--o-minus-y", bo.o_minus_y, "O- of (P^{c-1})^k");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : malformed;
    }

    try {
        const Context c = make_context(g);
        if (*check) return cmd_check(c, input);
        if (*scan) return cmd_scan(c, input);
        if (*safety) return cmd_safety(c, input, so, g.jobs);
        if (*conj) return cmd_conjecture(c, input, so, g.jobs);
        if (*red) return cmd_reduce(c, input, ro, g.jobs);
        if (*bounds) return cmd_bounds(c, input, bo);
    } catch (const CapExceeded& e) {
        std::cerr << e.what() << '\n';
        return cap;
    } catch (const IneligibleTree& e) {
        emit(io::to_json(e.report()));
        std::cerr << e.what() << '\n';
        return ineligible;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return malformed;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return malformed;
    }
    return malformed;
}
