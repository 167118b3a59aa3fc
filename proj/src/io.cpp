#include "segre/io.hpp"

#include <fstream>
#include <sstream>

namespace segre::io {

Json read_input(const std::string& arg) {
    std::string text = arg;
    if (!arg.empty() && arg[0] == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw ParseError("cannot read " + arg.substr(1));
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

namespace {

Count parse_count(const Json& j, const char* what) {
    if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
    if (j.is_number_unsigned()) {
        const auto v = j.get<std::uint64_t>();
        if (v > static_cast<std::uint64_t>(std::numeric_limits<Count>::max()))
            throw ParseError(std::string(what) + " is too large");
        return static_cast<Count>(v);
    }
    const auto v = j.get<std::int64_t>();
    if (v < 0) throw ParseError(std::string(what) + " must be nonnegative");
    return v;
}

std::vector<Count> parse_counts(const Json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of integers");
    std::vector<Count> out;
    for (const auto& x : j) out.push_back(parse_count(x, what));
    return out;
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

template <class F>
auto guarded(F&& f) {
    try {
        return f();
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(e.what());
    }
}

std::string lower(const char* s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

SegreShape parse_shape(const Json& j) {
    const Json& dims = j.is_object() ? field(j, "shape") : j;
    return guarded([&] { return SegreShape(parse_counts(dims, "shape")); });
}

Statement parse_statement(const Json& j) {
    if (!j.is_object()) throw ParseError("a statement must be a JSON object");
    const auto dims = parse_counts(field(j, "shape"), "shape");
    const Count s = parse_count(field(j, "s"), "s");
    const auto a = j.contains("a") ? parse_counts(j.at("a"), "a") : std::vector<Count>(dims.size(), 0);
    return guarded([&] { return Statement(dims, s, a); });
}

Split parse_split(const Json& j, const Statement& st) {
    if (!j.is_object()) throw ParseError("a split must be a JSON object");
    const auto factor = static_cast<std::size_t>(parse_count(field(j, "factor"), "factor"));
    if (factor >= st.factors()) throw ParseError("split factor out of range");
    Split sp;
    sp.factor = factor;
    sp.left_dim = parse_count(field(j, "left_dim"), "left_dim");
    sp.right_dim = st.dims()[factor] - 1 - sp.left_dim;
    sp.left_s = parse_count(field(j, "left_s"), "left_s");
    sp.right_s = st.s() - sp.left_s;
    sp.left_a = j.contains("left_a") ? parse_counts(j.at("left_a"), "left_a") : std::vector<Count>(st.factors(), 0);
    if (sp.left_a.size() != st.factors()) throw ParseError("left_a has the wrong length");
    sp.right_a.assign(st.factors(), 0);
    for (std::size_t i = 0; i < st.factors(); ++i)
        if (i != factor) sp.right_a[i] = st.a()[i] - sp.left_a[i];
    guarded([&] { return apply_split(st, sp); });
    return sp;
}

Json to_json(const SegreShape& shape) { return Json(shape.dims()); }

Json to_json(const Statement& st) {
    Json j;
    j["shape"] = st.dims();
    j["s"] = st.s();
    j["a"] = st.a();
    return j;
}

Json to_json(const VerificationResult& r) {
    Json j;
    j["statement"] = to_json(r.statement);
    j["verdict"] = to_string(r.verdict);
    j["rank"] = r.best_rank;
    j["expected"] = r.expected;
    j["deficiency"] = r.deficiency();
    j["room"] = room(r.statement);
    j["abundance"] = lower(to_string(abundance(r.statement)));
    j["trials_run"] = r.trials_run;
    j["primes"] = r.primes_used;
    j["seeds"] = r.seeds_used;
    return j;
}

Json to_json(const Split& sp) {
    Json j;
    j["factor"] = sp.factor;
    j["left_dim"] = sp.left_dim;
    j["right_dim"] = sp.right_dim;
    j["left_s"] = sp.left_s;
    j["right_s"] = sp.right_s;
    j["left_a"] = sp.left_a;
    j["right_a"] = sp.right_a;
    return j;
}

Json to_json(const EligibilityReport& rep) {
    Json j;
    j["eligible"] = rep.eligible;
    Json ab = Json::array();
    for (auto a : rep.leaf_abundances) ab.push_back(lower(to_string(a)));
    j["leaf_abundances"] = ab;
    j["offending"] = rep.offending;
    Json st = Json::array();
    for (const auto& s : rep.offending_statements) st.push_back(to_json(s));
    j["offending_statements"] = st;
    return j;
}

namespace {

// Leaf verdicts in leaves() order; internal nodes are proven when every leaf
// below them is (the tree being eligible).
struct Verdicts {
    const TreeVerification* v = nullptr;
    std::size_t next_leaf = 0;
};

Json node_json(const ReductionNode& n, Verdicts& vs, bool& all_proven) {
    Json j;
    j["statement"] = to_json(n.statement);
    j["room"] = n.room;
    j["abundance"] = lower(to_string(n.abundance));
    j["split"] = n.split ? to_json(*n.split) : Json(nullptr);
    if (n.stripped) j["stripped"] = to_json(*n.stripped);
    Json children = Json::array();
    bool proven = true;
    if (n.is_leaf()) {
        if (vs.v) {
            const auto& r = vs.v->leaf_results.at(vs.next_leaf++);
            proven = r.proven();
            j["verdict"] = to_string(r.verdict);
            j["result"] = to_json(r);
        }
    } else {
        for (const auto& c : n.children) {
            bool p = true;
            children.push_back(node_json(c, vs, p));
            proven = proven && p;
        }
        if (vs.v) j["verdict"] = proven ? "ProvenTrue" : "Inconclusive";
    }
    j["children"] = children;
    all_proven = proven;
    return j;
}

void node_dot(const ReductionNode& n, Verdicts& vs, std::ostringstream& out, int& counter, bool& all_proven,
              int& id) {
    id = counter++;
    std::vector<int> kids;
    bool proven = true;
    for (const auto& c : n.children) {
        int cid = 0;
        bool p = true;
        node_dot(c, vs, out, counter, p, cid);
        kids.push_back(cid);
        proven = proven && p;
    }
    std::string verdict = "unverified";
    if (vs.v) {
        if (n.is_leaf()) {
            const auto& r = vs.v->leaf_results.at(vs.next_leaf++);
            proven = r.proven();
            verdict = to_string(r.verdict);
        } else {
            verdict = proven ? "ProvenTrue" : "Inconclusive";
        }
    }
    out << "  n" << id << " [label=\"" << to_string(n.statement) << " | " << n.room << " | "
        << lower(to_string(n.abundance)) << " | " << verdict << "\"];\n";
    for (int k : kids) out << "  n" << id << " -> n" << k << ";\n";
    all_proven = proven;
}

}  // namespace

Json tree_to_json(const ReductionTree& tree, const TreeVerification* verification) {
    Verdicts vs{verification, 0};
    bool proven = true;
    return node_json(tree, vs, proven);
}

std::string to_dot(const ReductionTree& tree, const TreeVerification* verification) {
    std::ostringstream out;
    out << "digraph reduction {\n  node [shape=box];\n";
    Verdicts vs{verification, 0};
    int counter = 0, id = 0;
    bool proven = true;
    node_dot(tree, vs, out, counter, proven, id);
    out << "}\n";
    return out.str();
}

Json to_json(const ReductionOutcome& out) {
    Json j;
    j["status"] = to_string(out.status);
    j["attempts"] = out.attempts;
    j["nodes"] = node_count(out.tree);
    j["depth"] = depth(out.tree);
    j["leaves"] = leaves(out.tree).size();
    j["eligibility"] = to_json(out.eligibility);
    j["tree"] = tree_to_json(out.tree, out.verification ? &*out.verification : nullptr);
    return j;
}

namespace {

Json scan_json(const ScanResult& s) {
    Json j;
    j["status"] = to_string(s.status);
    j["extreme_room"] = s.witnesses.empty() ? Json(nullptr) : Json(s.extreme_room);
    j["horizon"] = s.horizon;
    j["verified"] = s.verified;
    j["implied"] = s.implied;
    j["restarts"] = s.restarts;
    Json ws = Json::array();
    for (const auto& w : s.witnesses) {
        Json x;
        x["statement"] = to_json(w.statement);
        x["room"] = w.room;
        x["rank"] = w.result.best_rank;
        x["expected"] = w.result.expected;
        ws.push_back(x);
    }
    j["witnesses"] = ws;
    return j;
}

}  // namespace

Json to_json(const SafetyRegion& region) {
    Json j;
    j["shape"] = to_json(region.shape);
    j["o_plus"] = region.o_plus;
    j["o_plus_status"] = to_string(region.sub.status);
    if (region.super.status == BoundStatus::NotComputed) {
        j["o_minus"] = nullptr;
    } else {
        j["o_minus"] = region.o_minus;
    }
    j["o_minus_status"] = to_string(region.super.status);
    j["monte_carlo"] = region.monte_carlo;
    j["subabundant_scan"] = scan_json(region.sub);
    j["superabundant_scan"] = scan_json(region.super);
    return j;
}

Json to_json(const ConjectureReport& rep) {
    Json j;
    j["shape"] = to_json(rep.sorted_shape);
    j["bounds_exact"] = rep.bounds_exact;
    j["symmetric"] = rep.symmetric;
    j["formula_o_plus"] = rep.formula_o_plus;
    j["formula_holds"] = rep.formula_holds;
    if (rep.witness) {
        Json w;
        w["statement"] = to_json(*rep.witness);
        w["room"] = rep.witness_room;
        w["verdict"] = to_string(rep.witness_result->verdict);
        w["is_false"] = rep.witness_false;
        w["room_matches_min_false_superabundant"] = rep.witness_room_matches;
        j["witness"] = w;
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

Json rational_json(const Rational& q) {
    if (denominator(q) == 1 && numerator(q) >= std::numeric_limits<std::int64_t>::min() &&
        numerator(q) <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(numerator(q));
    return numerator(q).str() + "/" + denominator(q).str();
}

Json to_json(const BoundReport& rep) {
    Json j;
    j["shape"] = to_json(rep.shape);
    j["kind"] = to_string(rep.kind);
    Json vals;
    for (const auto& v : rep.values) vals[v.name] = rational_json(v.value);
    j["values"] = vals;
    j["assumptions"] = rep.assumptions;
    if (rep.witness) j["witness"] = to_json(*rep.witness);
    return j;
}

Json to_json(const SecantScan& scan) {
    Json j;
    j["shape"] = to_json(scan.shape);
    j["generic_rank"] = scan.generic_rank;
    j["complete"] = !scan.cap_error;
    j["all_proven"] = scan.all_proven();
    j["verified"] = scan.verified;
    Json rows = Json::array();
    for (const auto& r : scan.rows) {
        Json x;
        x["s"] = r.s;
        x["verdict"] = to_string(r.verdict);
        x["rank"] = r.rank;
        x["expected"] = r.expected;
        x["source"] = r.implied ? "implied" : "verified";
        rows.push_back(x);
    }
    j["rows"] = rows;
    if (scan.cap_error) j["error"] = *scan.cap_error;
    return j;
}

namespace {

std::string joined(const std::vector<Count>& v, char sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(v[i]);
    }
    return out;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

std::string result_csv(const std::vector<VerificationResult>& results) {
    std::ostringstream out;
    out << "statement,verdict,rank,expected,room,trials_run\n";
    for (const auto& r : results)
        out << quoted(to_string(r.statement)) << ',' << to_string(r.verdict) << ',' << r.best_rank << ','
            << r.expected << ',' << room(r.statement) << ',' << r.trials_run << '\n';
    return out.str();
}

std::string secants_csv(const SecantScan& scan) {
    std::ostringstream out;
    out << "s,verdict,rank,expected,source\n";
    for (const auto& r : scan.rows)
        out << r.s << ',' << to_string(r.verdict) << ',' << r.rank << ',' << r.expected << ','
            << (r.implied ? "implied" : "verified") << '\n';
    return out.str();
}

std::string safety_csv(const std::vector<SafetyRegion>& regions) {
    std::ostringstream out;
    out << "shape,o_plus,o_minus,source\n";
    for (const auto& r : regions) {
        out << quoted(joined(r.shape.dims(), ',')) << ',' << r.o_plus << ',';
        if (r.super.status == BoundStatus::NotComputed) out << "";
        else out << r.o_minus;
        out << ",scan:" << to_string(r.sub.status) << '/' << to_string(r.super.status) << '\n';
    }
    return out.str();
}

std::string bounds_csv(const std::vector<BoundReport>& reports) {
    std::ostringstream out;
    out << "shape,kind,name,value\n";
    for (const auto& r : reports)
        for (const auto& v : r.values)
            out << quoted(joined(r.shape.dims(), ',')) << ',' << to_string(r.kind) << ',' << v.name << ','
                << rational_json(v.value).dump() << '\n';
    return out.str();
}

}  // namespace segre::io
