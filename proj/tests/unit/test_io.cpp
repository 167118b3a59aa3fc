#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "segre/cache.hpp"
#include "segre/io.hpp"

using namespace segre;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    auto p = fs::temp_directory_path() / ("segre_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove(p);
    return p;
}

}  // namespace

TEST_CASE("statement parsing") {
    const auto st = io::parse_statement(io::read_input(R"({"shape":[1,1,1],"s":2,"a":[0,0,1]})"));
    CHECK(st == Statement({1, 1, 1}, 2, {0, 0, 1}));
    CHECK(io::parse_statement(io::read_input(R"({"shape":[1,2],"s":1})")) == Statement({1, 2}, 1, {0, 0}));
    CHECK(io::parse_statement(io::to_json(st)) == st);

    for (const char* bad : {R"({"shape":[1,1,1],"s":2)", R"({"shape":[1,1,1]})", R"({"shape":[1,-1,1],"s":2})",
                            R"({"shape":[1,1,1],"s":2,"a":[0,0]})", R"({"shape":[1,1,1],"s":"2"})", R"([1,1,1])",
                            R"({"shape":[],"s":0})", R"({"shape":[1.5],"s":0})"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(io::parse_statement(io::read_input(bad)), io::ParseError);
    }
    CHECK_THROWS_AS(io::read_input("@/nonexistent/file.json"), io::ParseError);
}

TEST_CASE("shape and split parsing") {
    CHECK(io::parse_shape(io::read_input("[1,2,3]")) == SegreShape({1, 2, 3}));
    CHECK(io::parse_shape(io::read_input(R"({"shape":[4,4]})")) == SegreShape({4, 4}));
    CHECK_THROWS_AS(io::parse_shape(io::read_input("[]")), io::ParseError);

    const Statement st({1, 1, 3}, 2, {1, 0, 0});
    const auto sp = io::parse_split(io::read_input(R"({"factor":2,"left_dim":1,"left_s":1,"left_a":[1,0,0]})"), st);
    CHECK(sp.right_dim == 1);
    CHECK(sp.right_s == 1);
    CHECK(sp.right_a == std::vector<Count>{0, 0, 0});
    CHECK_THROWS_AS(io::parse_split(io::read_input(R"({"factor":2,"left_dim":3,"left_s":1})"), st), io::ParseError);
    CHECK_THROWS_AS(io::parse_split(io::read_input(R"({"factor":5,"left_dim":0,"left_s":1})"), st), io::ParseError);
    CHECK_THROWS_AS(io::parse_split(io::read_input(R"({"factor":2,"left_dim":1,"left_s":3})"), st), io::ParseError);
}

TEST_CASE("@file input") {
    const auto p = temp_file("input");
    std::ofstream(p) << R"({"shape":[2,2,2],"s":4})";
    CHECK(io::parse_statement(io::read_input("@" + p.string())) == Statement({2, 2, 2}, 4, {0, 0, 0}));
    fs::remove(p);
}

TEST_CASE("result JSON fields") {
    const auto r = verify(Statement({1, 1, 1, 1}, 3, {0, 0, 0, 0}));
    const auto j = io::to_json(r);
    CHECK(j["verdict"] == "ProbablyFalse");
    CHECK(j["rank"] == 14);
    CHECK(j["expected"] == 15);
    CHECK(j["deficiency"] == 1);
    CHECK(j["primes"].size() == 3);
    CHECK(j.dump() == io::to_json(verify(Statement({1, 1, 1, 1}, 3, {0, 0, 0, 0}))).dump());
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys.front() == "statement");
    CHECK(keys.back() == "seeds");
}

TEST_CASE("rationals in JSON") {
    CHECK(io::rational_json(Rational(3)) == 3);
    CHECK(io::rational_json(Rational(-1, 8)) == "-1/8");
    CHECK(io::rational_json(Rational(BigInt(1) << 70)).is_string());
}

TEST_CASE("tree JSON and DOT") {
    TreePolicy p;
    p.leaf_max_dim = 1;
    p.leaf_max_columns = 0;
    const auto out = reduce(Statement({1, 1, 3}, 2, {0, 0, 0}), p, VerifyConfig{});
    const auto j = io::to_json(out);
    CHECK(j["status"] == "ProvenTrue");
    CHECK(j["nodes"] == 3);
    CHECK(j["tree"]["children"].size() == 2);
    CHECK(j["tree"]["split"]["factor"] == 2);
    CHECK(j["tree"]["children"][0]["verdict"] == "ProvenTrue");
    CHECK(j["tree"]["verdict"] == "ProvenTrue");

    const auto dot = io::to_dot(out.tree, &*out.verification);
    CHECK(dot.find("T(1,1,3;2;0,0,0) | 4 | subabundant | ProvenTrue") != std::string::npos);
    CHECK(dot.find("T(1,1,1;1;0,0,1) | 2 | subabundant | ProvenTrue") != std::string::npos);
    CHECK(dot.find("n0 -> n1") != std::string::npos);
    CHECK(io::to_dot(out.tree).find("unverified") != std::string::npos);
}

TEST_CASE("CSV tables") {
    const auto region = safety_region(SegreShape({1, 1, 1}), SafetyConfig{});
    CHECK(io::safety_csv({region}) == "shape,o_plus,o_minus,source\n\"1,1,1\",1,-1,scan:exact/exact\n");
    const auto scan = scan_secants(SegreShape({1, 1, 1, 1}), VerifyConfig{});
    const auto csv = io::secants_csv(scan);
    CHECK(csv.find("3,ProbablyFalse,14,15,verified") != std::string::npos);
    const auto bounds = io::bounds_csv(bound_reports(SegreShape({3, 3, 3, 3})));
    CHECK(bounds.find("power_of_two_threshold,s_max,1") != std::string::npos);
}

TEST_CASE("cache entries round-trip bit-exactly") {
    std::mt19937_64 rng(88);
    for (int it = 0; it < 200; ++it) {
        CacheEntry e;
        std::vector<Count> dims(1 + rng() % 5), a(dims.size());
        for (auto& n : dims) n = static_cast<Count>(rng() % 9);
        for (auto& x : a) x = static_cast<Count>(rng() % 9);
        e.statement = canonicalize(Statement(dims, static_cast<Count>(rng() % 20), a));
        e.verdict = rng() % 2 ? Verdict::ProvenTrue : Verdict::ProbablyFalse;
        e.rank = static_cast<Count>(rng() % 1000);
        e.expected = e.rank + static_cast<Count>(rng() % 3);
        for (std::size_t i = 0; i < rng() % 4; ++i) {
            e.primes.push_back(static_cast<std::uint32_t>(rng()));
            e.seeds.push_back(rng());
        }
        e.timestamp = "2026-10-16T12:00:00Z";
        e.tool_version = io::tool_version;
        const auto line = serialize(e);
        const auto back = parse_cache_entry(line);
        CHECK(back == e);
        CHECK(serialize(back) == line);
    }
    CHECK_THROWS_AS(parse_cache_entry("{\"statement\":1}"), io::ParseError);
    CHECK_THROWS_AS(parse_cache_entry("not json"), io::ParseError);
}

TEST_CASE("cache merge keeps the strongest verdict") {
    CacheEntry weak{canonicalize(Statement({1, 1, 1}, 2, {0, 0, 0})), Verdict::ProbablyFalse, 7, 8, {}, {}, "t", "v"};
    CacheEntry weaker = weak;
    weaker.rank = 6;
    CacheEntry proof = weak;
    proof.verdict = Verdict::ProvenTrue;
    proof.rank = 8;
    CHECK(stronger(proof, weak));
    CHECK_FALSE(stronger(weak, proof));
    CHECK(stronger(weak, weaker));
    CHECK_FALSE(stronger(weaker, weak));
    CHECK_FALSE(stronger(proof, proof));

    const auto p = temp_file("merge");
    {
        std::ofstream out(p);
        out << serialize(weak) << "\n" << serialize(proof) << "\ngarbage\n" << serialize(weaker) << "\n";
    }
    ResultCache cache(p);
    CHECK(cache.size() == 1);
    CHECK(cache.skipped_lines() == 1);
    const auto hit = cache.lookup(Statement({1, 1, 1}, 2, {0, 0, 0}));
    REQUIRE(hit.has_value());
    CHECK(hit->verdict == Verdict::ProvenTrue);
    fs::remove(p);
}

TEST_CASE("cached verification reuses proofs and recomputes evidence") {
    const auto p = temp_file("verify");
    int calls = 0;
    const VerifyFn counting = [&](const Statement& st, const VerifyConfig& cfg) {
        ++calls;
        return verify(st, cfg);
    };
    const Statement ok({1, 1, 1}, 2, {0, 0, 0});
    const Statement bad({1, 1, 1, 1}, 3, {0, 0, 0, 0});
    VerificationResult first_ok;
    {
        ResultCache cache(p);
        const auto fn = cached_verify(cache, counting);
        first_ok = fn(ok, VerifyConfig{});
        fn(bad, VerifyConfig{});
        CHECK(calls == 2);
        CHECK(fn(ok, VerifyConfig{}) == first_ok);
        // permuted statements share the canonical key
        fn(Statement({1, 2, 1}, 1, {0, 0, 1}), VerifyConfig{});
        CHECK(calls == 3);
        CHECK(fn(Statement({2, 1, 1}, 1, {0, 1, 0}), VerifyConfig{}).proven());
        CHECK(calls == 3);
        fn(bad, VerifyConfig{});
        CHECK(calls == 4);
    }
    ResultCache reloaded(p);
    CHECK(reloaded.size() == 3);
    calls = 0;
    const auto fn = cached_verify(reloaded, counting);
    CHECK(fn(ok, VerifyConfig{}) == first_ok);
    CHECK(calls == 0);
    std::ifstream in(p);
    std::size_t lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    CHECK(lines == 4);
    fs::remove(p);
}

TEST_CASE("concurrent appends produce whole lines") {
    const auto p = temp_file("concurrent");
    {
        ResultCache a(p), b(p);
        std::vector<std::thread> workers;
        for (int t = 0; t < 4; ++t) {
            workers.emplace_back([&, t] {
                auto& cache = t % 2 ? a : b;
                for (Count s = 0; s < 25; ++s) cache.record(verify(Statement({1, 2, 2}, s, {0, 0, Count(t)})));
            });
        }
        for (auto& w : workers) w.join();
    }
    ResultCache merged(p);
    CHECK(merged.skipped_lines() == 0);
    CHECK(merged.size() == 100);
    fs::remove(p);
}
