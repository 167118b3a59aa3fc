#include "segre/cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>

#include "segre/io.hpp"

namespace segre {

namespace {

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

CacheEntry make_cache_entry(const VerificationResult& r) {
    return CacheEntry{canonicalize(r.statement), r.verdict, r.best_rank, r.expected, r.primes_used,
                      r.seeds_used, utc_now(), io::tool_version};
}

std::string serialize(const CacheEntry& e) {
    io::Json j;
    j["statement"] = io::to_json(e.statement);
    j["verdict"] = to_string(e.verdict);
    j["rank"] = e.rank;
    j["expected"] = e.expected;
    j["primes"] = e.primes;
    j["seeds"] = e.seeds;
    j["timestamp"] = e.timestamp;
    j["tool_version"] = e.tool_version;
    return j.dump();
}

CacheEntry parse_cache_entry(const std::string& line) {
    const auto j = io::read_input(line);
    try {
        CacheEntry e;
        e.statement = io::parse_statement(j.at("statement"));
        const auto verdict = j.at("verdict").get<std::string>();
        if (verdict == "ProvenTrue") e.verdict = Verdict::ProvenTrue;
        else if (verdict == "ProbablyFalse") e.verdict = Verdict::ProbablyFalse;
        else throw io::ParseError("unknown verdict " + verdict);
        e.rank = j.at("rank").get<Count>();
        e.expected = j.at("expected").get<Count>();
        e.primes = j.at("primes").get<std::vector<std::uint32_t>>();
        e.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        e.timestamp = j.at("timestamp").get<std::string>();
        e.tool_version = j.at("tool_version").get<std::string>();
        return e;
    } catch (const io::Json::exception& ex) {
        throw io::ParseError(std::string("malformed cache entry: ") + ex.what());
    }
}

bool stronger(const CacheEntry& candidate, const CacheEntry& current) {
    if (candidate.verdict != current.verdict) return candidate.verdict == Verdict::ProvenTrue;
    return candidate.verdict == Verdict::ProbablyFalse && candidate.rank > current.rank;
}

ResultCache::ResultCache(std::filesystem::path path) : path_(std::move(path)) {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            merge(parse_cache_entry(line));
        } catch (const std::exception&) {
            ++skipped_;
        }
    }
}

void ResultCache::merge(CacheEntry e) {
    const auto it = entries_.find(e.statement);
    if (it == entries_.end()) entries_.emplace(e.statement, std::move(e));
    else if (stronger(e, it->second)) it->second = std::move(e);
}

std::optional<CacheEntry> ResultCache::lookup(const Statement& st) const {
    std::lock_guard lock(mutex_);
    const auto it = entries_.find(canonicalize(st));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ResultCache::record(const VerificationResult& r) {
    auto e = make_cache_entry(r);
    const std::string line = serialize(e) + "\n";
    std::lock_guard lock(mutex_);
    const int fd = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
    if (fd < 0) throw std::runtime_error("segre: cannot open cache " + path_.string() + ": " + std::strerror(errno));
    ::flock(fd, LOCK_EX);
    std::size_t done = 0;
    while (done < line.size()) {
        const ssize_t n = ::write(fd, line.data() + done, line.size() - done);
        if (n < 0) {
            if (errno == EINTR) continue;
            ::flock(fd, LOCK_UN);
            ::close(fd);
            throw std::runtime_error("segre: cannot write cache " + path_.string());
        }
        done += static_cast<std::size_t>(n);
    }
    ::flock(fd, LOCK_UN);
    ::close(fd);
    merge(std::move(e));
}

std::size_t ResultCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

VerifyFn cached_verify(ResultCache& cache, VerifyFn inner) {
    return [&cache, inner = std::move(inner)](const Statement& st, const VerifyConfig& cfg) {
        if (const auto hit = cache.lookup(st); hit && hit->verdict == Verdict::ProvenTrue) {
            VerificationResult r;
            r.statement = st;
            r.verdict = Verdict::ProvenTrue;
            r.best_rank = hit->rank;
            r.expected = hit->expected;
            r.trials_run = static_cast<int>(hit->primes.size());
            r.primes_used = hit->primes;
            r.seeds_used = hit->seeds;
            return r;
        }
        auto r = inner(st, cfg);
        cache.record(r);
        return r;
    };
}

}  // namespace segre
