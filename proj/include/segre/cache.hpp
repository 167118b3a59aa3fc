#pragma once

// Append-only JSONL cache of verification results keyed by canonical
// statement. Loading merges duplicate keys keeping the strongest verdict;
// only ProvenTrue entries are reused, ProbablyFalse ones are recomputed.

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "segre/statement.hpp"
#include "segre/tangent.hpp"

namespace segre {

struct CacheEntry {
    Statement statement;  // canonical form
    Verdict verdict = Verdict::ProbablyFalse;
    Count rank = 0;
    Count expected = 0;
    std::vector<std::uint32_t> primes;
    std::vector<std::uint64_t> seeds;
    std::string timestamp;
    std::string tool_version;

    bool operator==(const CacheEntry&) const = default;
};

CacheEntry make_cache_entry(const VerificationResult& r);
std::string serialize(const CacheEntry& e);
/// Throws io::ParseError on a malformed line.
CacheEntry parse_cache_entry(const std::string& line);

/// True if `candidate` should replace `current`: a proof beats evidence, and
/// between two ProbablyFalse entries the higher rank wins.
bool stronger(const CacheEntry& candidate, const CacheEntry& current);

class ResultCache {
public:
    /// Loads the file if it exists. Malformed lines are skipped and counted.
    explicit ResultCache(std::filesystem::path path);

    std::optional<CacheEntry> lookup(const Statement& st) const;
    /// Appends one line under an exclusive file lock and merges in memory.
    void record(const VerificationResult& r);

    std::size_t size() const;
    std::size_t skipped_lines() const noexcept { return skipped_; }
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    void merge(CacheEntry e);

    std::filesystem::path path_;
    mutable std::mutex mutex_;
    std::unordered_map<Statement, CacheEntry, StatementHash> entries_;
    std::size_t skipped_ = 0;
};

/// Verification backed by the cache: a cached proof is returned without any
/// rank computation, everything else is computed and recorded.
VerifyFn cached_verify(ResultCache& cache, VerifyFn inner = verify);

}  // namespace segre
