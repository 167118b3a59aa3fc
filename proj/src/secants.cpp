#include "segre/secants.hpp"

#include <algorithm>
#include <map>

namespace segre {

bool SecantScan::all_proven() const {
    return !cap_error && std::all_of(rows.begin(), rows.end(), [](const SecantRow& r) {
        return r.verdict == Verdict::ProvenTrue;
    });
}

SecantScan scan_secants(const SegreShape& shape, const VerifyConfig& cfg, const VerifyFn& verify_fn) {
    SecantScan out;
    out.shape = shape;
    out.generic_rank = generic_rank(shape);
    const std::vector<Count> zeros(shape.factors(), 0);
    const Count last_sub = shape.ambient_product() / shape.tangent_count();
    std::map<Count, SecantRow> rows;

    auto run = [&](Count s) {
        const Statement st(shape, s, zeros);
        SecantRow row{s, Verdict::ProbablyFalse, 0, expected_dim(st), false, std::nullopt};
        auto res = verify_fn(st, cfg);
        ++out.verified;
        row.verdict = res.verdict;
        row.rank = res.best_rank;
        row.result = std::move(res);
        rows[s] = row;
        return row.verdict == Verdict::ProvenTrue;
    };
    auto imply = [&](Count s) {
        const Statement st(shape, s, zeros);
        const Count d = expected_dim(st);
        rows[s] = SecantRow{s, Verdict::ProvenTrue, d, d, true, std::nullopt};
    };

    try {
        // subabundant side: s = last_sub down to 1
        Count s = last_sub;
        bool proven_sub = false;
        for (; s >= 1; --s) {
            if (run(s)) {
                proven_sub = true;
                break;
            }
        }
        if (proven_sub)
            for (Count t = s - 1; t >= 1; --t) imply(t);

        // superabundant side: from last_sub + 1 up to the first proof, which
        // always comes by s = prod (the spanning shortcut)
        const bool equi = last_sub * shape.tangent_count() == shape.ambient_product();
        Count up = last_sub + 1;
        if (!(equi && proven_sub && s == last_sub)) {
            while (!run(up)) ++up;
            ++up;
        }
        for (; up <= out.generic_rank; ++up) imply(up);
    } catch (const CapExceeded& e) {
        out.cap_error = e.what();
    }
    for (auto& [s, row] : rows) out.rows.push_back(std::move(row));
    return out;
}

}  // namespace segre
