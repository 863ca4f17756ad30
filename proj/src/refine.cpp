#include "rhowalk/refine.hpp"

#include <algorithm>
#include <memory>
#include <numeric>

namespace rhowalk {

namespace {

// Points after the last chosen one that still satisfy the chain condition
// r(k_0, m) < ... < r(k_s, m), with r(k_s, m) alongside.
struct Chain {
    std::vector<Index> points;
    std::vector<RhoBar> last_r;
};

using ChainPtr = std::shared_ptr<const Chain>;

struct Scored {
    Index m = 0;
    std::uint64_t score = 0;
    bool viable = false;
};

void check_inputs(const PointEnumeration& space, const Labeling& labeling, std::size_t window) {
    if (window > space.size()) {
        throw DomainError("window " + std::to_string(window) + " exceeds the " + std::to_string(space.size()) +
                          " enumerated points");
    }
    if (window > labeling.size()) {
        throw DomainError("window " + std::to_string(window) + " exceeds the " + std::to_string(labeling.size()) +
                          " labels");
    }
}

class Engine {
public:
    Engine(const PointEnumeration& space, const Labeling& labeling, const Walker& walker, const RefineParams& params,
           RefineStats& stats)
        : space_(space), labeling_(labeling), walker_(walker), params_(params), stats_(stats) {}

    // Chain after appending m; `prev` is the chain of the current last point,
    // or null for an empty state. At most `limit` points after m are examined.
    ChainPtr extend(const Chain* prev, Index m, std::size_t limit = static_cast<std::size_t>(-1)) const {
        auto out = std::make_shared<Chain>();
        const Ordinal& label = labeling_.label(m);
        if (prev == nullptr) {
            const Index stop = m + 1 + std::min<std::size_t>(limit, params_.window - m - 1);
            for (Index next = m + 1; next < stop; ++next) {
                out->points.push_back(next);
                out->last_r.push_back(walker_.rhobar(label, labeling_.label(next)));
            }
            stats_.rhobar_evaluations += out->points.size();
            return out;
        }
        const auto start = static_cast<std::size_t>(
            std::upper_bound(prev->points.begin(), prev->points.end(), m) - prev->points.begin());
        const std::size_t stop = start + std::min(limit, prev->points.size() - start);
        for (std::size_t p = start; p < stop; ++p) {
            const Index next = prev->points[p];
            const RhoBar r = walker_.rhobar(label, labeling_.label(next));
            if (prev->last_r[p] < r) {
                out->points.push_back(next);
                out->last_r.push_back(r);
            }
        }
        stats_.rhobar_evaluations += stop - start;
        return out;
    }

    ChainPtr chain_of(std::span<const Index> chosen) const {
        ChainPtr chain;
        for (const Index k : chosen) {
            chain = extend(chain.get(), k);
        }
        return chain;
    }

    // Centre and radius index prescribed for `position`; `last` stands in for
    // the parent when it is not chosen yet.
    std::pair<Index, std::uint64_t> ball_for(std::span<const Index> chosen, std::size_t position, Index last) const {
        const SigmaParent parent = sigma_parent(position);
        return {parent.parent < chosen.size() ? chosen[parent.parent] : last, parent.last};
    }

    // Ball-and-chain filter for position chosen.size().
    std::vector<Index> pool(std::span<const Index> chosen, const Chain* chain) const {
        std::vector<Index> out;
        if (chosen.empty()) {
            out.resize(params_.window);
            std::iota(out.begin(), out.end(), Index{0});
            return out;
        }
        const auto [centre, j] = ball_for(chosen, chosen.size(), chosen.back());
        for (const Index m : chain->points) {
            if (in_ball(space_, m, centre, j)) {
                out.push_back(m);
            }
        }
        return out;
    }

    // Scores m as the next point after `chosen` from the next `horizon`
    // points of the current chain. Viable once one of the survivors can fill
    // the following position.
    Scored assess(std::span<const Index> chosen, const Chain* prev, Index m) const {
        const ChainPtr future = extend(prev, m, params_.horizon);
        Scored out{m, 0, chosen.size() + 1 > params_.target};
        if (!out.viable) {
            const auto [centre, j] = ball_for(chosen, chosen.size() + 1, m);
            out.viable = std::any_of(future->points.begin(), future->points.end(),
                                     [&](Index n) { return in_ball(space_, n, centre, j); });
        }
        for (std::uint64_t w = 0; w <= params_.lookahead; ++w) {
            std::vector<Index> near;
            for (const Index n : future->points) {
                if (in_ball(space_, n, m, w)) {
                    near.push_back(n);
                }
            }
            if (near.empty()) {
                break; // balls are nested
            }
            out.score += kernel(space_, std::move(near), params_.depth).size();
        }
        return out;
    }

private:
    const PointEnumeration& space_;
    const Labeling& labeling_;
    const Walker& walker_;
    const RefineParams& params_;
    RefineStats& stats_;
};

// Viable first, then by score, ties by index.
void order_by_score(std::vector<Scored>& batch) {
    std::stable_sort(batch.begin(), batch.end(), [](const Scored& a, const Scored& b) {
        return a.viable != b.viable ? a.viable : a.score > b.score;
    });
}

} // namespace

std::vector<Index> candidates(const RefinementState& state, const PointEnumeration& space, const Labeling& labeling,
                              const Walker& walker, const RefineParams& params) {
    RefineParams p = params;
    p.window = state.window;
    p.target = std::max(p.target, state.chosen.size() + 1);
    check_inputs(space, labeling, p.window);
    RefineStats stats;
    Engine engine(space, labeling, walker, p, stats);
    const ChainPtr chain = engine.chain_of(state.chosen);
    std::vector<Index> pool = engine.pool(state.chosen, chain.get());
    if (state.chosen.empty()) {
        return pool;
    }
    std::vector<Scored> scored;
    scored.reserve(pool.size());
    for (const Index m : pool) {
        scored.push_back(engine.assess(state.chosen, chain.get(), m));
    }
    order_by_score(scored);
    std::vector<Index> out;
    out.reserve(scored.size());
    for (const auto& s : scored) {
        out.push_back(s.m);
    }
    return out;
}

std::uint64_t largeness_score(const RefinementState& state, Index m, const PointEnumeration& space,
                              const Labeling& labeling, const Walker& walker, const RefineParams& params) {
    RefineParams p = params;
    p.window = state.window;
    p.target = std::max(p.target, state.chosen.size() + 1);
    check_inputs(space, labeling, p.window);
    RefineStats stats;
    Engine engine(space, labeling, walker, p, stats);
    const ChainPtr chain = engine.chain_of(state.chosen);
    return engine.assess(state.chosen, chain.get(), m).score;
}

RefinementResult refine(const PointEnumeration& space, const Labeling& labeling, const Walker& walker,
                        const RefineParams& params) {
    if (params.window == 0) {
        throw DomainError("refine needs a non-empty window");
    }
    if (params.beam == 0) {
        throw DomainError("refine needs beam >= 1");
    }
    check_inputs(space, labeling, params.window);

    RefineStats stats;
    Engine engine(space, labeling, walker, params, stats);

    // levels[s] generates candidates for position s; chains[s] belongs to chosen[s].
    struct Level {
        std::vector<Index> pool;
        std::size_t cursor = 0;
        std::vector<Scored> ready;
        std::size_t ready_pos = 0;
        std::vector<Index> deferred;
        std::size_t deferred_pos = 0;
    };
    std::vector<Index> chosen;
    std::vector<ChainPtr> chains;
    std::vector<Level> levels;
    std::vector<Index> deepest;

    auto open_level = [&] {
        Level level;
        level.pool = engine.pool(chosen, chains.empty() ? nullptr : chains.back().get());
        levels.push_back(std::move(level));
    };

    // The root takes the least point first and is never scored; the last
    // position needs neither a score nor a chain. Candidates that look dead
    // within the horizon wait until the rest of the pool is spent.
    auto next_candidate = [&](Level& level, std::size_t s) -> std::optional<Index> {
        while (level.ready_pos == level.ready.size()) {
            if (level.cursor >= level.pool.size()) {
                if (level.deferred_pos < level.deferred.size()) {
                    return level.deferred[level.deferred_pos++];
                }
                return std::nullopt;
            }
            if (s == 0 || s == params.target) {
                return level.pool[level.cursor++];
            }
            const std::size_t end = std::min(level.pool.size(), level.cursor + params.beam);
            level.ready.clear();
            level.ready_pos = 0;
            for (; level.cursor < end; ++level.cursor) {
                Scored c = engine.assess(chosen, chains.back().get(), level.pool[level.cursor]);
                if (c.viable) {
                    level.ready.push_back(c);
                } else {
                    level.deferred.push_back(c.m);
                }
            }
            order_by_score(level.ready);
        }
        return level.ready[level.ready_pos++].m;
    };

    open_level();
    while (true) {
        const std::size_t s = chosen.size();
        const auto next = next_candidate(levels.back(), s);
        if (!next) {
            levels.pop_back();
            if (chosen.empty()) {
                throw SearchExhausted("search exhausted after " + std::to_string(stats.visited) +
                                          " nodes; deepest prefix has " + std::to_string(deepest.size()) +
                                          " points",
                                      deepest, stats);
            }
            chosen.pop_back();
            chains.pop_back();
            ++stats.backtracks;
            continue;
        }
        if (++stats.visited > params.budget) {
            throw SearchExhausted("search budget of " + std::to_string(params.budget) +
                                      " nodes spent; deepest prefix has " + std::to_string(deepest.size()) +
                                      " points",
                                  deepest, stats);
        }
        chains.push_back(s == params.target ? nullptr : engine.extend(chains.empty() ? nullptr : chains.back().get(), *next));
        chosen.push_back(*next);
        if (chosen.size() > deepest.size()) {
            deepest = chosen;
        }
        stats.max_depth = std::max<std::uint64_t>(stats.max_depth, chosen.size());
        if (chosen.size() == params.target + 1) {
            break;
        }
        open_level();
    }

    RefinementResult result;
    result.chosen = std::move(chosen);
    for (std::uint64_t t = 1; t < result.chosen.size(); ++t) {
        const SigmaParent p = sigma_parent(t);
        result.certificate.push_back({p.parent, p.last, t});
    }
    result.stats = stats;
    result.report = verify_result(result.chosen, space, labeling, params.depth, walker.cseq());
    return result;
}

// ---------------------------------------------------------------------------
// Verification. Shares no caches with the search.

namespace {

void record_failure(CheckTally& tally, std::string what) {
    ++tally.failures;
    if (tally.samples.size() < 8) {
        tally.samples.push_back(std::move(what));
    }
}

std::string triple_name(std::size_t a, std::size_t b, std::size_t c) {
    return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

} // namespace

VerifyReport verify_result(std::span<const Index> chosen, const PointEnumeration& space, const Labeling& labeling,
                           std::uint64_t depth, const CSequence& cseq) {
    for (std::size_t t = 1; t < chosen.size(); ++t) {
        if (!(chosen[t - 1] < chosen[t])) {
            throw DomainError("verify_result needs a strictly increasing sequence");
        }
    }
    const Walker walker(cseq);
    const std::size_t n = chosen.size();
    std::vector<RhoBar> r(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            r[a * n + b] = labeling.r(walker, chosen[a], chosen[b]);
        }
    }

    VerifyReport report;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            for (std::size_t c = b + 1; c < n; ++c) {
                ++report.shift.checked;
                ++report.strong.checked;
                if (!(r[a * n + b] <= r[b * n + c])) {
                    record_failure(report.shift, "r" + triple_name(chosen[a], chosen[b], chosen[c]) + ": " +
                                                     r[a * n + b].str() + " > " + r[b * n + c].str());
                }
                if (!(r[a * n + c] < r[b * n + c])) {
                    record_failure(report.strong, "r" + triple_name(chosen[a], chosen[b], chosen[c]) + ": " +
                                                      r[a * n + c].str() + " >= " + r[b * n + c].str());
                }
            }
        }
    }

    // Parent side: decode every position.
    for (std::uint64_t t = 1; t < n; ++t) {
        const SigmaParent p = sigma_parent(t);
        ++report.ball.checked;
        if (!in_ball(space, chosen[t], chosen[p.parent], p.last)) {
            record_failure(report.ball, "position " + std::to_string(t) + " not in A_{" +
                                            std::to_string(chosen[p.parent]) + "," + std::to_string(p.last) + "}");
        }
    }
    // Child side: enumerate (parent, j) forward until the child code leaves the prefix.
    for (std::uint64_t parent = 0; parent < n; ++parent) {
        for (std::uint64_t j = 0;; ++j) {
            const std::uint64_t child = sigma_child(parent, j);
            if (child >= n) {
                break;
            }
            ++report.coverage.checked;
            if (!in_ball(space, chosen[child], chosen[parent], j)) {
                record_failure(report.coverage, "child " + std::to_string(child) + " of position " +
                                                    std::to_string(parent) + " misses radius index " +
                                                    std::to_string(j));
            }
        }
    }

    if (n > 0) {
        const auto crowd = crowding_check(space, std::vector<Index>(chosen.begin(), chosen.end()), depth);
        if (const auto* failure = std::get_if<CrowdingFailure>(&crowd)) {
            report.crowding = *failure;
        }
    }
    return report;
}

ImplicationResult implication_check(std::vector<Index> members, const Labeling& labeling, const Walker& walker) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    const std::size_t n = members.size();
    std::vector<RhoBar> r(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            r[a * n + b] = labeling.r(walker, members[a], members[b]);
        }
    }
    ImplicationResult out{true, true};
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            for (std::size_t c = b + 1; c < n; ++c) {
                out.shift = out.shift && r[a * n + b] <= r[b * n + c];
                out.strong = out.strong && r[a * n + c] < r[b * n + c];
            }
        }
    }
    return out;
}

} // namespace rhowalk
