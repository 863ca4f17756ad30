#pragma once

#include "rhowalk/error.hpp"
#include "rhowalk/ordinal.hpp"
#include "rhowalk/qspace.hpp"
#include "rhowalk/walks.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rhowalk {

// ---------------------------------------------------------------------------
// Finite sequences of naturals, coded parent-first:
//   code(<>) = 0,  code(s ^ <j>) = pair(code(s), j) + 1
// with the Cantor pairing pair(a, b) = (a+b)(a+b+1)/2 + b. Since
// pair(a, b) >= a, every sequence is coded after all of its initial segments.

std::uint64_t cantor_pair(std::uint64_t a, std::uint64_t b); // throws DomainError on overflow
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z);

struct SigmaParent {
    std::uint64_t parent; // code of the sequence without its last element
    std::uint64_t last;   // the last element
    friend bool operator==(const SigmaParent&, const SigmaParent&) = default;
};

SigmaParent sigma_parent(std::uint64_t code); // code > 0
std::uint64_t sigma_child(std::uint64_t parent, std::uint64_t j);
std::vector<std::uint64_t> sigma(std::uint64_t code);
std::uint64_t sigma_code(std::span<const std::uint64_t> seq);

// ---------------------------------------------------------------------------
// Labelings: strictly increasing n -> alpha_n, inducing r(k, l) = rhobar(alpha_k, alpha_l).

class Labeling {
public:
    // alpha_n = n.
    static Labeling identity(std::size_t count);
    // alpha_n = w*a + b where n = a(a+1)/2 + b and 0 <= b <= a, i.e. a is the
    // Cantor diagonal of n and b its position on the diagonal.
    static Labeling omega2_diagonal(std::size_t count);
    // Pseudo-random strictly increasing sequence below w^k driven by `seed`.
    static Labeling seeded_sample(std::uint32_t k, std::size_t count, std::uint64_t seed);
    // Lines `n CNF` covering 0..count-1.
    static Labeling parse(std::istream& in);
    static Labeling load(const std::string& path);
    // `identity`, `omega2-diagonal`, `seeded-sample:<k>` or a labeling file path.
    static Labeling from_spec(std::string_view spec, std::size_t count, std::uint64_t seed);
    // Throws InvalidLabeling unless strictly increasing.
    static Labeling from_labels(std::string name, std::vector<Ordinal> labels);

    const std::string& name() const noexcept { return name_; }
    std::size_t size() const noexcept { return labels_.size(); }
    const Ordinal& label(Index n) const;
    std::span<const Ordinal> labels() const noexcept { return labels_; }

    RhoBar r(const Walker& walker, Index k, Index l) const;

private:
    Labeling(std::string name, std::vector<Ordinal> labels);

    std::string name_;
    std::vector<Ordinal> labels_;
};

// ---------------------------------------------------------------------------
// Refinement

struct RefineParams {
    std::size_t target = 0;            // the result has target + 1 points
    std::size_t window = 0;            // candidates are drawn from [0, window)
    std::uint64_t depth = 1;           // J: crowding depth of the largeness score
    std::uint64_t lookahead = 1;       // D: balls A_{m,w}, w <= D, enter the score
    std::uint64_t budget = 1'000'000;  // max search nodes visited
    std::uint64_t seed = 0;
    std::size_t beam = 4;              // candidates scored together before trying
    std::size_t horizon = 4096;        // future points considered by the score
};

struct RefinementState {
    std::vector<Index> chosen; // k_0 < k_1 < ... < k_s
    std::size_t window = 0;
};

struct RefineStats {
    std::uint64_t visited = 0;
    std::uint64_t backtracks = 0;
    std::uint64_t max_depth = 0;
    std::uint64_t rhobar_evaluations = 0;
};

// Child position `child` = code(sigma_parent ^ <j>) was placed in A_{k_parent, j}.
struct CoverageEntry {
    std::uint64_t parent = 0;
    std::uint64_t j = 0;
    std::uint64_t child = 0;
};

struct CheckTally {
    std::uint64_t checked = 0;
    std::uint64_t failures = 0;
    std::vector<std::string> samples; // first few failures, human-readable
};

struct VerifyReport {
    CheckTally shift;    // r(k,l) <= r(l,m)
    CheckTally strong;   // r(k,m) <  r(l,m)
    CheckTally ball;     // k_t ∈ A_{k_parent(t), j(t)} for every t > 0
    CheckTally coverage; // every (parent, j) with child code in the prefix is covered
    std::optional<CrowdingFailure> crowding; // depth-J crowding of the prefix itself (informational)

    bool ok() const { return shift.failures + strong.failures + ball.failures + coverage.failures == 0; }
};

struct RefinementResult {
    std::vector<Index> chosen;
    std::vector<CoverageEntry> certificate;
    RefineStats stats;
    VerifyReport report;
};

class SearchExhausted : public Error {
public:
    SearchExhausted(const std::string& what, std::vector<Index> deepest, RefineStats stats)
        : Error(what), deepest_(std::move(deepest)), stats_(stats) {}

    const std::vector<Index>& deepest() const noexcept { return deepest_; }
    const RefineStats& stats() const noexcept { return stats_; }

private:
    std::vector<Index> deepest_;
    RefineStats stats_;
};

// Points that may extend `state` as k_{s+1}: m in (k_s, window), inside the
// ball prescribed by sigma_{s+1}, with r(k_0, m) < ... < r(k_s, m). Ordered by
// the largeness score (largest first), ties by index.
std::vector<Index> candidates(const RefinementState& state, const PointEnumeration& space, const Labeling& labeling,
                              const Walker& walker, const RefineParams& params = {});

// Largeness score of extending `state` by m: sum over w <= lookahead of
// |kernel(F ∩ A_{m,w}, depth)| where F holds the first `horizon` points that
// still satisfy the chain condition after m.
std::uint64_t largeness_score(const RefinementState& state, Index m, const PointEnumeration& space,
                              const Labeling& labeling, const Walker& walker, const RefineParams& params);

RefinementResult refine(const PointEnumeration& space, const Labeling& labeling, const Walker& walker,
                        const RefineParams& params);

// Independent re-check with a fresh Walker over `cseq`. `chosen` must be
// strictly increasing.
VerifyReport verify_result(std::span<const Index> chosen, const PointEnumeration& space, const Labeling& labeling,
                           std::uint64_t depth, const CSequence& cseq = {});

struct ImplicationResult {
    bool strong = false; // r(k,m) < r(l,m) for all k<l<m in B
    bool shift = false;  // r(k,l) <= r(l,m) for all k<l<m in B
    bool holds() const { return !strong || shift; }
};

ImplicationResult implication_check(std::vector<Index> members, const Labeling& labeling, const Walker& walker);

} // namespace rhowalk
