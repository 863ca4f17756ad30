#pragma once

#include "rhowalk/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rhowalk {

using Index = std::size_t;

// A finite window n = 0, 1, ..., size()-1 of an injective enumeration of
// rationals, with the metric d(i, k) = |x_i - x_k|.
class PointEnumeration {
public:
    // Reduced fractions in [0, 1] ordered by denominator, then numerator:
    // 0, 1, 1/2, 1/3, 2/3, 1/4, 3/4, 1/5, ...
    static PointEnumeration canonical(std::size_t count);

    // Throws InputError if two points coincide.
    static PointEnumeration from_points(std::vector<Rational> points);

    // `points <count>` followed by one rational per line.
    static PointEnumeration parse(std::istream& in);
    static PointEnumeration load(const std::string& path);
    void write(std::ostream& out) const;

    std::size_t size() const noexcept { return points_.size(); }
    const Rational& point(Index n) const;
    Rational distance(Index i, Index k) const;

    // Position of each point in ascending value order.
    std::span<const std::uint32_t> ranks() const noexcept { return ranks_; }

private:
    explicit PointEnumeration(std::vector<Rational> points);

    std::vector<Rational> points_;
    std::vector<std::uint32_t> ranks_;
};

// n ∈ A_{i,j}: d(x_n, x_i) < 1/(j+1).
bool in_ball(const PointEnumeration& space, Index n, Index i, std::uint64_t j);

// A_{i,j} ∩ [0, window), ascending.
std::vector<Index> ball_members(const PointEnumeration& space, Index i, std::uint64_t j, std::size_t window);

struct CrowdingCertificate {
    std::vector<Index> members; // ascending
    std::uint64_t depth = 0;
    // witnesses[p][j] is the least n ∈ members, n != members[p], with n ∈ A_{members[p], j}.
    std::vector<std::vector<Index>> witnesses;
};

struct CrowdingFailure {
    Index point = 0;
    std::uint64_t depth = 0;
    friend bool operator==(const CrowdingFailure&, const CrowdingFailure&) = default;
};

using CrowdingResult = std::variant<CrowdingCertificate, CrowdingFailure>;

// Witnesses for every i ∈ members and j <= depth, or the least (i, j) without
// one. Throws DomainError on an empty set.
CrowdingResult crowding_check(const PointEnumeration& space, std::vector<Index> members, std::uint64_t depth);

// Greatest subset of `members` that passes crowding_check at `depth`
// (possibly empty), ascending.
std::vector<Index> kernel(const PointEnumeration& space, std::vector<Index> members, std::uint64_t depth);

// Depth-bounded stand-in for "not scattered": kernel(A ∩ [0, window), depth) is non-empty.
bool crowded_at_depth(const PointEnumeration& space, const std::vector<Index>& members, std::uint64_t depth,
                      std::size_t window);

} // namespace rhowalk
