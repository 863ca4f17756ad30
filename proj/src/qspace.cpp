#include "rhowalk/qspace.hpp"

#include "rhowalk/error.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <deque>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace rhowalk {

namespace {

void normalize(const PointEnumeration& space, std::vector<Index>& members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (!members.empty() && members.back() >= space.size()) {
        throw DomainError("point index " + std::to_string(members.back()) + " outside the enumerated window of " +
                          std::to_string(space.size()));
    }
}

} // namespace

PointEnumeration::PointEnumeration(std::vector<Rational> points) : points_(std::move(points)) {
    if (points_.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw InputError("too many points");
    }
    std::vector<std::uint32_t> order(points_.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return points_[a] < points_[b]; });
    for (std::size_t r = 1; r < order.size(); ++r) {
        if (points_[order[r - 1]] == points_[order[r]]) {
            throw InputError("points " + std::to_string(std::min(order[r - 1], order[r])) + " and " +
                             std::to_string(std::max(order[r - 1], order[r])) + " coincide (" +
                             points_[order[r]].str() + ")");
        }
    }
    ranks_.resize(points_.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        ranks_[order[r]] = static_cast<std::uint32_t>(r);
    }
}

PointEnumeration PointEnumeration::canonical(std::size_t count) {
    std::vector<Rational> pts;
    pts.reserve(count);
    if (count > 0) {
        pts.emplace_back(0, 1);
    }
    if (count > 1) {
        pts.emplace_back(1, 1);
    }
    for (std::int64_t q = 2; pts.size() < count; ++q) {
        for (std::int64_t p = 1; p < q && pts.size() < count; ++p) {
            if (std::gcd(p, q) == 1) {
                pts.emplace_back(p, q);
            }
        }
    }
    return PointEnumeration(std::move(pts));
}

PointEnumeration PointEnumeration::from_points(std::vector<Rational> points) {
    return PointEnumeration(std::move(points));
}

PointEnumeration PointEnumeration::parse(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                return true;
            }
        }
        return false;
    };
    if (!next_line()) {
        throw InputError("space file: missing 'points <count>' header");
    }
    std::istringstream header(line);
    std::string keyword;
    long long count = -1;
    if (!(header >> keyword >> count) || keyword != "points" || count < 0) {
        throw InputError("space file line " + std::to_string(line_no) + ": expected 'points <count>'");
    }
    std::vector<Rational> pts;
    pts.reserve(static_cast<std::size_t>(count));
    while (static_cast<long long>(pts.size()) < count) {
        if (!next_line()) {
            throw InputError("space file: expected " + std::to_string(count) + " points, found " +
                             std::to_string(pts.size()));
        }
        try {
            pts.push_back(Rational::parse(line));
        } catch (const Error& e) {
            throw InputError("space file line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (next_line()) {
        throw InputError("space file line " + std::to_string(line_no) + ": more points than declared");
    }
    return PointEnumeration(std::move(pts));
}

PointEnumeration PointEnumeration::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open space file " + path);
    }
    return parse(in);
}

void PointEnumeration::write(std::ostream& out) const {
    out << "points " << points_.size() << '\n';
    for (const auto& p : points_) {
        out << p.str() << '\n';
    }
}

const Rational& PointEnumeration::point(Index n) const {
    if (n >= points_.size()) {
        throw DomainError("point index " + std::to_string(n) + " outside the enumerated window of " +
                          std::to_string(points_.size()));
    }
    return points_[n];
}

Rational PointEnumeration::distance(Index i, Index k) const { return abs_diff(point(i), point(k)); }

bool in_ball(const PointEnumeration& space, Index n, Index i, std::uint64_t j) {
    return within(space.point(n), space.point(i), j);
}

std::vector<Index> ball_members(const PointEnumeration& space, Index i, std::uint64_t j, std::size_t window) {
    std::vector<Index> out;
    if (window == 0) {
        return out;
    }
    if (window > space.size()) {
        throw DomainError("window " + std::to_string(window) + " exceeds the enumerated " +
                          std::to_string(space.size()) + " points");
    }
    const Rational& centre = space.point(i);
    for (Index n = 0; n < window; ++n) {
        if (within(space.point(n), centre, j)) {
            out.push_back(n);
        }
    }
    return out;
}

CrowdingResult crowding_check(const PointEnumeration& space, std::vector<Index> members, std::uint64_t depth) {
    normalize(space, members);
    if (members.empty()) {
        throw DomainError("crowding_check needs a non-empty set");
    }
    CrowdingCertificate cert;
    cert.depth = depth;
    cert.witnesses.reserve(members.size());
    for (const Index i : members) {
        std::vector<Index> row;
        row.reserve(depth + 1);
        auto from = members.begin();
        for (std::uint64_t j = 0; j <= depth; ++j) {
            // Balls shrink with j, so the least witness for j is never below the one for j-1.
            auto it = std::find_if(from, members.end(), [&](Index n) { return n != i && in_ball(space, n, i, j); });
            from = it;
            if (it == members.end()) {
                return CrowdingFailure{i, j};
            }
            row.push_back(*it);
        }
        cert.witnesses.push_back(std::move(row));
    }
    cert.members = std::move(members);
    return cert;
}

std::vector<Index> kernel(const PointEnumeration& space, std::vector<Index> members, std::uint64_t depth) {
    normalize(space, members);
    const std::size_t n = members.size();
    if (n == 0) {
        return members;
    }
    // A witness at radius 1/(depth+1) serves every j <= depth, and on the line
    // the nearest other point is a neighbour in value order. Prune isolated
    // points from a doubly linked list sorted by value until nothing changes.
    const auto ranks = space.ranks();
    std::vector<Index> sorted = members;
    std::sort(sorted.begin(), sorted.end(), [&](Index a, Index b) { return ranks[a] < ranks[b]; });
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> prev(n), next(n);
    for (std::size_t p = 0; p < n; ++p) {
        prev[p] = p == 0 ? none : p - 1;
        next[p] = p + 1 == n ? none : p + 1;
    }
    std::vector<char> alive(n, 1);
    auto supported = [&](std::size_t p) {
        const Rational& x = space.point(sorted[p]);
        return (prev[p] != none && within(space.point(sorted[prev[p]]), x, depth)) ||
               (next[p] != none && within(space.point(sorted[next[p]]), x, depth));
    };
    std::deque<std::size_t> queue(n);
    std::iota(queue.begin(), queue.end(), std::size_t{0});
    while (!queue.empty()) {
        const std::size_t p = queue.front();
        queue.pop_front();
        if (!alive[p] || supported(p)) {
            continue;
        }
        alive[p] = 0;
        if (prev[p] != none) {
            next[prev[p]] = next[p];
            queue.push_back(prev[p]);
        }
        if (next[p] != none) {
            prev[next[p]] = prev[p];
            queue.push_back(next[p]);
        }
    }
    std::vector<Index> out;
    for (std::size_t p = 0; p < n; ++p) {
        if (alive[p]) {
            out.push_back(sorted[p]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool crowded_at_depth(const PointEnumeration& space, const std::vector<Index>& members, std::uint64_t depth,
                      std::size_t window) {
    std::vector<Index> inside;
    std::copy_if(members.begin(), members.end(), std::back_inserter(inside), [&](Index n) { return n < window; });
    return !kernel(space, std::move(inside), depth).empty();
}

} // namespace rhowalk
