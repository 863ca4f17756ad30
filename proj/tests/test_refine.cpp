#include "oracle.hpp"

#include "rhowalk/error.hpp"
#include "rhowalk/refine.hpp"

#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

using namespace rhowalk;

namespace {

Ordinal O(const char* s) { return parse(s); }

// Conditions (1) and (2) checked directly from their statements.
void check_invariants(const std::vector<Index>& chosen, const PointEnumeration& space, const Labeling& labeling,
                      const Walker& w) {
    for (std::size_t q = 0; q < chosen.size(); ++q) {
        for (std::size_t r = q + 1; r < chosen.size(); ++r) {
            REQUIRE(chosen[q] < chosen[r]);
            for (std::size_t t = r + 1; t < chosen.size(); ++t) {
                CHECK(labeling.r(w, chosen[q], chosen[t]) < labeling.r(w, chosen[r], chosen[t]));
            }
        }
    }
    for (std::uint64_t t = 1; t < chosen.size(); ++t) {
        const auto [p, j] = oracle::unpair(t - 1);
        CHECK(in_ball(space, chosen[t], chosen[p], j));
    }
}

} // namespace

TEST_CASE("sigma enumeration") {
    CHECK(sigma(0).empty());
    CHECK(sigma(1) == std::vector<std::uint64_t>{0});
    CHECK(sigma(2) == std::vector<std::uint64_t>{0, 0});
    CHECK(sigma_parent(2) == SigmaParent{1, 0});
    CHECK(sigma_parent(3) == SigmaParent{0, 1});
    CHECK_THROWS_AS(sigma_parent(0), DomainError);
    CHECK(cantor_pair(0, 0) == 0);
    CHECK(cantor_pair(1, 0) == 1);
    CHECK(cantor_pair(0, 1) == 2);
    CHECK(cantor_pair(2, 3) == 18);
    CHECK_THROWS_AS(cantor_pair(std::uint64_t{1} << 40, 0), DomainError);

    std::set<std::vector<std::uint64_t>> seen;
    for (std::uint64_t s = 0; s < 3000; ++s) {
        const auto seq = sigma(s);
        CHECK(sigma_code(seq) == s);
        CHECK(seen.insert(seq).second);
        CHECK(cantor_unpair(s) == oracle::unpair(s));
        if (s > 0) {
            const auto p = sigma_parent(s);
            CHECK(p.parent < s);
            CHECK(sigma_child(p.parent, p.last) == s);
        }
    }
    for (std::uint64_t z : {std::uint64_t{1} << 40, (std::uint64_t{1} << 62) + 12345, std::uint64_t{999999999999}}) {
        const auto [a, b] = cantor_unpair(z);
        CHECK(cantor_pair(a, b) == z);
    }
}

TEST_CASE("labelings") {
    const auto id = Labeling::identity(5);
    CHECK(id.size() == 5);
    CHECK(id.label(4) == O("4"));
    CHECK_THROWS_AS(id.label(5), DomainError);

    const auto diag = Labeling::omega2_diagonal(10);
    std::vector<std::string> names;
    for (const auto& a : diag.labels()) {
        names.push_back(render(a));
    }
    CHECK(names == std::vector<std::string>{"0", "w", "w+1", "w*2", "w*2+1", "w*2+2", "w*3", "w*3+1", "w*3+2",
                                            "w*3+3"});

    const auto a = Labeling::seeded_sample(3, 200, 42);
    const auto b = Labeling::seeded_sample(3, 200, 42);
    const auto c = Labeling::seeded_sample(3, 200, 43);
    CHECK(std::equal(a.labels().begin(), a.labels().end(), b.labels().begin(), b.labels().end()));
    CHECK_FALSE(std::equal(a.labels().begin(), a.labels().end(), c.labels().begin(), c.labels().end()));
    for (const auto& x : a.labels()) {
        CHECK(x < O("w^3"));
    }
    CHECK_THROWS_AS(Labeling::seeded_sample(0, 3, 0), InputError);

    std::istringstream file("# labels\n1 w\n0 3\n2 w^2+1\n");
    const auto f = Labeling::parse(file);
    CHECK(f.size() == 3);
    CHECK(f.label(0) == O("3"));
    std::istringstream gap("0 1\n2 3\n");
    CHECK_THROWS_AS(Labeling::parse(gap), InputError);
    std::istringstream dup("0 1\n0 2\n");
    CHECK_THROWS_AS(Labeling::parse(dup), InputError);
    std::istringstream decreasing("0 w\n1 3\n");
    CHECK_THROWS_AS(Labeling::parse(decreasing), InvalidLabeling);
    CHECK_THROWS_AS(Labeling::from_labels("x", {O("1"), O("1")}), InvalidLabeling);

    CHECK(Labeling::from_spec("omega2-diagonal", 7, 0).size() == 7);
    CHECK(Labeling::from_spec("seeded-sample:2", 7, 5).size() == 7);
    CHECK_THROWS_AS(Labeling::from_spec("seeded-sample:x", 7, 5), InputError);
    CHECK_THROWS_AS(Labeling::from_spec("/nonexistent/labels", 7, 5), InputError);
}

TEST_CASE("identity labeling follows the finite closed form") {
    const Walker w;
    const auto id = Labeling::identity(60);
    for (Index k = 0; k < 60; ++k) {
        for (Index m = k + 1; m < 60; ++m) {
            CHECK(id.r(w, k, m).value() == 2 * k + 3);
        }
    }
    CHECK_THROWS_AS(id.r(w, 3, 3), DomainError);
}

TEST_CASE("candidates") {
    const Walker w;
    const auto space = PointEnumeration::canonical(400);
    const auto id = Labeling::identity(400);

    RefinementState empty{{}, 50};
    const auto all = candidates(empty, space, id, w);
    CHECK(all.size() == 50);
    CHECK(std::is_sorted(all.begin(), all.end()));

    CHECK(candidates({{0, 5}, 6}, space, id, w).empty());

    // Under the identity labeling the chain condition is vacuous.
    const std::vector<Index> prefix{0, 3, 7};
    auto got = candidates({prefix, 400}, space, id, w);
    std::sort(got.begin(), got.end());
    const auto [p, j] = oracle::unpair(prefix.size() - 1);
    std::vector<Index> expect;
    for (Index m = prefix.back() + 1; m < 400; ++m) {
        if (in_ball(space, m, prefix[p], j)) {
            expect.push_back(m);
        }
    }
    CHECK(got == expect);
    CHECK_THROWS_AS(candidates({prefix, 401}, space, id, w), DomainError);
}

TEST_CASE("candidates agree with the per-pair filter") {
    const Walker w;
    const auto space = PointEnumeration::canonical(300);
    const auto diag = Labeling::omega2_diagonal(300);
    RefineParams params;
    params.target = 12;
    params.window = 300;
    const auto result = refine(space, diag, w, params);
    for (std::size_t s = 0; s < result.chosen.size(); ++s) {
        const std::vector<Index> prefix(result.chosen.begin(), result.chosen.begin() + static_cast<long>(s) + 1);
        auto got = candidates({prefix, 300}, space, diag, w);
        std::sort(got.begin(), got.end());
        const auto [parent, j] = oracle::unpair(prefix.size() - 1);
        std::vector<Index> expect;
        for (Index m = prefix.back() + 1; m < 300; ++m) {
            bool ok = in_ball(space, m, prefix[parent], j);
            for (std::size_t q = 1; q < prefix.size() && ok; ++q) {
                for (std::size_t p = 0; p < q && ok; ++p) {
                    ok = diag.r(w, prefix[p], m) < diag.r(w, prefix[q], m);
                }
            }
            if (ok) {
                expect.push_back(m);
            }
        }
        CAPTURE(s);
        CHECK(got == expect);
    }
}

TEST_CASE("largeness score") {
    const Walker w;
    const auto space = PointEnumeration::canonical(200);
    const auto id = Labeling::identity(200);
    RefineParams params;
    params.horizon = 1000;
    // From {0}, every later point survives; 3 (= 1/3) sits in a dense region.
    const auto score = largeness_score({{0}, 200}, 3, space, id, w, params);
    std::vector<Index> later;
    for (Index n = 4; n < 200; ++n) {
        later.push_back(n);
    }
    std::uint64_t expect = 0;
    for (std::uint64_t radius = 0; radius <= params.lookahead; ++radius) {
        std::vector<Index> near;
        for (const Index n : later) {
            if (in_ball(space, n, 3, radius)) {
                near.push_back(n);
            }
        }
        expect += oracle::kernel(oracle::canonical_points(200), near, params.depth).size();
    }
    CHECK(score == expect);
}

TEST_CASE("refine under the identity labeling") {
    const Walker w;
    const auto space = PointEnumeration::canonical(10000);
    const auto id = Labeling::identity(10000);
    RefineParams params;
    params.target = 32;
    params.window = 10000;
    const auto result = refine(space, id, w, params);
    REQUIRE(result.chosen.size() == 33);
    CHECK(result.chosen.front() == 0);
    CHECK(result.report.ok());
    CHECK(result.certificate.size() == 32);
    check_invariants(result.chosen, space, id, w);
    for (const auto& c : result.certificate) {
        CHECK(in_ball(space, result.chosen[c.child], result.chosen[c.parent], c.j));
    }
}

TEST_CASE("refine under the diagonal labeling is deterministic") {
    const auto space = PointEnumeration::canonical(5000);
    const auto diag = Labeling::omega2_diagonal(5000);
    RefineParams params;
    params.target = 24;
    params.window = 5000;
    const Walker w1, w2;
    const auto a = refine(space, diag, w1, params);
    const auto b = refine(space, diag, w2, params);
    CHECK(a.chosen == b.chosen);
    CHECK(a.stats.visited == b.stats.visited);
    CHECK(a.report.ok());
    check_invariants(a.chosen, space, diag, w1);
}

TEST_CASE("refine reports exhaustion") {
    const Walker w;
    const auto space = PointEnumeration::canonical(10);
    const auto id = Labeling::identity(10);
    RefineParams params;
    params.target = 1;
    params.window = 1;
    try {
        refine(space, id, w, params);
        FAIL("expected SearchExhausted");
    } catch (const SearchExhausted& e) {
        CHECK(e.deepest() == std::vector<Index>{0});
        CHECK(e.stats().visited == 1);
    }

    params.target = 40;
    params.window = 10;
    params.budget = 5;
    CHECK_THROWS_AS(refine(space, id, w, params), SearchExhausted);

    params.window = 11;
    CHECK_THROWS_AS(refine(space, id, w, params), DomainError);
    params.window = 0;
    CHECK_THROWS_AS(refine(space, id, w, params), DomainError);

    // Target 0 needs only the root.
    params.window = 10;
    params.target = 0;
    CHECK(refine(space, id, w, params).chosen == std::vector<Index>{0});
}

TEST_CASE("verify_result") {
    const auto space = PointEnumeration::canonical(3000);
    const auto diag = Labeling::omega2_diagonal(3000);
    const Walker w;

    CHECK(verify_result({}, space, diag, 1).ok());
    const std::vector<Index> single{7};
    CHECK(verify_result(single, space, diag, 1).ok());

    RefineParams params;
    params.target = 16;
    params.window = 3000;
    const auto result = refine(space, diag, w, params);
    const auto report = verify_result(result.chosen, space, diag, 1);
    CHECK(report.ok());
    CHECK(report.strong.checked == 17 * 16 * 15 / 6);
    CHECK(report.ball.checked == 16);
    CHECK(report.coverage.checked == 16);

    // Replace one entry so that the strong form breaks while the sequence stays increasing.
    bool corrupted = false;
    for (std::size_t t = 1; t + 1 < result.chosen.size() && !corrupted; ++t) {
        for (Index v = result.chosen[t - 1] + 1; v < result.chosen[t + 1] && !corrupted; ++v) {
            auto bad = result.chosen;
            bad[t] = v;
            const auto r = verify_result(bad, space, diag, 1);
            if (r.strong.failures > 0) {
                corrupted = true;
                CHECK_FALSE(r.ok());
                CHECK_FALSE(r.strong.samples.empty());
            }
        }
    }
    CHECK(corrupted);

    auto swapped = result.chosen;
    std::swap(swapped[3], swapped[4]);
    CHECK_THROWS_AS(verify_result(swapped, space, diag, 1), DomainError);
}

TEST_CASE("implication check") {
    const Walker w;
    const auto id = Labeling::identity(100);
    auto r = implication_check({1, 5, 9, 30, 31}, id, w);
    CHECK(r.strong);
    CHECK(r.shift);
    CHECK(implication_check({4, 9}, id, w).holds());
    CHECK(implication_check({4, 9}, id, w).strong);

    const auto diag = Labeling::omega2_diagonal(2000);
    std::mt19937_64 rng(3);
    int strong_seen = 0;
    for (int t = 0; t < 200; ++t) {
        std::vector<Index> b;
        while (b.size() < 8) {
            const Index n = rng() % 2000;
            if (std::find(b.begin(), b.end(), n) == b.end()) {
                b.push_back(n);
            }
        }
        r = implication_check(b, diag, w);
        CHECK(r.holds());
        strong_seen += r.strong ? 1 : 0;
    }
    MESSAGE("strong form held on " << strong_seen << " of 200 samples");
}
