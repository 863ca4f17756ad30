#pragma once

#include "rhowalk/memo.hpp"
#include "rhowalk/ordinal.hpp"

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rhowalk {

// A C-sequence: C_{a+1} = {a}, and for limits a a strictly increasing
// cofinal omega-sequence. Limits default to the canonical fundamental
// sequence; individual limits may be overridden by a finite prefix,
// optionally continued by the canonical elements above the prefix.
class CSequence {
public:
    struct Override {
        std::vector<Ordinal> prefix;
        bool canonical_tail = false;
    };

    CSequence() = default;

    // Throws DomainError if `limit` is not a limit or the prefix is not
    // strictly increasing below `limit`.
    void add_override(const Ordinal& limit, Override ov);

    // Reads `CNF ":" CNF ("," CNF)* [";canonical"]` lines; blank lines and
    // lines starting with '#' are skipped.
    static CSequence parse_overrides(std::istream& in);
    static CSequence load_overrides(const std::string& path);

    // The n-th element (0-indexed) of C_beta. For successors only n = 0 exists.
    // Throws OverrideExhausted past the end of a finite override and
    // DomainError for beta = 0.
    Ordinal element(const Ordinal& beta, std::uint64_t n) const;

    std::size_t override_count() const { return entries_.size(); }

private:
    struct Entry {
        Override ov;
        std::uint64_t tail_offset = 0; // first canonical index above prefix.back()
    };
    std::map<Ordinal, Entry> entries_;
};

// rho-bar values are 2^e * odd with e = rho(a, b); e can be large, so the
// value is held factored and compared exactly.
struct RhoBar {
    std::uint32_t exponent = 0;
    std::uint64_t odd = 1;

    Natural value() const;
    std::string str() const;

    friend bool operator==(const RhoBar&, const RhoBar&) = default;
    friend std::strong_ordering operator<=>(const RhoBar& a, const RhoBar& b);
};

struct CTrace {
    std::uint64_t count = 0;
    std::vector<Ordinal> below; // C_beta ∩ alpha, ascending
    Ordinal step;               // min(C_beta \ alpha)
};

struct Fiber {
    Ordinal alpha;
    std::uint32_t bound = 0;
    std::vector<Ordinal> members; // ascending
};

struct PropertyReport {
    Ordinal a, b, c;
    RhoBar ab, ac, bc;
    bool distinct = false;      // rb(a,c) != rb(b,c)
    bool upper_ac = false;      // rb(a,c) <= max(rb(a,b), rb(b,c))
    bool upper_ab = false;      // rb(a,b) <= max(rb(a,c), rb(b,c))
    bool implies_ac = false;    // rb(a,c) > rb(b,c)  =>  rb(a,b) = rb(a,c)
    bool implies_ab = false;    // rb(a,b) > rb(b,c)  =>  rb(a,c) = rb(a,b)

    bool ok() const { return distinct && upper_ac && upper_ab && implies_ac && implies_ab; }
};

struct UniverseSummary {
    std::uint64_t size = 0;
    std::uint64_t triples = 0;
    std::uint64_t failures = 0;
    std::optional<PropertyReport> first_failure; // least failing triple in index order
};

// Computes walks, rho, fibers and rho-bar for a fixed C-sequence. Results are
// memoised; the caches are internally synchronised, so a Walker can be shared
// between threads and behaves like a pure function.
class Walker {
public:
    explicit Walker(CSequence cseq = {});

    const CSequence& cseq() const { return cseq_; }

    CTrace c_trace(const Ordinal& beta, const Ordinal& alpha) const;
    std::uint32_t rho(const Ordinal& alpha, const Ordinal& beta) const;
    std::vector<Ordinal> walk_trace(const Ordinal& alpha, const Ordinal& beta) const;
    Fiber fiber(const Ordinal& alpha, std::uint32_t n) const;
    std::uint64_t fiber_size(const Ordinal& alpha, std::uint32_t n) const;
    RhoBar rhobar(const Ordinal& alpha, const Ordinal& beta) const;

    PropertyReport check_triple(const Ordinal& a, const Ordinal& b, const Ordinal& c) const;
    // `universe` must be strictly increasing. Pairs are evaluated on up to
    // `threads` workers; the summary does not depend on the thread count.
    UniverseSummary check_universe(const std::vector<Ordinal>& universe, unsigned threads = 1) const;

    void clear_caches() const;

private:

    std::uint32_t rho_limit(const Ordinal& alpha, const Ordinal& beta) const;
    void collect_fiber(const Ordinal& beta, std::uint32_t n, const Ordinal* above, std::vector<Ordinal>& out) const;
    std::uint64_t count_layer(const std::vector<Ordinal>& cs, std::uint32_t k, std::uint32_t n) const;

    CSequence cseq_;
    mutable ConcurrentMemo<std::pair<Ordinal, Ordinal>, std::uint32_t> rho_memo_;
    mutable ConcurrentMemo<std::pair<Ordinal, std::uint32_t>, std::uint64_t> fiber_size_memo_;
};

// Evaluates the three ultrametric inequalities and the two derived
// implications for given rho-bar values of a < b < c.
PropertyReport evaluate_triple(const Ordinal& a, const Ordinal& b, const Ordinal& c,
                               const RhoBar& ab, const RhoBar& ac, const RhoBar& bc);

// Universe mini-language `w<k>:<c>`: all w^k*c_k + ... + w*c_1 + c_0 with
// 0 <= c_i <= c, ascending. Anything else is read as a path to a file of CNF
// lines. Throws InputError.
std::vector<Ordinal> parse_universe(std::string_view spec);
std::vector<Ordinal> polynomial_universe(std::uint32_t max_exponent, std::uint32_t max_coefficient);

} // namespace rhowalk
