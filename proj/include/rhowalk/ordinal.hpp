#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rhowalk {

using Natural = boost::multiprecision::cpp_int;

struct OrdinalTerm;

// An ordinal below epsilon_0 in Cantor normal form:
//
//     w^e1 * c1 + w^e2 * c2 + ... + w^ek * ck,   e1 > e2 > ... > ek,  ci >= 1
//
// Values are immutable and share structure, so copies are cheap. The empty
// term list is 0. Because the representation is canonical, structural
// equality is ordinal equality.
class Ordinal {
public:
    Ordinal() = default;
    explicit Ordinal(std::uint64_t n);
    explicit Ordinal(const Natural& n);

    // Terms must already be canonical (strictly decreasing exponents, positive
    // coefficients); throws DomainError otherwise.
    static Ordinal from_terms(std::vector<OrdinalTerm> terms);

    static Ordinal omega();
    // w^exponent * coefficient; coefficient 0 yields 0.
    static Ordinal monomial(const Ordinal& exponent, const Natural& coefficient);

    std::span<const OrdinalTerm> terms() const;
    bool is_zero() const noexcept { return rep_ == nullptr; }
    bool is_finite() const;
    // Value as a machine integer; throws DomainError if infinite or too large.
    std::uint64_t to_uint64() const;

    std::size_t hash() const noexcept;
    std::string str() const;

    friend bool operator==(const Ordinal& a, const Ordinal& b);
    friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);

private:
    struct Rep;
    explicit Ordinal(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

    std::shared_ptr<const Rep> rep_;
};

struct OrdinalTerm {
    Ordinal exponent;
    Natural coefficient;

    friend bool operator==(const OrdinalTerm&, const OrdinalTerm&) = default;
};

enum class Comparison { LT, EQ, GT };
Comparison compare(const Ordinal& a, const Ordinal& b);

enum class OrdinalKind { Zero, Successor, Limit };

struct Classification {
    OrdinalKind kind;
    Ordinal predecessor; // meaningful only for Successor
};

Classification classify(const Ordinal& a);

// The n-th element (0-indexed) of the canonical fundamental sequence of a
// limit ordinal. Writing a = d + w^g for the last copy of the last term:
//   g = g' + 1  ->  a[n] = d + w^g' * (n + 1)
//   g limit     ->  a[n] = d + w^(g[n])
// Throws DomainError for zero and successors.
Ordinal fund_seq(const Ordinal& a, std::uint64_t n);

// Parses the ASCII CNF grammar:
//   ordinal := "0" | term ("+" term)*
//   term    := "w" | "w*" nat | "w^" atom | "w^" atom "*" nat | nat
//   atom    := nat | "w" | "(" ordinal ")"
// Whitespace is ignored. Terms out of canonical order are combined with
// ordinal addition, so "1+w" parses to w. Throws ParseError.
Ordinal parse(std::string_view text);

std::string render(const Ordinal& a);

// Splits a = base + k where base is 0 or a limit and k is finite.
struct FiniteSplit {
    Ordinal base;
    Natural tail;
};
FiniteSplit split_finite(const Ordinal& a);

// a + k for finite k.
Ordinal add_finite(const Ordinal& a, const Natural& k);

} // namespace rhowalk

template <>
struct std::hash<rhowalk::Ordinal> {
    std::size_t operator()(const rhowalk::Ordinal& a) const noexcept { return a.hash(); }
};
