#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace rhowalk {

// Exact rational with a positive denominator in lowest terms. Numerator and
// denominator are bounded by 2^62 in magnitude so that every cross product
// fits in 128 bits; construction outside that range throws DomainError.
class Rational {
public:
    static constexpr std::int64_t kLimit = std::int64_t{1} << 62;

    Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    // "p/q" or "p"; throws ParseError.
    static Rational parse(std::string_view text);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    std::string str() const;

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
        const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
        return lhs < rhs ? std::strong_ordering::less
                         : (lhs == rhs ? std::strong_ordering::equal : std::strong_ordering::greater);
    }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

// |a - b|; throws DomainError if the reduced result leaves the representable range.
Rational abs_diff(const Rational& a, const Rational& b);

// |a - b| < 1/(j+1), decided without forming the difference.
bool within(const Rational& a, const Rational& b, std::uint64_t j);

} // namespace rhowalk
