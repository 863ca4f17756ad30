#include "rhowalk/rational.hpp"

#include "rhowalk/error.hpp"

#include <cctype>
#include <numeric>

namespace rhowalk {

namespace {

using u128 = unsigned __int128;

u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        const u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t parse_int(std::string_view s, std::size_t offset) {
    if (s.empty()) {
        throw ParseError("expected an integer", offset);
    }
    std::size_t i = 0;
    const bool negative = s[0] == '-';
    if (negative || s[0] == '+') {
        ++i;
    }
    if (i == s.size()) {
        throw ParseError("expected digits", offset + i);
    }
    std::int64_t value = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            throw ParseError("unexpected character '" + std::string(1, s[i]) + "'", offset + i);
        }
        value = value * 10 + (s[i] - '0');
        if (value > Rational::kLimit) {
            throw ParseError("integer out of range", offset);
        }
    }
    return negative ? -value : value;
}

} // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) {
        throw DomainError("zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num /= g;
    den /= g;
    if (num > kLimit || num < -kLimit || den > kLimit) {
        throw DomainError("rational out of range");
    }
    num_ = num;
    den_ = den;
}

Rational Rational::parse(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        throw ParseError("empty rational", 0);
    }
    const auto last = text.find_last_not_of(" \t\r\n");
    const std::string_view s = text.substr(first, last - first + 1);
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_int(s, first));
    }
    const std::int64_t den = parse_int(s.substr(slash + 1), first + slash + 1);
    if (den <= 0) {
        throw ParseError("denominator must be positive", first + slash + 1);
    }
    return Rational(parse_int(s.substr(0, slash), first), den);
}

std::string Rational::str() const {
    if (den_ == 1) {
        return std::to_string(num_);
    }
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational abs_diff(const Rational& a, const Rational& b) {
    const __int128 cross = static_cast<__int128>(a.num()) * b.den() - static_cast<__int128>(b.num()) * a.den();
    u128 num = static_cast<u128>(cross < 0 ? -cross : cross);
    u128 den = static_cast<u128>(a.den()) * static_cast<u128>(b.den());
    const u128 g = gcd128(num, den);
    num /= g;
    den /= g;
    if (num > static_cast<u128>(Rational::kLimit) || den > static_cast<u128>(Rational::kLimit)) {
        throw DomainError("distance out of representable range");
    }
    return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

bool within(const Rational& a, const Rational& b, std::uint64_t j) {
    // |pa*qb - pb*qa| * (j+1) < qa*qb  <=>  |cross| <= (qa*qb - 1) / (j+1)
    const __int128 cross = static_cast<__int128>(a.num()) * b.den() - static_cast<__int128>(b.num()) * a.den();
    const u128 lhs = static_cast<u128>(cross < 0 ? -cross : cross);
    const u128 rhs = static_cast<u128>(a.den()) * static_cast<u128>(b.den());
    return lhs <= (rhs - 1) / (static_cast<u128>(j) + 1);
}

} // namespace rhowalk
