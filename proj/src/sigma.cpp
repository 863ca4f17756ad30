#include "rhowalk/refine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rhowalk {

namespace {

using u128 = unsigned __int128;

u128 triangle(std::uint64_t w) { return static_cast<u128>(w) * (static_cast<u128>(w) + 1) / 2; }

} // namespace

std::uint64_t cantor_pair(std::uint64_t a, std::uint64_t b) {
    const u128 sum = static_cast<u128>(a) + b;
    if (sum > (u128{1} << 33)) {
        throw DomainError("Cantor pairing overflows 64 bits");
    }
    const u128 z = sum * (sum + 1) / 2 + b;
    if (z > std::numeric_limits<std::uint64_t>::max()) {
        throw DomainError("Cantor pairing overflows 64 bits");
    }
    return static_cast<std::uint64_t>(z);
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z) {
    auto w = static_cast<std::uint64_t>((std::sqrt(8.0L * static_cast<long double>(z) + 1.0L) - 1.0L) / 2.0L);
    while (triangle(w + 1) <= z) {
        ++w;
    }
    while (triangle(w) > z) {
        --w;
    }
    const std::uint64_t b = z - static_cast<std::uint64_t>(triangle(w));
    return {w - b, b};
}

SigmaParent sigma_parent(std::uint64_t code) {
    if (code == 0) {
        throw DomainError("the empty sequence has no parent");
    }
    const auto [a, b] = cantor_unpair(code - 1);
    return {a, b};
}

std::uint64_t sigma_child(std::uint64_t parent, std::uint64_t j) {
    const std::uint64_t z = cantor_pair(parent, j);
    if (z == std::numeric_limits<std::uint64_t>::max()) {
        throw DomainError("sequence code overflows 64 bits");
    }
    return z + 1;
}

std::vector<std::uint64_t> sigma(std::uint64_t code) {
    std::vector<std::uint64_t> seq;
    while (code != 0) {
        const SigmaParent p = sigma_parent(code);
        seq.push_back(p.last);
        code = p.parent;
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
}

std::uint64_t sigma_code(std::span<const std::uint64_t> seq) {
    std::uint64_t code = 0;
    for (const auto j : seq) {
        code = sigma_child(code, j);
    }
    return code;
}

} // namespace rhowalk
