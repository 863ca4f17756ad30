#include "rhowalk/walks.hpp"

#include "rhowalk/error.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <exception>
#include <fstream>
#include <iterator>
#include <regex>
#include <sstream>
#include <thread>

namespace rhowalk {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

// Least m with fund_seq(limit, m) > bound; bound < limit, so it exists.
std::uint64_t first_canonical_above(const Ordinal& limit, const Ordinal& bound) {
    if (fund_seq(limit, 0) > bound) {
        return 0;
    }
    std::uint64_t lo = 0; // fund_seq(limit, lo) <= bound
    std::uint64_t hi = 1;
    while (!(fund_seq(limit, hi) > bound)) {
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (fund_seq(limit, mid) > bound) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

} // namespace

// ---------------------------------------------------------------------------
// CSequence

void CSequence::add_override(const Ordinal& limit, Override ov) {
    if (classify(limit).kind != OrdinalKind::Limit) {
        throw DomainError("C-sequence overrides are only allowed at limits, got " + render(limit));
    }
    for (std::size_t i = 0; i < ov.prefix.size(); ++i) {
        if (!(ov.prefix[i] < limit)) {
            throw DomainError("override element " + render(ov.prefix[i]) + " is not below " + render(limit));
        }
        if (i > 0 && !(ov.prefix[i - 1] < ov.prefix[i])) {
            throw DomainError("override for " + render(limit) + " is not strictly increasing");
        }
    }
    if (ov.prefix.empty() && !ov.canonical_tail) {
        throw DomainError("override for " + render(limit) + " is empty");
    }
    Entry entry;
    entry.tail_offset = ov.prefix.empty() ? 0 : first_canonical_above(limit, ov.prefix.back());
    entry.ov = std::move(ov);
    entries_.insert_or_assign(limit, std::move(entry));
}

CSequence CSequence::parse_overrides(std::istream& in) {
    CSequence out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        try {
            const auto colon = text.find(':');
            if (colon == std::string::npos) {
                throw InputError("missing ':'");
            }
            Override ov;
            std::string rest = text.substr(colon + 1);
            if (const auto semi = rest.find(';'); semi != std::string::npos) {
                if (trim(rest.substr(semi + 1)) != "canonical") {
                    throw InputError("only the ';canonical' marker may follow the prefix");
                }
                ov.canonical_tail = true;
                rest = rest.substr(0, semi);
            }
            for (const auto& item : split(rest, ',')) {
                ov.prefix.push_back(parse(item));
            }
            out.add_override(parse(text.substr(0, colon)), std::move(ov));
        } catch (const DomainError& e) {
            throw DomainError("override line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw InputError("override line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

CSequence CSequence::load_overrides(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open override file " + path);
    }
    return parse_overrides(in);
}

Ordinal CSequence::element(const Ordinal& beta, std::uint64_t n) const {
    const Classification c = classify(beta);
    if (c.kind == OrdinalKind::Zero) {
        throw DomainError("C_0 is empty");
    }
    if (c.kind == OrdinalKind::Successor) {
        if (n != 0) {
            throw DomainError("C of a successor has a single element");
        }
        return c.predecessor;
    }
    const auto it = entries_.find(beta);
    if (it == entries_.end()) {
        return fund_seq(beta, n);
    }
    const Entry& e = it->second;
    if (n < e.ov.prefix.size()) {
        return e.ov.prefix[n];
    }
    if (!e.ov.canonical_tail) {
        throw OverrideExhausted("override for " + render(beta) + " has only " +
                                std::to_string(e.ov.prefix.size()) + " elements");
    }
    return fund_seq(beta, e.tail_offset + (n - e.ov.prefix.size()));
}

// ---------------------------------------------------------------------------
// RhoBar

Natural RhoBar::value() const { return Natural(odd) << exponent; }

std::string RhoBar::str() const { return value().str(); }

std::strong_ordering operator<=>(const RhoBar& a, const RhoBar& b) {
    if (a.exponent == b.exponent) {
        return a.odd <=> b.odd;
    }
    // Compare odd_hi * 2^d against odd_lo (odd, so never equal).
    const bool a_high = a.exponent > b.exponent;
    const RhoBar& hi = a_high ? a : b;
    const RhoBar& lo = a_high ? b : a;
    const std::uint32_t d = hi.exponent - lo.exponent;
    const bool hi_less = d < 64 && hi.odd <= (lo.odd >> d);
    if (hi_less) {
        return a_high ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return a_high ? std::strong_ordering::greater : std::strong_ordering::less;
}

// ---------------------------------------------------------------------------
// Walker

Walker::Walker(CSequence cseq) : cseq_(std::move(cseq)) {}

void Walker::clear_caches() const {
    rho_memo_.clear();
    fiber_size_memo_.clear();
}

CTrace Walker::c_trace(const Ordinal& beta, const Ordinal& alpha) const {
    if (!(alpha < beta)) {
        throw DomainError("c_trace requires alpha < beta, got " + render(alpha) + " >= " + render(beta));
    }
    CTrace out;
    for (std::uint64_t i = 0;; ++i) {
        Ordinal e = cseq_.element(beta, i);
        if (!(e < alpha)) {
            out.step = std::move(e);
            break;
        }
        out.below.push_back(std::move(e));
    }
    out.count = out.below.size();
    return out;
}

std::uint32_t Walker::rho(const Ordinal& alpha, const Ordinal& beta) const {
    const auto c = alpha <=> beta;
    if (c > 0) {
        throw DomainError("rho requires alpha <= beta, got " + render(alpha) + " > " + render(beta));
    }
    if (c == 0) {
        return 0;
    }
    // Successor steps contribute nothing: C_{g+1} ∩ alpha is empty for alpha <= g.
    FiniteSplit s = split_finite(beta);
    if (s.tail != 0) {
        if (!(alpha < s.base)) {
            return 0;
        }
        return rho_limit(alpha, s.base);
    }
    return rho_limit(alpha, beta);
}

std::uint32_t Walker::rho_limit(const Ordinal& alpha, const Ordinal& beta) const {
    return rho_memo_.get_or_compute({alpha, beta}, [&] {
        const CTrace t = c_trace(beta, alpha);
        std::uint32_t value = static_cast<std::uint32_t>(t.count);
        value = std::max(value, rho(alpha, t.step));
        for (const auto& xi : t.below) {
            value = std::max(value, rho(xi, alpha));
        }
        return value;
    });
}

std::vector<Ordinal> Walker::walk_trace(const Ordinal& alpha, const Ordinal& beta) const {
    if (alpha > beta) {
        throw DomainError("walk requires alpha <= beta, got " + render(alpha) + " > " + render(beta));
    }
    std::vector<Ordinal> steps{beta};
    while (steps.back() != alpha) {
        steps.push_back(c_trace(steps.back(), alpha).step);
    }
    return steps;
}

// {xi <= alpha : rho(xi, alpha) <= n}. For limit alpha a member xi < alpha
// with k = |C_alpha ∩ xi| has k <= n and lies in (alpha[k-1], alpha[k]], and
// it is a member iff rho(xi, alpha[k]) <= n and rho(alpha[i], xi) <= n for
// every i < k. The intervals are disjoint, so each layer is enumerated on its
// own without materialising the fibers below it.
void Walker::collect_fiber(const Ordinal& beta, std::uint32_t n, const Ordinal* above,
                           std::vector<Ordinal>& out) const {
    if (above != nullptr && !(*above < beta)) {
        return;
    }
    if (beta.is_zero()) {
        out.push_back(beta);
        return;
    }
    const FiniteSplit s = split_finite(beta);
    if (s.tail != 0) {
        // rho(xi, g + t) = rho(xi, g) for xi <= g, and 0 for g < xi <= g + t.
        Natural first = 1;
        if (above == nullptr || *above < s.base) {
            collect_fiber(s.base, n, above, out);
        } else {
            first = split_finite(*above).tail + 1;
        }
        for (Natural t = first; t <= s.tail; ++t) {
            out.push_back(add_finite(s.base, t));
        }
        return;
    }
    std::vector<Ordinal> cs;
    for (std::uint32_t k = 0; k <= n; ++k) {
        cs.push_back(cseq_.element(beta, k));
    }
    std::vector<Ordinal> layer;
    for (std::uint32_t k = 0; k <= n; ++k) {
        if (above != nullptr && !(*above < cs[k])) {
            continue;
        }
        const Ordinal* floor = above;
        if (k > 0 && (floor == nullptr || *floor < cs[k - 1])) {
            floor = &cs[k - 1];
        }
        layer.clear();
        collect_fiber(cs[k], n, floor, layer);
        for (auto& xi : layer) {
            bool keep = true;
            for (std::uint32_t i = 0; i < k && keep; ++i) {
                keep = rho(cs[i], xi) <= n;
            }
            if (keep) {
                out.push_back(std::move(xi));
            }
        }
    }
    out.push_back(beta);
}

// Members of fiber(alpha, n) in (cs[k-1], cs[k]] for k >= 1.
std::uint64_t Walker::count_layer(const std::vector<Ordinal>& cs, std::uint32_t k, std::uint32_t n) const {
    std::vector<Ordinal> layer;
    collect_fiber(cs[k], n, &cs[k - 1], layer);
    std::uint64_t count = 0;
    for (const auto& xi : layer) {
        bool keep = true;
        for (std::uint32_t i = 0; i < k && keep; ++i) {
            keep = rho(cs[i], xi) <= n;
        }
        count += keep ? 1 : 0;
    }
    return count;
}

Fiber Walker::fiber(const Ordinal& alpha, std::uint32_t n) const {
    Fiber f{alpha, n, {}};
    collect_fiber(alpha, n, nullptr, f.members);
    return f;
}

std::uint64_t Walker::fiber_size(const Ordinal& alpha, std::uint32_t n) const {
    if (alpha.is_zero()) {
        return 1;
    }
    const FiniteSplit s = split_finite(alpha);
    if (s.tail != 0) {
        if (s.tail > std::numeric_limits<std::uint32_t>::max()) {
            throw DomainError("fiber of " + render(alpha) + " is too large to count");
        }
        return fiber_size(s.base, n) + s.tail.convert_to<std::uint64_t>();
    }
    if (const auto hit = fiber_size_memo_.find({alpha, n})) {
        return *hit;
    }
    std::vector<Ordinal> cs;
    for (std::uint32_t k = 0; k <= n; ++k) {
        cs.push_back(cseq_.element(alpha, k));
    }
    std::uint64_t size = 1 + fiber_size(cs[0], n);
    for (std::uint32_t k = 1; k <= n; ++k) {
        size += count_layer(cs, k, n);
    }
    fiber_size_memo_.insert({alpha, n}, size);
    return size;
}

RhoBar Walker::rhobar(const Ordinal& alpha, const Ordinal& beta) const {
    if (!(alpha < beta)) {
        throw DomainError("rhobar requires alpha < beta, got " + render(alpha) + " >= " + render(beta));
    }
    const std::uint32_t e = rho(alpha, beta);
    return RhoBar{e, 2 * fiber_size(alpha, e) + 1};
}

PropertyReport evaluate_triple(const Ordinal& a, const Ordinal& b, const Ordinal& c,
                               const RhoBar& ab, const RhoBar& ac, const RhoBar& bc) {
    PropertyReport r{a, b, c, ab, ac, bc};
    r.distinct = ac != bc;
    r.upper_ac = ac <= std::max(ab, bc);
    r.upper_ab = ab <= std::max(ac, bc);
    r.implies_ac = !(ac > bc) || ab == ac;
    r.implies_ab = !(ab > bc) || ac == ab;
    return r;
}

PropertyReport Walker::check_triple(const Ordinal& a, const Ordinal& b, const Ordinal& c) const {
    if (!(a < b && b < c)) {
        throw DomainError("check_triple requires a < b < c");
    }
    return evaluate_triple(a, b, c, rhobar(a, b), rhobar(a, c), rhobar(b, c));
}

UniverseSummary Walker::check_universe(const std::vector<Ordinal>& universe, unsigned threads) const {
    for (std::size_t i = 1; i < universe.size(); ++i) {
        if (!(universe[i - 1] < universe[i])) {
            throw DomainError("universe must be strictly increasing");
        }
    }
    const std::size_t n = universe.size();
    UniverseSummary summary;
    summary.size = n;
    if (n < 3) {
        return summary;
    }
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));

    // Row-major strict upper triangle.
    std::vector<RhoBar> matrix(n * n);
    auto run = [&](auto&& body) {
        if (threads == 1) {
            body(0u);
            return;
        }
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] { body(t); });
        }
    };
    std::vector<std::exception_ptr> errors(threads);
    run([&](unsigned t) {
        try {
            for (std::size_t i = t; i < n; i += threads) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    matrix[i * n + j] = rhobar(universe[i], universe[j]);
                }
            }
        } catch (...) {
            errors[t] = std::current_exception();
        }
    });
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    struct Partial {
        std::uint64_t failures = 0;
        std::optional<std::array<std::size_t, 3>> first;
    };
    std::vector<Partial> partial(threads);
    run([&](unsigned t) {
        Partial& p = partial[t];
        for (std::size_t i = t; i < n; i += threads) {
            for (std::size_t j = i + 1; j < n; ++j) {
                for (std::size_t k = j + 1; k < n; ++k) {
                    const auto r = evaluate_triple(universe[i], universe[j], universe[k], matrix[i * n + j],
                                                   matrix[i * n + k], matrix[j * n + k]);
                    if (!r.ok()) {
                        ++p.failures;
                        if (!p.first) {
                            p.first = std::array<std::size_t, 3>{i, j, k};
                        }
                    }
                }
            }
        }
    });
    summary.triples = static_cast<std::uint64_t>(n) * (n - 1) * (n - 2) / 6;
    std::optional<std::array<std::size_t, 3>> first;
    for (const auto& p : partial) {
        summary.failures += p.failures;
        if (p.first && (!first || *p.first < *first)) {
            first = p.first;
        }
    }
    if (first) {
        const auto [i, j, k] = *first;
        summary.first_failure = evaluate_triple(universe[i], universe[j], universe[k], matrix[i * n + j],
                                                matrix[i * n + k], matrix[j * n + k]);
    }
    return summary;
}

// ---------------------------------------------------------------------------
// Universes

std::vector<Ordinal> polynomial_universe(std::uint32_t max_exponent, std::uint32_t max_coefficient) {
    const std::size_t digits = static_cast<std::size_t>(max_exponent) + 1;
    const std::uint64_t base = static_cast<std::uint64_t>(max_coefficient) + 1;
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < digits; ++i) {
        if (count > 10'000'000 / base) {
            throw InputError("universe too large");
        }
        count *= base;
    }
    std::vector<Ordinal> out;
    out.reserve(count);
    // Coefficient vectors in lexicographic order (highest exponent first) are
    // exactly ascending ordinal order.
    std::vector<std::uint32_t> coeff(digits, 0);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::vector<OrdinalTerm> terms;
        for (std::size_t d = 0; d < digits; ++d) {
            if (coeff[d] != 0) {
                terms.push_back({Ordinal(static_cast<std::uint64_t>(max_exponent - d)), Natural(coeff[d])});
            }
        }
        out.push_back(Ordinal::from_terms(std::move(terms)));
        for (std::size_t d = digits; d-- > 0;) {
            if (++coeff[d] <= max_coefficient) {
                break;
            }
            coeff[d] = 0;
        }
    }
    return out;
}

std::vector<Ordinal> parse_universe(std::string_view spec) {
    static const std::regex poly(R"(w(\d{1,6}):(\d{1,6}))");
    std::match_results<std::string_view::const_iterator> m;
    if (std::regex_match(spec.begin(), spec.end(), m, poly)) {
        return polynomial_universe(static_cast<std::uint32_t>(std::stoul(m[1].str())),
                                   static_cast<std::uint32_t>(std::stoul(m[2].str())));
    }
    std::ifstream in{std::string(spec)};
    if (!in) {
        throw InputError("universe spec is neither w<k>:<c> nor a readable file: " + std::string(spec));
    }
    std::vector<Ordinal> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        try {
            out.push_back(parse(text));
        } catch (const ParseError& e) {
            throw InputError("universe line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace rhowalk
