#include "rhowalk/ordinal.hpp"

#include "rhowalk/error.hpp"

#include <cctype>
#include <utility>

namespace rhowalk {

struct Ordinal::Rep {
    std::vector<OrdinalTerm> terms;
    std::size_t hash = 0;
    bool finite = false;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
    return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_natural(const Natural& n) {
    const Natural low = n & Natural(std::numeric_limits<std::uint64_t>::max());
    std::size_t h = std::hash<std::uint64_t>{}(low.convert_to<std::uint64_t>());
    if (n > std::numeric_limits<std::uint64_t>::max()) {
        h = mix(h, boost::multiprecision::msb(n));
    }
    return h;
}

// Ordinal addition of a single term onto a canonical term list.
void add_term(std::vector<OrdinalTerm>& acc, OrdinalTerm term) {
    if (term.coefficient == 0) {
        return;
    }
    while (!acc.empty() && acc.back().exponent < term.exponent) {
        acc.pop_back();
    }
    if (!acc.empty() && acc.back().exponent == term.exponent) {
        acc.back().coefficient += term.coefficient;
    } else {
        acc.push_back(std::move(term));
    }
}

} // namespace

Ordinal::Ordinal(std::uint64_t n) : Ordinal(Natural(n)) {}

Ordinal::Ordinal(const Natural& n) {
    if (n < 0) {
        throw DomainError("ordinals are non-negative");
    }
    if (n != 0) {
        *this = monomial(Ordinal(), n);
    }
}

Ordinal Ordinal::from_terms(std::vector<OrdinalTerm> terms) {
    if (terms.empty()) {
        return Ordinal();
    }
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].coefficient <= 0) {
            throw DomainError("CNF coefficients must be positive");
        }
        if (i > 0 && !(terms[i].exponent < terms[i - 1].exponent)) {
            throw DomainError("CNF exponents must be strictly decreasing");
        }
    }
    auto rep = std::make_shared<Rep>();
    std::size_t h = terms.size();
    for (const auto& t : terms) {
        h = mix(h, t.exponent.hash());
        h = mix(h, hash_natural(t.coefficient));
    }
    rep->hash = h;
    rep->finite = terms.size() == 1 && terms.front().exponent.is_zero();
    rep->terms = std::move(terms);
    return Ordinal(std::shared_ptr<const Rep>(std::move(rep)));
}

Ordinal Ordinal::omega() {
    static const Ordinal w = monomial(Ordinal(std::uint64_t{1}), 1);
    return w;
}

Ordinal Ordinal::monomial(const Ordinal& exponent, const Natural& coefficient) {
    if (coefficient == 0) {
        return Ordinal();
    }
    return from_terms({OrdinalTerm{exponent, coefficient}});
}

std::span<const OrdinalTerm> Ordinal::terms() const {
    if (!rep_) {
        return {};
    }
    return rep_->terms;
}

bool Ordinal::is_finite() const { return !rep_ || rep_->finite; }

std::uint64_t Ordinal::to_uint64() const {
    if (!rep_) {
        return 0;
    }
    if (!rep_->finite || rep_->terms.front().coefficient > std::numeric_limits<std::uint64_t>::max()) {
        throw DomainError("ordinal " + str() + " is not a machine-sized natural");
    }
    return rep_->terms.front().coefficient.convert_to<std::uint64_t>();
}

std::size_t Ordinal::hash() const noexcept { return rep_ ? rep_->hash : 0; }

std::string Ordinal::str() const { return render(*this); }

bool operator==(const Ordinal& a, const Ordinal& b) {
    if (a.rep_ == b.rep_) {
        return true;
    }
    if (!a.rep_ || !b.rep_ || a.rep_->hash != b.rep_->hash) {
        return false;
    }
    return a.rep_->terms == b.rep_->terms;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
    if (a.rep_ == b.rep_) {
        return std::strong_ordering::equal;
    }
    const auto ta = a.terms();
    const auto tb = b.terms();
    const std::size_t n = std::min(ta.size(), tb.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (auto c = ta[i].exponent <=> tb[i].exponent; c != 0) {
            return c;
        }
        if (ta[i].coefficient != tb[i].coefficient) {
            return ta[i].coefficient < tb[i].coefficient ? std::strong_ordering::less
                                                         : std::strong_ordering::greater;
        }
    }
    return ta.size() <=> tb.size();
}

Comparison compare(const Ordinal& a, const Ordinal& b) {
    const auto c = a <=> b;
    if (c < 0) {
        return Comparison::LT;
    }
    return c == 0 ? Comparison::EQ : Comparison::GT;
}

Classification classify(const Ordinal& a) {
    if (a.is_zero()) {
        return {OrdinalKind::Zero, Ordinal()};
    }
    const auto terms = a.terms();
    if (!terms.back().exponent.is_zero()) {
        return {OrdinalKind::Limit, Ordinal()};
    }
    std::vector<OrdinalTerm> pred(terms.begin(), terms.end());
    pred.back().coefficient -= 1;
    if (pred.back().coefficient == 0) {
        pred.pop_back();
    }
    return {OrdinalKind::Successor, Ordinal::from_terms(std::move(pred))};
}

Ordinal fund_seq(const Ordinal& a, std::uint64_t n) {
    if (a.is_zero() || a.terms().back().exponent.is_zero()) {
        throw DomainError("fundamental sequences exist only for limit ordinals, got " + render(a));
    }
    const auto terms = a.terms();
    std::vector<OrdinalTerm> out(terms.begin(), terms.end());
    const Ordinal last_exponent = out.back().exponent;
    out.back().coefficient -= 1;
    if (out.back().coefficient == 0) {
        out.pop_back();
    }
    const Classification g = classify(last_exponent);
    if (g.kind == OrdinalKind::Successor) {
        out.push_back({g.predecessor, Natural(n) + 1});
    } else {
        out.push_back({fund_seq(last_exponent, n), Natural(1)});
    }
    return Ordinal::from_terms(std::move(out));
}

FiniteSplit split_finite(const Ordinal& a) {
    const auto terms = a.terms();
    if (terms.empty() || !terms.back().exponent.is_zero()) {
        return {a, Natural(0)};
    }
    std::vector<OrdinalTerm> base(terms.begin(), terms.end() - 1);
    return {Ordinal::from_terms(std::move(base)), terms.back().coefficient};
}

Ordinal add_finite(const Ordinal& a, const Natural& k) {
    if (k == 0) {
        return a;
    }
    const auto terms = a.terms();
    std::vector<OrdinalTerm> out(terms.begin(), terms.end());
    add_term(out, OrdinalTerm{Ordinal(), k});
    return Ordinal::from_terms(std::move(out));
}

// ---------------------------------------------------------------------------
// Text form

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) {
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (!std::isspace(static_cast<unsigned char>(text[i]))) {
                chars_.push_back(text[i]);
                positions_.push_back(i);
            }
        }
        end_position_ = text.size();
    }

    Ordinal parse_all() {
        Ordinal result = parse_ordinal();
        if (pos_ != chars_.size()) {
            fail("unexpected character '" + std::string(1, chars_[pos_]) + "'");
        }
        return result;
    }

private:
    std::vector<char> chars_;
    std::vector<std::size_t> positions_;
    std::size_t end_position_ = 0;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what, pos_ < positions_.size() ? positions_[pos_] : end_position_);
    }

    bool at_end() const { return pos_ >= chars_.size(); }
    char peek() const { return at_end() ? '\0' : chars_[pos_]; }

    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    Natural parse_digits() {
        if (!std::isdigit(static_cast<unsigned char>(peek()))) {
            fail("expected a natural number");
        }
        if (peek() == '0' && pos_ + 1 < chars_.size() && std::isdigit(static_cast<unsigned char>(chars_[pos_ + 1]))) {
            fail("leading zero in a natural number");
        }
        Natural value = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            value = value * 10 + (chars_[pos_] - '0');
            ++pos_;
        }
        return value;
    }

    Natural parse_positive() {
        const std::size_t start = pos_;
        Natural value = parse_digits();
        if (value == 0) {
            pos_ = start;
            fail("expected a natural number >= 1");
        }
        return value;
    }

    Ordinal parse_ordinal() {
        // Standalone "0" (not the prefix of a longer number).
        if (peek() == '0') {
            const std::size_t start = pos_;
            const Natural value = parse_digits();
            if (value == 0) {
                return Ordinal();
            }
            pos_ = start;
        }
        std::vector<OrdinalTerm> acc;
        add_term(acc, parse_term());
        while (accept('+')) {
            add_term(acc, parse_term());
        }
        return Ordinal::from_terms(std::move(acc));
    }

    OrdinalTerm parse_term() {
        if (accept('w')) {
            Ordinal exponent(std::uint64_t{1});
            if (accept('^')) {
                exponent = parse_atom();
            }
            Natural coefficient = 1;
            if (accept('*')) {
                coefficient = parse_positive();
            }
            return {exponent, coefficient};
        }
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            return {Ordinal(), parse_positive()};
        }
        fail(at_end() ? "unexpected end of input" : "expected a term");
    }

    Ordinal parse_atom() {
        if (accept('w')) {
            return Ordinal::omega();
        }
        if (accept('(')) {
            Ordinal inner = parse_ordinal();
            expect(')');
            return inner;
        }
        return Ordinal(parse_positive());
    }
};

void render_into(std::string& out, const Ordinal& a);

void render_atom(std::string& out, const Ordinal& e) {
    if (e.is_finite()) {
        out += e.terms().front().coefficient.str();
    } else if (e == Ordinal::omega()) {
        out += 'w';
    } else {
        out += '(';
        render_into(out, e);
        out += ')';
    }
}

void render_into(std::string& out, const Ordinal& a) {
    if (a.is_zero()) {
        out += '0';
        return;
    }
    bool first = true;
    for (const auto& t : a.terms()) {
        if (!first) {
            out += '+';
        }
        first = false;
        if (t.exponent.is_zero()) {
            out += t.coefficient.str();
            continue;
        }
        out += 'w';
        if (t.exponent != Ordinal(std::uint64_t{1})) {
            out += '^';
            render_atom(out, t.exponent);
        }
        if (t.coefficient != 1) {
            out += '*';
            out += t.coefficient.str();
        }
    }
}

} // namespace

Ordinal parse(std::string_view text) { return Parser(text).parse_all(); }

std::string render(const Ordinal& a) {
    std::string out;
    render_into(out, a);
    return out;
}

} // namespace rhowalk
