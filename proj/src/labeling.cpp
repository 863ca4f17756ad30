#include "rhowalk/refine.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <random>
#include <sstream>

namespace rhowalk {

Labeling::Labeling(std::string name, std::vector<Ordinal> labels)
    : name_(std::move(name)), labels_(std::move(labels)) {
    for (std::size_t n = 1; n < labels_.size(); ++n) {
        if (!(labels_[n - 1] < labels_[n])) {
            throw InvalidLabeling("labeling '" + name_ + "' is not strictly increasing at " + std::to_string(n) +
                                  ": " + render(labels_[n - 1]) + " >= " + render(labels_[n]));
        }
    }
}

Labeling Labeling::from_labels(std::string name, std::vector<Ordinal> labels) {
    return Labeling(std::move(name), std::move(labels));
}

Labeling Labeling::identity(std::size_t count) {
    std::vector<Ordinal> labels;
    labels.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        labels.emplace_back(static_cast<std::uint64_t>(n));
    }
    return Labeling("identity", std::move(labels));
}

Labeling Labeling::omega2_diagonal(std::size_t count) {
    std::vector<Ordinal> labels;
    labels.reserve(count);
    const Ordinal one(std::uint64_t{1});
    for (std::size_t n = 0; n < count; ++n) {
        const auto [x, y] = cantor_unpair(n);
        const std::uint64_t diagonal = x + y;
        std::vector<OrdinalTerm> terms;
        if (diagonal != 0) {
            terms.push_back({one, Natural(diagonal)});
        }
        if (y != 0) {
            terms.push_back({Ordinal(), Natural(y)});
        }
        labels.push_back(Ordinal::from_terms(std::move(terms)));
    }
    return Labeling("omega2-diagonal", std::move(labels));
}

Labeling Labeling::seeded_sample(std::uint32_t k, std::size_t count, std::uint64_t seed) {
    if (k == 0) {
        throw InputError("seeded-sample needs k >= 1 (ordinals below w^k)");
    }
    // Coefficient vectors indexed by exponent; each step bumps a random
    // exponent and rerolls the lower coefficients, so the sequence increases.
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> coeff(k);
    for (auto& c : coeff) {
        c = rng() % 3;
    }
    std::vector<Ordinal> labels;
    labels.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        if (n > 0) {
            const std::size_t e = static_cast<std::size_t>(rng() % k);
            coeff[e] += 1 + rng() % 2;
            for (std::size_t i = 0; i < e; ++i) {
                coeff[i] = rng() % 3;
            }
        }
        std::vector<OrdinalTerm> terms;
        for (std::size_t e = k; e-- > 0;) {
            if (coeff[e] != 0) {
                terms.push_back({Ordinal(static_cast<std::uint64_t>(e)), Natural(coeff[e])});
            }
        }
        labels.push_back(Ordinal::from_terms(std::move(terms)));
    }
    return Labeling("seeded-sample:" + std::to_string(k), std::move(labels));
}

Labeling Labeling::parse(std::istream& in) {
    std::vector<std::optional<Ordinal>> slots;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream fields(line);
        long long n = -1;
        if (!(fields >> n) || n < 0) {
            throw InputError("labeling line " + std::to_string(line_no) + ": expected 'n CNF'");
        }
        std::string rest;
        std::getline(fields, rest);
        Ordinal label;
        try {
            label = rhowalk::parse(rest);
        } catch (const ParseError& e) {
            throw InputError("labeling line " + std::to_string(line_no) + ": " + e.what());
        }
        const auto idx = static_cast<std::size_t>(n);
        if (idx >= slots.size()) {
            slots.resize(idx + 1);
        }
        if (slots[idx]) {
            throw InputError("labeling line " + std::to_string(line_no) + ": index " + std::to_string(idx) +
                             " given twice");
        }
        slots[idx] = std::move(label);
    }
    std::vector<Ordinal> labels;
    labels.reserve(slots.size());
    for (std::size_t n = 0; n < slots.size(); ++n) {
        if (!slots[n]) {
            throw InputError("labeling file has no label for index " + std::to_string(n));
        }
        labels.push_back(std::move(*slots[n]));
    }
    return Labeling("file", std::move(labels));
}

Labeling Labeling::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open labeling file " + path);
    }
    Labeling out = parse(in);
    out.name_ = path;
    return out;
}

Labeling Labeling::from_spec(std::string_view spec, std::size_t count, std::uint64_t seed) {
    if (spec == "identity") {
        return identity(count);
    }
    if (spec == "omega2-diagonal") {
        return omega2_diagonal(count);
    }
    constexpr std::string_view sample = "seeded-sample:";
    if (spec.starts_with(sample)) {
        const std::string k(spec.substr(sample.size()));
        if (k.empty() || k.find_first_not_of("0123456789") != std::string::npos || k.size() > 4) {
            throw InputError("seeded-sample expects a small natural k, got '" + k + "'");
        }
        return seeded_sample(static_cast<std::uint32_t>(std::stoul(k)), count, seed);
    }
    Labeling out = load(std::string(spec));
    if (out.size() < count) {
        throw InputError("labeling file " + std::string(spec) + " has " + std::to_string(out.size()) +
                         " labels, window needs " + std::to_string(count));
    }
    if (out.size() > count) {
        out.labels_.resize(count);
    }
    return out;
}

const Ordinal& Labeling::label(Index n) const {
    if (n >= labels_.size()) {
        throw DomainError("label index " + std::to_string(n) + " outside labeling of size " +
                          std::to_string(labels_.size()));
    }
    return labels_[n];
}

RhoBar Labeling::r(const Walker& walker, Index k, Index l) const {
    if (!(k < l)) {
        throw DomainError("r(k, l) needs k < l");
    }
    return walker.rhobar(label(k), label(l));
}

} // namespace rhowalk
