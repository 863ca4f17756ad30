#include "rhowalk/records.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace rhowalk {

namespace {

const char* flag(bool b) { return b ? "1" : "0"; }

struct Record {
    std::string kind;
    std::map<std::string, std::string, std::less<>> fields;

    const std::string& at(std::string_view key, std::size_t line_no) const {
        const auto it = fields.find(key);
        if (it == fields.end()) {
            throw InputError("result line " + std::to_string(line_no) + ": missing field '" + std::string(key) + "'");
        }
        return it->second;
    }
};

Record split_record(const std::string& line) {
    std::istringstream words(line);
    Record r;
    words >> r.kind;
    std::string word;
    while (words >> word) {
        const auto eq = word.find('=');
        if (eq == std::string::npos) {
            continue;
        }
        r.fields.emplace(word.substr(0, eq), word.substr(eq + 1));
    }
    return r;
}

std::uint64_t to_u64(const std::string& text, std::size_t line_no) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos || text.size() > 19) {
        throw InputError("result line " + std::to_string(line_no) + ": expected a natural number, got '" + text + "'");
    }
    return std::stoull(text);
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    if (text.empty()) {
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(text.substr(start, comma - start));
        if (comma == std::string::npos) {
            return out;
        }
        start = comma + 1;
    }
}

} // namespace

std::string format_report(const PropertyReport& r) {
    std::ostringstream out;
    out << "triple=" << render(r.a) << ',' << render(r.b) << ',' << render(r.c) << " ab=" << r.ab.str()
        << " ac=" << r.ac.str() << " bc=" << r.bc.str() << " distinct=" << flag(r.distinct)
        << " upper_ac=" << flag(r.upper_ac) << " upper_ab=" << flag(r.upper_ab) << " implies_ac=" << flag(r.implies_ac)
        << " implies_ab=" << flag(r.implies_ab);
    return out.str();
}

std::string format_summary(const UniverseSummary& s) {
    return "triples=" + std::to_string(s.triples) + " failures=" + std::to_string(s.failures);
}

void write_verify(std::ostream& out, const VerifyReport& report, std::uint64_t depth) {
    const std::pair<const char*, const CheckTally*> checks[] = {
        {"shift", &report.shift}, {"strong", &report.strong}, {"ball", &report.ball}, {"coverage", &report.coverage}};
    for (const auto& [name, tally] : checks) {
        out << "verify check=" << name << " checked=" << tally->checked << " failures=" << tally->failures << '\n';
        for (const auto& sample : tally->samples) {
            out << "failure check=" << name << " detail=" << sample << '\n';
        }
    }
    if (report.crowding) {
        out << "crowding depth=" << depth << " status=failure point=" << report.crowding->point
            << " radius_index=" << report.crowding->depth << '\n';
    } else {
        out << "crowding depth=" << depth << " status=ok\n";
    }
}

void write_result(std::ostream& out, const RefinementResult& result, const PointEnumeration& space,
                  const Labeling& labeling, const Walker& walker, const RefineParams& params,
                  const std::string& labeling_spec) {
    out << "refine labeling=" << labeling_spec << " target=" << params.target << " window=" << params.window
        << " depth=" << params.depth << " lookahead=" << params.lookahead << " budget=" << params.budget
        << " seed=" << params.seed << " beam=" << params.beam << " horizon=" << params.horizon << '\n';
    out << "stats visited=" << result.stats.visited << " backtracks=" << result.stats.backtracks
        << " max_depth=" << result.stats.max_depth << " rhobar_evaluations=" << result.stats.rhobar_evaluations
        << '\n';
    for (std::size_t s = 0; s < result.chosen.size(); ++s) {
        const Index k = result.chosen[s];
        out << "point s=" << s << " index=" << k << " x=" << space.point(k).str()
            << " label=" << render(labeling.label(k)) << '\n';
    }
    for (const auto& c : result.certificate) {
        out << "ball child=" << c.child << " parent=" << c.parent << " j=" << c.j << '\n';
    }
    const std::size_t n = result.chosen.size();
    for (std::size_t a = 0; a + 1 < n; ++a) {
        out << "r row=" << a << " values=";
        for (std::size_t b = a + 1; b < n; ++b) {
            out << (b > a + 1 ? "," : "") << labeling.r(walker, result.chosen[a], result.chosen[b]).str();
        }
        out << '\n';
    }
    write_verify(out, result.report, params.depth);
    out << "result status=" << (result.report.ok() ? "ok" : "violation") << '\n';
}

StoredResult read_result(std::istream& in) {
    StoredResult stored;
    bool saw_header = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const Record rec = split_record(line);
        if (rec.kind.empty() || rec.kind[0] == '#') {
            continue;
        }
        if (rec.kind == "refine") {
            saw_header = true;
            stored.depth = to_u64(rec.at("depth", line_no), line_no);
        } else if (rec.kind == "point") {
            const std::uint64_t s = to_u64(rec.at("s", line_no), line_no);
            if (s != stored.indices.size()) {
                throw InputError("result line " + std::to_string(line_no) + ": point s=" + std::to_string(s) +
                                 " out of order");
            }
            stored.indices.push_back(to_u64(rec.at("index", line_no), line_no));
            try {
                stored.points.push_back(Rational::parse(rec.at("x", line_no)));
                stored.labels.push_back(parse(rec.at("label", line_no)));
            } catch (const ParseError& e) {
                throw InputError("result line " + std::to_string(line_no) + ": " + e.what());
            }
        } else if (rec.kind == "r") {
            const std::uint64_t row = to_u64(rec.at("row", line_no), line_no);
            if (row != stored.r_rows.size()) {
                throw InputError("result line " + std::to_string(line_no) + ": r row out of order");
            }
            stored.r_rows.push_back(split_commas(rec.at("values", line_no)));
        }
    }
    if (!saw_header) {
        throw InputError("result file has no 'refine' header");
    }
    if (stored.indices.empty()) {
        throw InputError("result file has no points");
    }
    return stored;
}

} // namespace rhowalk
