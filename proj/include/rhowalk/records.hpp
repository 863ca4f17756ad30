#pragma once

#include "rhowalk/qspace.hpp"
#include "rhowalk/refine.hpp"
#include "rhowalk/walks.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace rhowalk {

// Line-delimited `key=value` records shared by the CLI and the bindings.

// `triple=a,b,c ab=.. ac=.. bc=.. distinct=1 upper_ac=1 ...`
std::string format_report(const PropertyReport& r);
// `triples=.. failures=..`
std::string format_summary(const UniverseSummary& s);

void write_verify(std::ostream& out, const VerifyReport& report, std::uint64_t depth);

// Header, stats, one `point` line per chosen index, the certificate, the
// upper triangle of the r-matrix and the verifier report.
void write_result(std::ostream& out, const RefinementResult& result, const PointEnumeration& space,
                  const Labeling& labeling, const Walker& walker, const RefineParams& params,
                  const std::string& labeling_spec);

// What `verify FILE` needs back from a result file.
struct StoredResult {
    std::vector<Index> indices;
    std::vector<Rational> points;
    std::vector<Ordinal> labels;
    std::vector<std::vector<std::string>> r_rows; // r_rows[a][b - a - 1]
    std::uint64_t depth = 1;
};

// Throws InputError on malformed records.
StoredResult read_result(std::istream& in);

} // namespace rhowalk
