#include "rhowalk/error.hpp"
#include "rhowalk/ordinal.hpp"
#include "rhowalk/qspace.hpp"
#include "rhowalk/records.hpp"
#include "rhowalk/refine.hpp"
#include "rhowalk/walks.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace rhowalk;

namespace {

// One shared walker so repeated calls reuse its memo tables.
const Walker& walker() {
    static const Walker w;
    return w;
}

std::vector<std::string> rendered(const std::vector<Ordinal>& xs) {
    std::vector<std::string> out;
    out.reserve(xs.size());
    for (const auto& x : xs) {
        out.push_back(render(x));
    }
    return out;
}

// Python ints are unbounded, so big values cross as decimal text.
py::int_ to_int(const std::string& decimal) {
    return py::reinterpret_steal<py::int_>(PyLong_FromString(decimal.c_str(), nullptr, 10));
}

py::dict tally(const CheckTally& t) {
    py::dict d;
    d["checked"] = t.checked;
    d["failures"] = t.failures;
    d["samples"] = t.samples;
    return d;
}

py::dict report_dict(const VerifyReport& r) {
    py::dict d;
    d["shift"] = tally(r.shift);
    d["strong"] = tally(r.strong);
    d["ball"] = tally(r.ball);
    d["coverage"] = tally(r.coverage);
    d["ok"] = r.ok();
    return d;
}

std::size_t window_for(const std::vector<Index>& members) {
    std::size_t window = 0;
    for (const auto n : members) {
        window = std::max<std::size_t>(window, n + 1);
    }
    return window;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Ordinal walks, the canonical rational space and the refinement search.";

    auto& error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
    py::register_exception<SearchExhausted>(m, "SearchExhausted", error.ptr());

    m.def("render", [](const std::string& text) { return render(parse(text)); }, py::arg("text"),
          "Canonical form of an ordinal in CNF text.");

    m.def("rho", [](const std::string& a, const std::string& b) { return walker().rho(parse(a), parse(b)); },
          py::arg("alpha"), py::arg("beta"));

    m.def("rhobar",
          [](const std::string& a, const std::string& b) { return to_int(walker().rhobar(parse(a), parse(b)).str()); },
          py::arg("alpha"), py::arg("beta"));

    m.def("walk", [](const std::string& a, const std::string& b) { return rendered(walker().walk_trace(parse(a), parse(b))); },
          py::arg("alpha"), py::arg("beta"));

    m.def("fiber", [](const std::string& a, std::uint32_t n) { return rendered(walker().fiber(parse(a), n).members); },
          py::arg("alpha"), py::arg("n"));

    m.def(
        "check_universe",
        [](const std::string& spec, unsigned threads) {
            const UniverseSummary s = walker().check_universe(parse_universe(spec), threads);
            py::dict d;
            d["size"] = s.size;
            d["triples"] = s.triples;
            d["failures"] = s.failures;
            d["first_failure"] = s.first_failure ? py::object(py::str(format_report(*s.first_failure))) : py::none();
            return d;
        },
        py::arg("spec"), py::arg("threads") = 1);

    m.def("sigma", [](std::uint64_t code) { return sigma(code); }, py::arg("code"));

    m.def(
        "ball_members",
        [](Index i, std::uint64_t j, std::size_t window) {
            return ball_members(PointEnumeration::canonical(window), i, j, window);
        },
        py::arg("i"), py::arg("j"), py::arg("window"));

    m.def(
        "kernel",
        [](std::vector<Index> members, std::uint64_t depth) {
            const auto space = PointEnumeration::canonical(window_for(members));
            return kernel(space, std::move(members), depth);
        },
        py::arg("members"), py::arg("depth"));

    m.def(
        "refine",
        [](const std::string& labeling_spec, std::size_t target, std::size_t window, std::uint64_t depth,
           std::uint64_t lookahead, std::uint64_t budget, std::uint64_t seed, std::size_t beam, std::size_t horizon) {
            RefineParams p;
            p.target = target;
            p.window = window;
            p.depth = depth;
            p.lookahead = lookahead;
            p.budget = budget;
            p.seed = seed;
            p.beam = beam;
            p.horizon = horizon;
            const auto space = PointEnumeration::canonical(window);
            const auto labeling = Labeling::from_spec(labeling_spec, window, seed);
            RefinementResult result;
            {
                py::gil_scoped_release release;
                result = refine(space, labeling, walker(), p);
            }
            std::ostringstream records;
            write_result(records, result, space, labeling, walker(), p, labeling_spec);
            py::dict d;
            d["chosen"] = result.chosen;
            d["visited"] = result.stats.visited;
            d["backtracks"] = result.stats.backtracks;
            d["report"] = report_dict(result.report);
            d["records"] = records.str();
            return d;
        },
        py::arg("labeling"), py::arg("target"), py::arg("window"), py::arg("depth") = 1, py::arg("lookahead") = 1,
        py::arg("budget") = RefineParams{}.budget, py::arg("seed") = 0, py::arg("beam") = RefineParams{}.beam,
        py::arg("horizon") = RefineParams{}.horizon);

    m.def(
        "verify",
        [](const std::vector<Index>& chosen, const std::string& labeling_spec, std::size_t window, std::uint64_t depth,
           std::uint64_t seed) {
            const auto space = PointEnumeration::canonical(window);
            const auto labeling = Labeling::from_spec(labeling_spec, window, seed);
            return report_dict(verify_result(chosen, space, labeling, depth));
        },
        py::arg("chosen"), py::arg("labeling"), py::arg("window"), py::arg("depth") = 1, py::arg("seed") = 0);
}
