#include "rhowalk/cli.hpp"

#include "rhowalk/records.hpp"
#include "rhowalk/refine.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>

namespace rhowalk::cli {

namespace {

template <typename T, typename F>
std::string list(const std::vector<T>& items, F&& show) {
    std::string s = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) {
            s += ',';
        }
        s += show(items[i]);
    }
    return s + "]";
}

std::string ordinals(const std::vector<Ordinal>& items) {
    return list(items, [](const Ordinal& a) { return render(a); });
}

template <typename T>
std::string numbers(const std::vector<T>& items) {
    return list(items, [](const T& n) { return std::to_string(n); });
}

// Whitespace- or comma-separated naturals; '#' starts a comment.
std::vector<Index> load_index_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open index file " + path);
    }
    std::vector<Index> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = line.substr(0, line.find('#'));
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream words(line);
        std::string word;
        while (words >> word) {
            if (word.find_first_not_of("0123456789") != std::string::npos || word.size() > 18) {
                throw InputError(path + " line " + std::to_string(line_no) + ": '" + word + "' is not an index");
            }
            out.push_back(static_cast<Index>(std::stoull(word)));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct Options {
    std::string cseq_file;
    std::string space_file;
    std::string output;
    bool human = false;
    unsigned threads = 0;
};

class Context {
public:
    explicit Context(const Options& opts) : opts_(opts) {}

    const Walker& walker() {
        if (!walker_) {
            CSequence cseq = opts_.cseq_file.empty() ? CSequence{} : CSequence::load_overrides(opts_.cseq_file);
            walker_.emplace(std::move(cseq));
        }
        return *walker_;
    }

    // The loaded space, or the canonical one with at least `needed` points.
    PointEnumeration space(std::size_t needed) const {
        if (opts_.space_file.empty()) {
            return PointEnumeration::canonical(needed);
        }
        PointEnumeration s = PointEnumeration::load(opts_.space_file);
        if (s.size() < needed) {
            throw InputError("space file " + opts_.space_file + " has " + std::to_string(s.size()) +
                             " points, " + std::to_string(needed) + " needed");
        }
        return s;
    }

    unsigned threads() const {
        if (opts_.threads != 0) {
            return opts_.threads;
        }
        return std::max(1u, std::thread::hardware_concurrency());
    }

    bool human() const { return opts_.human; }

private:
    const Options& opts_;
    std::optional<Walker> walker_;
};

int cmd_verify(Context& ctx, const std::string& path, std::ostream& out) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open result file " + path);
    }
    const StoredResult stored = read_result(in);
    for (std::size_t s = 1; s < stored.indices.size(); ++s) {
        if (!(stored.indices[s - 1] < stored.indices[s])) {
            throw InputError("result file indices are not strictly increasing at s=" + std::to_string(s));
        }
    }
    // Only the chosen points take part in any check, so a compact copy of the
    // space and labeling indexed by position stands in for the originals.
    const PointEnumeration space = PointEnumeration::from_points(stored.points);
    const Labeling labeling = Labeling::from_labels("stored", stored.labels);
    std::vector<Index> positions(stored.indices.size());
    for (std::size_t s = 0; s < positions.size(); ++s) {
        positions[s] = s;
    }
    const Walker& walker = ctx.walker();
    const VerifyReport report = verify_result(positions, space, labeling, stored.depth, walker.cseq());

    const std::size_t n = positions.size();
    std::uint64_t checked = 0;
    std::uint64_t mismatches = 0;
    for (std::size_t a = 0; a + 1 < n; ++a) {
        const std::vector<std::string>* row = a < stored.r_rows.size() ? &stored.r_rows[a] : nullptr;
        for (std::size_t b = a + 1; b < n; ++b) {
            ++checked;
            const std::size_t col = b - a - 1;
            if (row == nullptr || col >= row->size() || (*row)[col] != labeling.r(walker, a, b).str()) {
                ++mismatches;
            }
        }
    }
    write_verify(out, report, stored.depth);
    out << "verify check=matrix checked=" << checked << " failures=" << mismatches << '\n';
    const bool ok = report.ok() && mismatches == 0;
    out << "result status=" << (ok ? "ok" : "violation") << '\n';
    return ok ? kOk : kViolation;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Walks on ordinals below epsilon_0 and rho-bar refinement of rational spaces", "rhowalk"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    Options opts;
    app.add_option("--cseq", opts.cseq_file, "C-sequence override file")->check(CLI::ExistingFile);
    app.add_option("--space", opts.space_file, "space file (default: canonical enumeration)")
        ->check(CLI::ExistingFile);
    app.add_option("-o,--output", opts.output, "write records to this file instead of stdout");
    app.add_flag("--human", opts.human, "aligned, labelled output");
    app.add_option("--threads", opts.threads, "worker threads for check-universe (default: all cores)");

    std::string a_text, b_text, spec, file;
    std::uint64_t count = 0, n_arg = 0, i_arg = 0, j_arg = 0;
    std::function<int(Context&, std::ostream&)> action;

    auto* rho_cmd = app.add_subcommand("rho", "rho(A, B) for A <= B");
    rho_cmd->add_option("A", a_text)->required();
    rho_cmd->add_option("B", b_text)->required();
    rho_cmd->callback([&] {
        action = [&](Context& ctx, std::ostream& o) {
            const Ordinal a = parse(a_text), b = parse(b_text);
            const auto v = ctx.walker().rho(a, b);
            if (ctx.human()) {
                o << "rho(" << render(a) << ", " << render(b) << ") = " << v << '\n';
            } else {
                o << v << '\n';
            }
            return int{kOk};
        };
    });

    auto* rhobar_cmd = app.add_subcommand("rhobar", "rho-bar(A, B) for A < B");
    rhobar_cmd->add_option("A", a_text)->required();
    rhobar_cmd->add_option("B", b_text)->required();
    rhobar_cmd->callback([&] {
        action = [&](Context& ctx, std::ostream& o) {
            const Ordinal a = parse(a_text), b = parse(b_text);
            const RhoBar v = ctx.walker().rhobar(a, b);
            if (ctx.human()) {
                o << "rhobar(" << render(a) << ", " << render(b) << ") = " << v.str() << " = 2^" << v.exponent
                  << " * " << v.odd << '\n';
            } else {
                o << v.str() << '\n';
            }
            return int{kOk};
        };
    });

    auto* walk_cmd = app.add_subcommand("walk", "the walk from B down to A");
    walk_cmd->add_option("A", a_text)->required();
    walk_cmd->add_option("B", b_text)->required();
    walk_cmd->callback([&] {
        action = [&](Context& ctx, std::ostream& o) {
            const auto steps = ctx.walker().walk_trace(parse(a_text), parse(b_text));
            if (ctx.human()) {
                for (std::size_t i = 0; i < steps.size(); ++i) {
                    o << std::setw(4) << i << "  " << render(steps[i]) << '\n';
                }
            } else {
                o << ordinals(steps) << '\n';
            }
            return int{kOk};
        };
    });

    auto* fiber_cmd = app.add_subcommand("fiber", "{xi <= A : rho(xi, A) <= N}");
    fiber_cmd->add_option("A", a_text)->required();
    fiber_cmd->add_option("N", n_arg)->required()->check(CLI::Range(std::uint64_t{0}, std::uint64_t{1} << 31));
    fiber_cmd->callback([&] {
        action = [&](Context& ctx, std::ostream& o) {
            const Fiber f = ctx.walker().fiber(parse(a_text), static_cast<std::uint32_t>(n_arg));
            if (ctx.human()) {
                o << "size " << f.members.size() << '\n';
                for (const auto& m : f.members) {
                    o << "  " << render(m) << '\n';
                }
            } else {
                o << ordinals(f.members) << '\n';
            }
            return int{kOk};
        };
    });

    auto* cseq_cmd = app.add_subcommand("cseq", "the first COUNT elements of C_A");
    cseq_cmd->add_option("A", a_text)->required();
    cseq_cmd->add_option("COUNT", count)->required();
    cseq_cmd->callback([&] {
        action = [&](Context& ctx, std::ostream& o) {
            const Ordinal a = parse(a_text);
            const Walker& w = ctx.walker();
            std::vector<Ordinal> elems;
            const auto kind = classify(a).kind;
            const std::uint64_t available = kind == OrdinalKind::Successor ? std::min<std::uint64_t>(count, 1) : count;
            for (std::uint64_t k = 0; k < available; ++k) {
                elems.push_back(w.cseq().element(a, k));
            }
            o << ordinals(elems) << '\n';
            return int{kOk};
        };
    });

    auto* universe_cmd = app.add_subcommand("check-universe", "check every triple of a universe (w<k>:<c> or a CNF file)");
    universe_cmd->add_option("SPEC", spec)->required();
    universe_cmd->callback([&] {
        action = [&](Context& ctx, std::ostream& o) {
            const auto universe = parse_universe(spec);
            const UniverseSummary s = ctx.walker().check_universe(universe, ctx.threads());
            if (ctx.human()) {
                o << "ordinals  " << s.size << "\ntriples   " << s.triples << "\nfailures  " << s.failures << '\n';
            } else {
                o << format_summary(s) << '\n';
            }
            if (s.first_failure) {
                o << format_report(*s.first_failure) << '\n';
            }
            return s.failures == 0 ? int{kOk} : int{kViolation};
        };
    });

    auto* ball_cmd = app.add_subcommand("ball", "A_{I,J} restricted to [0, N)");
    ball_cmd->add_option("I", i_arg)->required();
    ball_cmd->add_option("J", j_arg)->required();
    ball_cmd->add_option("N", n_arg)->required();
    ball_cmd->callback([&] {
        action = [&](Context& ctx, std::ostream& o) {
            const PointEnumeration space = ctx.space(std::max<std::uint64_t>(n_arg, i_arg + 1));
            o << numbers(ball_members(space, i_arg, j_arg, n_arg)) << '\n';
            return int{kOk};
        };
    });

    auto* kernel_cmd = app.add_subcommand("kernel", "largest subset of the indices in FILE crowded at depth J");
    kernel_cmd->add_option("FILE", file)->required()->check(CLI::ExistingFile);
    kernel_cmd->add_option("J", j_arg)->required();
    kernel_cmd->callback([&] {
        action = [&](Context& ctx, std::ostream& o) {
            const auto members = load_index_set(file);
            const PointEnumeration space = ctx.space(members.empty() ? 0 : members.back() + 1);
            o << numbers(kernel(space, members, j_arg)) << '\n';
            return int{kOk};
        };
    });

    auto* crowd_cmd = app.add_subcommand("crowd", "depth-J crowding certificate for the indices in FILE");
    crowd_cmd->add_option("FILE", file)->required()->check(CLI::ExistingFile);
    crowd_cmd->add_option("J", j_arg)->required();
    crowd_cmd->callback([&] {
        action = [&](Context& ctx, std::ostream& o) {
            const auto members = load_index_set(file);
            const PointEnumeration space = ctx.space(members.empty() ? 0 : members.back() + 1);
            const CrowdingResult r = crowding_check(space, members, j_arg);
            if (const auto* fail = std::get_if<CrowdingFailure>(&r)) {
                o << "failure point=" << fail->point << " depth=" << fail->depth << '\n';
                return int{kViolation};
            }
            const auto& cert = std::get<CrowdingCertificate>(r);
            o << "certificate members=" << numbers(cert.members) << " depth=" << cert.depth << '\n';
            for (std::size_t p = 0; p < cert.members.size(); ++p) {
                for (std::size_t j = 0; j < cert.witnesses[p].size(); ++j) {
                    o << "witness point=" << cert.members[p] << " j=" << j << " n=" << cert.witnesses[p][j] << '\n';
                }
            }
            return int{kOk};
        };
    });

    auto* sigma_cmd = app.add_subcommand("sigma", "the finite sequence with code S");
    sigma_cmd->add_option("S", n_arg)->required();
    sigma_cmd->callback([&] {
        action = [&](Context&, std::ostream& o) {
            o << numbers(sigma(n_arg)) << '\n';
            return int{kOk};
        };
    });

    RefineParams params;
    std::string labeling_spec;
    auto* refine_cmd = app.add_subcommand("refine", "search for a shift-increasing prefix with ball certificates");
    refine_cmd->add_option("--labeling", labeling_spec, "identity, omega2-diagonal, seeded-sample:<k> or a file")
        ->required();
    refine_cmd->add_option("--target", params.target, "the result has TARGET + 1 points")->required();
    refine_cmd->add_option("--window", params.window, "candidates come from [0, WINDOW)")->required();
    refine_cmd->add_option("--depth", params.depth, "crowding depth J")->capture_default_str();
    refine_cmd->add_option("--lookahead", params.lookahead, "balls A_{m,w}, w <= D, enter the score")
        ->capture_default_str();
    refine_cmd->add_option("--budget", params.budget, "search nodes before giving up")->capture_default_str();
    refine_cmd->add_option("--seed", params.seed, "seed for seeded-sample labelings")->capture_default_str();
    refine_cmd->add_option("--beam", params.beam, "candidates scored per batch")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    refine_cmd->add_option("--horizon", params.horizon, "chain points looked at by the score")
        ->capture_default_str();
    refine_cmd->callback([&] {
        action = [&](Context& ctx, std::ostream& o) {
            const PointEnumeration space = ctx.space(params.window);
            const Labeling labeling = Labeling::from_spec(labeling_spec, params.window, params.seed);
            try {
                const RefinementResult result = refine(space, labeling, ctx.walker(), params);
                write_result(o, result, space, labeling, ctx.walker(), params, labeling_spec);
                return result.report.ok() ? int{kOk} : int{kViolation};
            } catch (const SearchExhausted& e) {
                o << "exhausted visited=" << e.stats().visited << " backtracks=" << e.stats().backtracks
                  << " deepest=" << numbers(e.deepest()) << '\n';
                throw;
            }
        };
    });

    auto* verify_cmd = app.add_subcommand("verify", "re-check a refine result file");
    verify_cmd->add_option("FILE", file)->required()->check(CLI::ExistingFile);
    verify_cmd->callback([&] {
        action = [&](Context& ctx, std::ostream& o) { return cmd_verify(ctx, file, o); };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "rhowalk: " << e.what() << '\n';
        return kUsage;
    }

    Context ctx(opts);
    std::ostringstream records;
    int code = kOk;
    try {
        code = action(ctx, records);
    } catch (const SearchExhausted& e) {
        err << "rhowalk: " << e.what() << '\n';
        code = kExhausted;
    } catch (const Error& e) {
        err << "rhowalk: " << e.what() << '\n';
        return kUsage;
    }
    if (opts.output.empty()) {
        out << records.str();
    } else {
        std::ofstream file_out(opts.output, std::ios::binary);
        if (!(file_out << records.str()) || !file_out.flush()) {
            err << "rhowalk: cannot write " << opts.output << '\n';
            return kUsage;
        }
    }
    return code;
}

} // namespace rhowalk::cli
