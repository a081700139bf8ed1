#include "jointradius/cli.hpp"

#include <cmath>
#include <string>

#include <CLI11.hpp>

#include "jointradius/index.hpp"
#include "jointradius/jointcalc.hpp"
#include "jointradius/range.hpp"
#include "jointradius/serialize.hpp"
#include "jointradius/verify.hpp"

namespace jointradius {

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ParseError:
        case ErrorCode::InvalidExponent:
        case ErrorCode::InvalidK:
        case ErrorCode::InvalidSpace:
            return kExitParse;
        case ErrorCode::UnsupportedExact:
        case ErrorCode::CapExceeded:
            return kExitUnsupportedExact;
        case ErrorCode::DimensionMismatch:
        case ErrorCode::DimensionTooLarge:
        case ErrorCode::ShapeMismatch:
        case ErrorCode::SlotMismatch:
        case ErrorCode::NotEndomorphism:
            return kExitDimension;
        case ErrorCode::IoError:
            return kExitIo;
        default:
            return kExitCheckFailed;
    }
}

namespace {

double parse_exponent(const std::string& text) {
    if (text == "inf" || text == "infinity") return kInf;
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::ParseError, "cannot parse exponent '" + text + "'");
}

Mode parse_mode(const std::string& text) {
    if (text == "exact") return Mode::Exact;
    if (text == "optimize") return Mode::Optimize;
    return Mode::Auto;
}

struct CommonFlags {
    std::string file;
    std::string p = "2";
    std::string mode = "auto";
    std::uint64_t seed = 0;
    int starts = 64;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("problem", f.file, "Tuple JSON document")->required();
    cmd->add_option("--p", f.p, "Exponent p >= 1 or 'inf'")->capture_default_str();
    cmd->add_option("--mode", f.mode, "exact | optimize | auto")
        ->check(CLI::IsMember({"exact", "optimize", "auto"}))
        ->capture_default_str();
    cmd->add_option("--seed", f.seed, "Master seed")->capture_default_str();
    cmd->add_option("--starts", f.starts, "Random optimizer starts")->capture_default_str();
}

OptimizeOptions optimizer_options(const CommonFlags& f) {
    OptimizeOptions o;
    o.seed = f.seed;
    o.starts = f.starts;
    return o;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Joint operator norms, joint numerical radii, joint numerical ranges and indices",
                 "jointradius"};
    app.require_subcommand(1);

    CommonFlags norm_flags;
    auto* norm_cmd = app.add_subcommand("norm", "p-th joint operator norm of a tuple");
    add_common(norm_cmd, norm_flags);

    CommonFlags radius_flags;
    auto* radius_cmd = app.add_subcommand("radius", "p-th joint numerical radius of a tuple");
    add_common(radius_cmd, radius_flags);

    std::string range_file, range_out, range_format = "csv", range_mode = "sampled";
    std::size_t range_count = 10000, range_trials = 2000;
    std::uint64_t range_seed = 0;
    double range_tol = 0.05;
    auto* range_cmd = app.add_subcommand("range", "sample W(T), export it and test convexity");
    range_cmd->add_option("problem", range_file, "Tuple JSON document")->required();
    range_cmd->add_option("--count", range_count, "Number of sampled points")->capture_default_str();
    range_cmd->add_option("--seed", range_seed, "Master seed")->capture_default_str();
    range_cmd->add_option("--out", range_out, "Output path for the sample");
    range_cmd->add_option("--format", range_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    range_cmd->add_option("--mode", range_mode, "sampled | enumerated")
        ->check(CLI::IsMember({"sampled", "enumerated"}))
        ->capture_default_str();
    range_cmd->add_option("--convexity-trials", range_trials, "Midpoint trials")->capture_default_str();
    range_cmd->add_option("--tol", range_tol, "Tolerance relative to the bounding-box diagonal")
        ->capture_default_str();

    std::string index_file, index_p = "2";
    int index_k = 2, index_starts = 4;
    std::size_t index_budget = 100000;
    std::uint64_t index_seed = 0;
    auto* index_cmd = app.add_subcommand("index", "estimate n_{(p,k)}(X) with bounds and closed forms");
    index_cmd->add_option("space", index_file, "Space JSON document")->required();
    index_cmd->add_option("--p", index_p, "Exponent p >= 1 or 'inf'")->capture_default_str();
    index_cmd->add_option("--k", index_k, "Tuple length")->capture_default_str();
    index_cmd->add_option("--budget", index_budget, "Ratio evaluations")->capture_default_str();
    index_cmd->add_option("--seed", index_seed, "Master seed")->capture_default_str();
    index_cmd->add_option("--starts", index_starts, "Random search starts")->capture_default_str();

    std::string suite = "all";
    std::uint64_t verify_seed = 0;
    std::size_t verify_trials = 20;
    auto* verify_cmd = app.add_subcommand("verify", "run theorem-verification suites (TAP output)");
    verify_cmd->add_option("--suite", suite, "bounds | adjoint | directsum | closedforms | all")
        ->check(CLI::IsMember({"bounds", "adjoint", "directsum", "closedforms", "all"}))
        ->capture_default_str();
    verify_cmd->add_option("--seed", verify_seed, "Master seed")->capture_default_str();
    verify_cmd->add_option("--trials", verify_trials, "Random tuples per case")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        err << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        err << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        err << CLI11_VERSION << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitParse;
    }

    try {
        if (norm_cmd->parsed() || radius_cmd->parsed()) {
            const bool is_norm = norm_cmd->parsed();
            const CommonFlags& f = is_norm ? norm_flags : radius_flags;
            const auto tuple = tuple_from_json(read_json_file(f.file));
            const double p = parse_exponent(f.p);
            const auto opts = optimizer_options(f);
            const Mode mode = parse_mode(f.mode);
            const auto result = is_norm ? joint_operator_norm(tuple, p, mode, opts)
                                        : joint_numerical_radius(tuple, p, mode, opts);
            out << result_to_json(result, tuple.source().field()).dump(2) << '\n';
            return kExitOk;
        }
        if (range_cmd->parsed()) {
            const auto tuple = tuple_from_json(read_json_file(range_file));
            const auto mode = range_mode == "enumerated" ? RangeMode::Enumerated : RangeMode::Sampled;
            const auto sample = sample_range(tuple, range_count, range_seed, mode);
            if (!range_out.empty())
                export_range(sample, range_out, range_format == "json" ? RangeFormat::JSON : RangeFormat::CSV);
            json doc = convexity_to_json(convexity_report(sample, range_trials, range_tol, range_seed));
            doc["points"] = sample.points.size();
            doc["source"] = to_string(sample.source);
            doc["out"] = range_out.empty() ? json(nullptr) : json(range_out);
            out << doc.dump(2) << '\n';
            return kExitOk;
        }
        if (index_cmd->parsed()) {
            const Space space = space_from_document(read_json_file(index_file));
            IndexOptions opts;
            opts.budget = index_budget;
            opts.seed = index_seed;
            opts.random_starts = index_starts;
            opts.inner.seed = index_seed;
            const auto est = estimate_index(space, parse_exponent(index_p), index_k, opts);
            out << estimate_to_json(est).dump(2) << '\n';
            return kExitOk;
        }
        if (verify_cmd->parsed()) {
            const auto lines = run_suite(suite, verify_seed, verify_trials);
            write_tap(out, lines);
            for (const auto& l : lines)
                if (!l.ok) return kExitCheckFailed;
            return kExitOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
    return kExitParse;
}

}  // namespace jointradius
