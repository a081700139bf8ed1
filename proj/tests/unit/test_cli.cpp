#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "jointradius/cli.hpp"

using namespace jointradius;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "jointradius");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(JR_DATA_DIR) + "/" + name; }

double value_of(const Run& r) { return nlohmann::json::parse(r.out)["value"].get<double>(); }

}  // namespace

TEST_CASE("norm and radius of the l_inf^4 witness") {
    const auto n = run({"norm", data("linf4_diagonal_k3.json"), "--p", "2", "--mode", "exact"});
    CHECK(n.code == kExitOk);
    CHECK(std::abs(value_of(n) - std::sqrt(3.0)) <= 1e-12);
    CHECK(nlohmann::json::parse(n.out)["exact"] == true);
    CHECK(n.err.empty());
    const auto w = run({"radius", data("linf4_diagonal_k3.json"), "--p", "2", "--mode", "exact"});
    CHECK(w.code == kExitOk);
    CHECK(std::abs(value_of(w) - 1.0) <= 1e-12);
}

TEST_CASE("simple tuples") {
    CHECK(value_of(run({"norm", data("linf4_zero_k2.json")})) == 0.0);
    CHECK(std::abs(value_of(run({"radius", data("l1_3_identity.json"), "--p", "3"})) - 1.0) <= 1e-12);
    const auto c = run({"radius", data("c2_3_witness_p2.json"), "--p", "2", "--mode", "optimize", "--starts", "16"});
    CHECK(c.code == kExitOk);
    CHECK(std::abs(value_of(c) - 1.0 / (2.0 * std::sqrt(2.0))) <= 1e-4);
}

TEST_CASE("exit codes") {
    CHECK(run({"norm", data("l2_2_rotation.json"), "--mode", "exact"}).code == kExitUnsupportedExact);
    const auto missing = run({"norm", data("missing.json")});
    CHECK(missing.code == kExitIo);
    CHECK(missing.out.empty());
    CHECK(!missing.err.empty());
    CHECK(run({"norm", data("l1_3_identity.json"), "--p", "abc"}).code == kExitParse);
    CHECK(run({"norm", data("l1_3_identity.json"), "--p", "0.5"}).code == kExitParse);
    CHECK(run({"frobnicate"}).code == kExitParse);
    CHECK(run({}).code == kExitParse);

    const auto bad = (std::filesystem::temp_directory_path() / "jr_cli_bad.json").string();
    std::ofstream(bad) << "{ not json";
    CHECK(run({"norm", bad}).code == kExitParse);
    std::ofstream(bad) << R"({"space": {"lq": {"q": 1, "dim": 2}}, "mats": [[[1, 0, 0], [0, 1, 0]]]})";
    CHECK(run({"norm", bad}).code == kExitDimension);
    std::filesystem::remove(bad);
}

TEST_CASE("range command") {
    const auto csv = (std::filesystem::temp_directory_path() / "jr_cli_range.csv").string();
    const auto r = run({"range", data("l1_2_shift_pair.json"), "--count", "2000", "--out", csv});
    CHECK(r.code == kExitOk);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["convex_at_resolution"] == false);
    CHECK(doc.contains("witness"));
    std::ifstream in(csv);
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 2001);
    std::filesystem::remove(csv);

    const auto io = run({"range", data("l1_3_identity_zero.json"), "--count", "300"});
    CHECK(nlohmann::json::parse(io.out)["convex_at_resolution"] == true);
    CHECK(run({"range", data("l1_2_shift_pair.json"), "--out", "/nonexistent-dir/x.csv"}).code == kExitIo);
}

TEST_CASE("index command") {
    const auto e = run({"index", data("spaces/linf4.json"), "--p", "2", "--k", "2"});
    CHECK(e.code == kExitOk);
    const auto doc = nlohmann::json::parse(e.out);
    CHECK(std::abs(doc["estimate"].get<double>() - 1.0 / std::sqrt(2.0)) <= 1e-3);
    CHECK(std::abs(doc["closed_form"].get<double>() - 1.0 / std::sqrt(2.0)) <= 1e-12);
    CHECK(doc["pinched"] == true);

    const auto z = nlohmann::json::parse(run({"index", data("spaces/l2_3_real.json"), "--budget", "2000"}).out);
    CHECK(z["lower_bound"] == 0.0);
    CHECK(z["estimate"].get<double>() <= 1e-6);

    const auto l1 = nlohmann::json::parse(run({"index", data("spaces/l1_3.json"), "--p", "1", "--budget", "500"}).out);
    CHECK(l1["closed_form"] == 0.5);
    CHECK(run({"index", data("spaces/l1_3.json"), "--k", "0"}).code == kExitParse);
}

TEST_CASE("verify command emits TAP") {
    const auto v = run({"verify", "--suite", "closedforms"});
    CHECK(v.code == kExitOk);
    CHECK(v.out.rfind("TAP version", 0) == 0);
    CHECK(v.out.find("not ok") == std::string::npos);
}

TEST_CASE("identical invocations print identical bytes") {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"norm", data("c2_3_witness_p3.json"), "--p", "3", "--starts", "4", "--seed", "7"},
          std::vector<std::string>{"radius", data("l1_2_shift_pair.json"), "--p", "1"},
          std::vector<std::string>{"index", data("spaces/l1_2.json"), "--k", "2", "--budget", "300"}}) {
        const auto a = run(args);
        const auto b = run(args);
        CHECK(a.code == kExitOk);
        CHECK(a.out == b.out);
    }
}
