#include "doctest.h"
#include "oracles.hpp"
#include "schema_check.hpp"

#include "sigbound/cli.hpp"
#include "sigbound/reportio.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sigbound;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run sb(std::vector<std::string> args) {
    args.insert(args.begin(), "sigbound");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "sigbound_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string dft6() {
    const auto p = scratch("w6.csv").string();
    REQUIRE(sb({"dft", "--n", "6", "--k", "1", "--out", p}).code == 0);
    return p;
}

std::string all_labels6() {
    const auto p = scratch("all6.txt");
    write(p, io::labels_to_dense(testing::all_assignments(6)));
    return p.string();
}

}  // namespace

TEST_CASE("count") {
    CHECK(sb({"count", "--n", "3", "--d", "2"}).out == "6\n");
    CHECK(sb({"count", "--n", "6", "--k", "2", "--kind", "alternating"}).out == "32\n");
    CHECK(sb({"count", "--n", "5", "--k", "1", "--kind", "active"}).out == "6\n");
    CHECK(sb({"count", "--n", "200", "--d", "300"}).out ==
          "1606938044258990275541962092341162602522202993782792835301376\n");
    CHECK(sb({"count", "--n", "3"}).code == cli::kUsageError);
    CHECK(sb({"count", "--n", "3", "--k", "5", "--kind", "active"}).code == cli::kUsageError);
    CHECK(sb({"count", "--n", "3", "--k", "1", "--kind", "weird"}).code == cli::kUsageError);
}

TEST_CASE("dft to stdout and file") {
    const auto r = sb({"dft", "--n", "6", "--k", "1"});
    CHECK(r.code == 0);
    const auto m = io::parse_csv_matrix(r.out);
    CHECK(m.rows() == 6);
    CHECK(m.cols() == 3);

    const auto p = scratch("slack.csv");
    CHECK(sb({"dft", "--n", "20", "--k", "2", "--s", "4", "--seed", "9", "--out", p.string()}).code == 0);
    const auto w = io::parse_matrix(p);
    CHECK(w.d() == 9);
    CHECK(w.provenance().kind == ProvenanceKind::DftWithSlack);

    CHECK(sb({"dft", "--n", "4", "--k", "2"}).code == cli::kUsageError);
    CHECK(sb({"dft", "--preset", "mars"}).code == cli::kUsageError);
    CHECK(sb({"dft", "--preset", "bioasq"}).code == cli::kUsageError);  // needs --n
}

TEST_CASE("check") {
    const auto r = sb({"check", "--matrix", dft6(), "--deterministic"});
    CHECK(r.code == 0);
    const auto j = io::json::parse(r.out);
    CHECK(j["gr_plus"]["uniform"] == true);
    CHECK(j["gr_plus"]["checked_minors"] == 20);
    CHECK(j["timestamp"].is_null());
    CHECK(testing::schema_errors(j, "check").empty());

    const auto mixed = scratch("mixed.csv");
    write(mixed, "1,0\n1,1\n-1,-2\n1,3\n");
    const auto m = io::json::parse(sb({"check", "--matrix", mixed.string()}).out);
    CHECK(m["gr_plus"]["verdict"] == "MixedSigns");
    CHECK(m["timestamp"].is_string());
}

TEST_CASE("verify") {
    const auto w = dft6();
    const auto labels = all_labels6();
    const auto r = sb({"verify", "--matrix", w, "--labels", labels, "--deterministic"});
    CHECK(r.code == cli::kUnargmaxableFound);
    const auto j = io::json::parse(r.out);
    CHECK(j["summary"]["argmaxable"] == 32);
    CHECK(j["summary"]["not_eps"] == 32);
    CHECK(j["results"].size() == 64);
    const auto errors = testing::schema_errors(j, "verify");
    for (const auto& e : errors) MESSAGE(e);
    CHECK(errors.empty());

    const auto ok = scratch("ok6.txt");
    write(ok, "n=6\n1\n3\n\n");
    CHECK(sb({"verify", "--matrix", w, "--labels", ok.string()}).code == cli::kSuccess);

    const auto bad = scratch("bad6.txt");
    write(bad, "+--\n");
    CHECK(sb({"verify", "--matrix", w, "--labels", bad.string()}).code == cli::kInputError);
    CHECK(sb({"verify", "--matrix", "/nonexistent.csv", "--labels", ok.string()}).code == cli::kInputError);
    CHECK(sb({"verify", "--matrix", w, "--labels", ok.string(), "--eps", "1e-12"}).code ==
          cli::kUsageError);
}

TEST_CASE("deterministic reports are byte-identical") {
    const auto w = dft6();
    const auto labels = all_labels6();
    const std::vector<std::string> args{"verify", "--matrix", w, "--labels", labels,
                                        "--deterministic", "--jobs", "2"};
    const auto a = sb(args);
    const auto b = sb(args);
    CHECK(a.out == b.out);

    const std::vector<std::string> e{"enumerate", "--matrix", w, "--seed", "3", "--deterministic"};
    CHECK(sb(e).out == sb(e).out);

    const auto file = scratch("report.json");
    auto with_out = args;
    with_out.push_back("--out");
    with_out.push_back(file.string());
    const auto c = sb(with_out);
    CHECK(c.out.empty());
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == a.out);
}

TEST_CASE("enumerate") {
    const auto j = io::json::parse(sb({"enumerate", "--matrix", dft6(), "--deterministic"}).out);
    CHECK(j["method"] == "sampled_complete");
    CHECK(j["count"] == 32);
    CHECK(testing::schema_errors(j, "enumerate").empty());

    const auto planar = scratch("planar.csv");
    write(planar, "1,0.2\n-0.3,1\n0.7,-0.9\n");
    const auto p = io::json::parse(sb({"enumerate", "--matrix", planar.string()}).out);
    CHECK(p["method"] == "exact2d");
    CHECK(p["count"] == 6);
    CHECK(sb({"enumerate", "--matrix", planar.string(), "--method", "nope"}).code == cli::kUsageError);
}

TEST_CASE("radii") {
    const auto r = sb({"radii", "--matrix", dft6(), "--k", "1", "--percentiles", "0,50,100",
                       "--deterministic"});
    CHECK(r.code == 0);
    const auto j = io::json::parse(r.out);
    CHECK(j["members"] == 7);
    CHECK(j["table"].size() == 3);
    CHECK(testing::schema_errors(j, "radii").empty());
    CHECK(sb({"radii", "--matrix", dft6(), "--percentiles", "150"}).code == cli::kUsageError);
    CHECK(sb({"radii", "--matrix", dft6(), "--k", "9"}).code == cli::kUsageError);
}

TEST_CASE("metrics") {
    const auto scores = scratch("scores.csv");
    const auto gold = scratch("gold.txt");
    write(scores, "0.9,0.8,0.1\n0.2,0.1,0.7\n");
    write(gold, "+--\n--+\n");
    const auto r = sb({"metrics", "--scores", scores.string(), "--gold", gold.string(), "--k", "1,2",
                       "--deterministic"});
    CHECK(r.code == 0);
    const auto j = io::json::parse(r.out);
    CHECK(j["at_k"][0]["precision"] == 1.0);
    CHECK(j["at_k"][1]["precision"] == 0.5);
    CHECK(j["records"] == 2);
    CHECK(testing::schema_errors(j, "metrics").empty());
    CHECK(sb({"metrics", "--scores", scores.string(), "--gold", gold.string()}).code ==
          cli::kUsageError);  // default k = 8 exceeds n = 3
}

TEST_CASE("usage errors and help") {
    CHECK(sb({}).code == cli::kUsageError);
    CHECK(sb({"verify", "--bogus"}).code == cli::kUsageError);
    CHECK(sb({"frobnicate"}).code == cli::kUsageError);

    const auto h = sb({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("verify") != std::string::npos);

    const auto vh = sb({"verify", "--help"});
    CHECK(vh.code == 0);
    CHECK(vh.out.find("--eps") != std::string::npos);
    CHECK(vh.out.find("1e-08") != std::string::npos);
    CHECK(vh.out.find("10000") != std::string::npos);
}
