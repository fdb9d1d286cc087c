#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

#include "ppbf/cli.hpp"

using namespace ppbf;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

struct CacheDirGuard {
    CacheDirGuard() {
        dir = std::filesystem::temp_directory_path() /
              ("ppbf-test-cache-" + std::to_string(::getpid()));
        ::setenv("PPBF_CACHE_DIR", dir.c_str(), 1);
    }
    ~CacheDirGuard() {
        std::error_code ec;
        std::filesystem::remove_all(dir, ec);
        ::unsetenv("PPBF_CACHE_DIR");
    }
    std::filesystem::path dir;
};

} // namespace

TEST_CASE("help exits zero and documents subcommands") {
    const auto r = run({"--help"});
    REQUIRE(r.code == 0);
    for (const char* cmd : {"simulate", "sweep", "decode", "verify", "dump-code", "build-template"})
        REQUIRE(r.out.find(cmd) != std::string::npos);
}

TEST_CASE("unknown flags are rejected with exit 1") {
    REQUIRE(run({"simulate", "--family", "toric", "--L", "3", "--p", "0.05", "--wat"}).code == 1);
    REQUIRE(run({"nonsense"}).code == 1);
    REQUIRE(run({}).code == 1);
}

TEST_CASE("bad parameter values exit 1") {
    CacheDirGuard cache;
    REQUIRE(run({"simulate", "--family", "torus", "--L", "3", "--p", "0.05"}).code == 1);
    REQUIRE(run({"simulate", "--family", "toric", "--L", "3", "--p", "0.9",
                 "--max-trials", "10", "--target-failures", "5"}).code == 1);
    REQUIRE(run({"decode", "--family", "toric", "--L", "3", "--syndrome", "01"}).code == 1);
}

TEST_CASE("simulate emits a config echo and one row") {
    CacheDirGuard cache;
    const std::vector<std::string> argv{"simulate", "--family", "toric",  "--L",
                                        "3",        "--p",      "0.05",   "--seed",
                                        "42",       "--max-trials", "300", "--target-failures",
                                        "20"};
    const auto r = run(argv);
    REQUIRE(r.code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 4);
    REQUIRE(lines[0].rfind("# ppbf", 0) == 0);
    REQUIRE(lines[1].rfind("# config:", 0) == 0);
    REQUIRE(lines[1].find("seed=42") != std::string::npos);
    REQUIRE(lines[1].find("depth=L") != std::string::npos);
    REQUIRE(lines[2] == csv_header());
    REQUIRE(lines[3].rfind("toric,3,3,0.05,ppbf,", 0) == 0);
    REQUIRE(lines[3].find(",42,0.000") != std::string::npos);
}

TEST_CASE("identical invocations give byte-identical stdout across job counts") {
    CacheDirGuard cache;
    const std::vector<std::string> base{"simulate", "--family", "rotated-planar",
                                        "--L",      "5",        "--p",
                                        "0.08",     "--seed",   "7",
                                        "--max-trials", "400",  "--target-failures", "30"};
    auto with_jobs = [&](const char* n) {
        auto argv = base;
        argv.insert(argv.end(), {"--jobs", n});
        return run(argv);
    };
    const auto a = with_jobs("1");
    const auto b = with_jobs("4");
    const auto c = run(base);
    REQUIRE(a.code == 0);
    REQUIRE(a.out == b.out);
    REQUIRE(a.out == c.out);
}

TEST_CASE("sweep emits the grid and a threshold line") {
    CacheDirGuard cache;
    const auto r = run({"sweep", "--family", "toric", "--L", "3,5", "--p", "0.04:0.1:0.02",
                        "--seed", "3", "--max-trials", "200", "--target-failures", "50",
                        "--jobs", "2"});
    REQUIRE(r.code == 0);
    const auto lines = lines_of(r.out);
    // 2 comment lines + header + 8 rows + threshold line.
    REQUIRE(lines.size() == 12);
    REQUIRE(lines.back().rfind("# threshold-interval", 0) == 0);
    int rows = 0;
    for (const auto& l : lines)
        if (l.rfind("toric,", 0) == 0) ++rows;
    REQUIRE(rows == 8);
}

TEST_CASE("a 3x7 sweep grid emits 21 rows") {
    CacheDirGuard cache;
    const auto r = run({"sweep", "--family", "toric", "--L", "5,7,9", "--p", "0.06:0.09:0.005",
                        "--seed", "7", "--max-trials", "60", "--target-failures", "6"});
    REQUIRE(r.code == 0);
    int rows = 0;
    for (const auto& l : lines_of(r.out))
        if (l.rfind("toric,", 0) == 0) ++rows;
    REQUIRE(rows == 21);
    REQUIRE(lines_of(r.out).back().rfind("# threshold-interval", 0) == 0);
}

TEST_CASE("jsonl format emits parseable rows") {
    CacheDirGuard cache;
    const auto r = run({"simulate", "--family", "toric", "--L", "3", "--p", "0.05", "--seed",
                        "5", "--max-trials", "100", "--target-failures", "10", "--format",
                        "jsonl"});
    REQUIRE(r.code == 0);
    const auto lines = lines_of(r.out);
    const auto j = nlohmann::json::parse(lines.back());
    REQUIRE(j["family"] == "toric");
    REQUIRE(j["L"] == 3);
    REQUIRE(j["trials"].get<int>() <= 100);
    REQUIRE(j["seconds"] == 0.0);
}

TEST_CASE("decode reports the degenerate-pair estimate") {
    CacheDirGuard cache;
    const auto r = run({"decode", "--family", "rotated-planar", "--L", "5", "--syndrome",
                        "000100010000"});
    REQUIRE(r.code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    const auto cfg = nlohmann::json::parse(lines[0]);
    REQUIRE(cfg["syndrome_weight"] == 2);
    const auto res = nlohmann::json::parse(lines[1]);
    REQUIRE(res["converged"] == true);
    REQUIRE(res["residual_weight"] == 0);
    REQUIRE(res["estimate_support"] == nlohmann::json::array({7, 12}));
}

TEST_CASE("decode accepts hex syndromes") {
    CacheDirGuard cache;
    // Bits 3 and 7 of twelve: 0001 0001 0000 -> 0x110.
    const auto r = run({"decode", "--family", "rotated-planar", "--L", "5", "--syndrome",
                        "0x110"});
    REQUIRE(r.code == 0);
    const auto res = nlohmann::json::parse(lines_of(r.out)[1]);
    REQUIRE(res["estimate_support"] == nlohmann::json::array({7, 12}));
}

TEST_CASE("dump-code emits the documented schema") {
    const auto r = run({"dump-code", "--family", "rotated-planar", "--L", "3"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["family"] == "rotated-planar");
    REQUIRE(j["L"] == 3);
    REQUIRE(j["checks"].size() == 4);
    REQUIRE(j["logicals"].size() == 1);
    REQUIRE(j["logicals"][0].size() == 3);
}

TEST_CASE("verify battery passes and reports json lines") {
    const auto r = run({"verify", "--family", "toric", "--L", "3"});
    REQUIRE(r.code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() >= 6);
    for (const auto& line : lines) {
        const auto j = nlohmann::json::parse(line);
        REQUIRE(j["status"] == "pass");
        REQUIRE(j["family"] == "toric");
    }
}

TEST_CASE("build-template writes the cache file and simulate reuses it") {
    CacheDirGuard cache;
    const auto r = run({"build-template", "--family", "toric", "--L", "5"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const std::string path = j["path"];
    REQUIRE(std::filesystem::exists(path));

    const auto r2 = run({"simulate", "--family", "toric", "--L", "5", "--p", "0.05",
                         "--max-trials", "50", "--target-failures", "5"});
    REQUIRE(r2.code == 0);
    REQUIRE(r2.err.find("loaded influence template") != std::string::npos);
}

TEST_CASE("template cache json round trip") {
    const InfluenceTemplate t = build_template(Family::rotated_planar, 5, 4);
    const InfluenceTemplate back = template_from_json(template_to_json(t));
    REQUIRE(back.family == t.family);
    REQUIRE(back.L == t.L);
    REQUIRE(back.D == t.D);
    REQUIRE(back.gamma_ref == t.gamma_ref);
    REQUIRE(back.nu_ref == t.nu_ref);
    REQUIRE(back.alpha_ref == t.alpha_ref);
    REQUIRE(back.phi_c == t.phi_c);
    REQUIRE(back.phi_v == t.phi_v);
    REQUIRE(back.alpha_rows == t.alpha_rows);
    REQUIRE(back.ref_check == t.ref_check);
}
