// End-to-end tests of the command-line binary: exit codes, output formats
// and the seed-override environment variable. The binary path comes from the
// build system via KACZMARZ_CLI_PATH.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "kaczmarz/io.hpp"
#include "support/testutil.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using testutil::contains;

namespace {

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "kaczmarz_cli_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    const fs::path out_file = work_dir() / "stdout.txt";
    const fs::path err_file = work_dir() / "stderr.txt";
    const std::string cmd = std::string("\"") + KACZMARZ_CLI_PATH + "\" " + args + " > \"" +
                            out_file.string() + "\" 2> \"" + err_file.string() + "\"";
    const int rc = std::system(cmd.c_str());
    RunResult r;
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    r.code = WEXITSTATUS(rc);
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

std::vector<json> json_lines(const fs::path& p) {
    std::ifstream f(p);
    std::vector<json> lines;
    std::string line;
    while (std::getline(f, line))
        if (!line.empty()) lines.push_back(json::parse(line));
    return lines;
}

}  // namespace

TEST_CASE("solve exits 0 on convergence and 2 on the iteration cap") {
    const RunResult ok = run_cli("solve --matrix gen:60x20:3 --seed 3");
    CHECK(ok.code == 0);
    CHECK(contains(ok.out, "method=gk"));
    CHECK(contains(ok.out, "converged=true"));

    const RunResult capped = run_cli("solve --matrix gen:60x20:3 --seed 3 --max-iters 1");
    CHECK(capped.code == 2);
    CHECK(contains(capped.out, "converged=false"));
}

TEST_CASE("usage problems exit 64") {
    CHECK(run_cli("solve --matrix gen:10x5:1 --method rgrk --theta 1.5").code == 64);
    CHECK(run_cli("solve --matrix gen:10x5:1 --no-such-flag").code == 64);
    CHECK(run_cli("").code == 64);                       // subcommand required
    CHECK(run_cli("solve --matrix gen:0x5:1").code == 64);  // bad spec dims
    CHECK(run_cli("solve --matrix gen:2x2:1 --method newton").code == 64);
}

TEST_CASE("missing input exits 66, unwritable output exits 73") {
    const RunResult missing = run_cli("solve --matrix /definitely/not/here.mtx");
    CHECK(missing.code == 66);
    CHECK(contains(missing.err, "kaczmarz:"));

    const fs::path bad_out = work_dir() / "no_such_dir" / "x.mtx";
    const RunResult unwritable =
        run_cli("gen --rows 4 --cols 2 --seed 1 --out \"" + bad_out.string() + "\"");
    CHECK(unwritable.code == 73);
}

TEST_CASE("gen emits a deterministic matrix market file that reads back exactly") {
    const fs::path f1 = work_dir() / "gen1.mtx";
    const fs::path f2 = work_dir() / "gen2.mtx";
    CHECK(run_cli("gen --rows 5 --cols 3 --seed 9 --out \"" + f1.string() + "\"").code == 0);
    CHECK(run_cli("gen --rows 5 --cols 3 --seed 9 --out \"" + f2.string() + "\"").code == 0);

    const std::string text = slurp(f1);
    CHECK(text == slurp(f2));  // same seed, same bytes
    CHECK(text.rfind("%%MatrixMarket matrix array real general\n", 0) == 0);

    const kaczmarz::MatrixHandle A = kaczmarz::read_matrix_market_file(f1.string());
    const kaczmarz::MatrixHandle G = kaczmarz::gen_gaussian(5, 3, 9);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(A.entry(i, j) == G.entry(i, j));
}

TEST_CASE("solve writes a JSON-lines report matching the run") {
    const fs::path report = work_dir() / "solve.jsonl";
    const RunResult r = run_cli("solve --matrix gen:12x4:2 --seed 2 --trace full --out \"" +
                                report.string() + "\"");
    REQUIRE(r.code == 0);

    const std::vector<json> lines = json_lines(report);
    REQUIRE(lines.size() >= 2);
    const json& summary = lines.front();
    CHECK(summary.at("type") == "summary");
    CHECK(summary.at("method") == "gk");
    CHECK(summary.at("m") == 12);
    CHECK(summary.at("n") == 4);
    CHECK(summary.at("converged") == true);
    CHECK(summary.at("solution").size() == 4);
    const auto iterations = summary.at("iterations").get<std::size_t>();
    CHECK(lines.size() == iterations + 1);  // one line per traced iteration
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const json& it = lines[k];
        CHECK(it.at("type") == "iteration");
        CHECK(it.at("k") == k - 1);
        CHECK(it.contains("chosen"));
        CHECK(it.contains("set_size"));
        CHECK(it.contains("step_sq"));        // full-trace payloads present
        CHECK(it.contains("set_norm_sum"));
    }

    // indices-level trace drops the floating-point payloads
    const fs::path thin = work_dir() / "solve_indices.jsonl";
    REQUIRE(run_cli("solve --matrix gen:12x4:2 --seed 2 --trace indices --out \"" +
                    thin.string() + "\"")
                .code == 0);
    const std::vector<json> thin_lines = json_lines(thin);
    REQUIRE(thin_lines.size() == iterations + 1);
    CHECK_FALSE(thin_lines[1].contains("step_sq"));
    CHECK(thin_lines[1].contains("chosen"));
}

TEST_CASE("bench prints the pinned CSV schema") {
    const RunResult r = run_cli("bench --matrix gen:40x10:2 --repeats 2 --seed-base 5");
    REQUIRE(r.code == 0);
    std::istringstream out(r.out);
    std::string header;
    REQUIRE(std::getline(out, header));
    CHECK(header ==
          "label,m,n,density,method,theta,mean_IT,mean_CPU_seconds,IT_speedup_1,"
          "IT_speedup_2,CPU_speedup_1,CPU_speedup_2");
    std::string line;
    std::size_t data_lines = 0;
    while (std::getline(out, line))
        if (!line.empty()) ++data_lines;
    CHECK(data_lines == 3);  // default methods grk,rgrk,gk on one matrix
    CHECK(contains(r.out, "gen:40x10:2"));
}

TEST_CASE("KACZMARZ_SEED overrides the seed-base flag") {
    const fs::path out_file = work_dir() / "stdout_env.txt";
    const fs::path err_file = work_dir() / "stderr_env.txt";
    const std::string base = std::string("\"") + KACZMARZ_CLI_PATH +
                             "\" bench --matrix gen:40x10:2 --repeats 1 --seed-base 5 > \"" +
                             out_file.string() + "\" 2> \"" + err_file.string() + "\"";

    int rc = std::system(("KACZMARZ_SEED=7 " + base).c_str());
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    CHECK(WEXITSTATUS(rc) == 0);
    CHECK(contains(slurp(err_file), "seed-base overridden by KACZMARZ_SEED=7"));

    rc = std::system(("KACZMARZ_SEED=abc " + base).c_str());
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    CHECK(WEXITSTATUS(rc) == 64);
}

TEST_CASE("bounds verifies a small generated system") {
    const fs::path report = work_dir() / "bounds.json";
    const RunResult r =
        run_cli("bounds --matrix gen:30x10:7 --seed 7 --out \"" + report.string() + "\"");
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "lambda_min_pos="));
    CHECK(contains(r.out, "check alpha_range: pass"));
    CHECK(contains(r.out, "check pythagoras: pass"));
    CHECK(contains(r.out, "check envelope: pass"));

    std::ifstream f(report);
    const json doc = json::parse(f);
    CHECK(doc.at("converged") == true);
    CHECK(doc.at("checks").at("pythagoras").at("pass") == true);
    CHECK(doc.at("checks").at("step_factor").at("applicable") == true);
    CHECK(doc.at("checks").at("alpha_range") == true);
    CHECK(doc.at("alpha").get<double>() >= 1.0);
    CHECK(doc.at("factor_step").is_array());
}
