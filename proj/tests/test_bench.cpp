#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "kaczmarz/bench.hpp"
#include "kaczmarz/io.hpp"
#include "support/fixtures.hpp"

using namespace kaczmarz;

namespace {

const BenchRow& row_of(const BenchTable& table, const std::string& label, Method method) {
    const auto it = std::find_if(table.rows.begin(), table.rows.end(), [&](const BenchRow& r) {
        return r.label == label && r.method == method;
    });
    REQUIRE(it != table.rows.end());
    return *it;
}

}  // namespace

TEST_CASE("gk rows average a deterministic iteration count") {
    std::vector<Problem> problems;
    problems.push_back(make_consistent_problem(gen_gaussian(60, 20, 4), 4, "p4"));

    BenchOptions opt;
    opt.methods = {Method::gk};
    opt.repeats = 3;
    const BenchTable table = run_bench(problems, opt);
    REQUIRE(table.rows.size() == 1);
    const BenchRow& gk = table.rows.front();

    SolveConfig cfg;
    cfg.trace = TraceLevel::none;
    const SolveReport rep = solve(problems[0], Strategy{Method::gk, 1.0, 0}, cfg);
    CHECK(rep.converged);
    // Deterministic method: every repeat runs the same count, so the mean is
    // that integer exactly.
    CHECK(gk.mean_iterations == static_cast<double>(rep.iterations));
    CHECK(gk.repeats == 3);
    CHECK(gk.all_converged);
    CHECK(gk.m == 60);
    CHECK(gk.n == 20);
    CHECK(gk.density == problems[0].A.density());
    CHECK_FALSE(gk.theta.has_value());
    CHECK_FALSE(gk.it_speedup_1.has_value());  // grk/rgrk absent: no ratios
}

TEST_CASE("speed-up columns are exact quotients of the stored means") {
    std::vector<Problem> problems;
    problems.push_back(make_consistent_problem(gen_gaussian(80, 16, 1), 1, "a"));
    problems.push_back(make_consistent_problem(gen_gaussian(50, 25, 2), 2, "b"));

    BenchOptions opt;  // default methods: grk, rgrk, gk
    opt.repeats = 2;
    opt.seed_base = 7;
    const BenchTable table = run_bench(problems, opt);
    REQUIRE(table.rows.size() == 6);

    for (const std::string label : {"a", "b"}) {
        const BenchRow& gk = row_of(table, label, Method::gk);
        const BenchRow& grk = row_of(table, label, Method::grk);
        const BenchRow& rgrk = row_of(table, label, Method::rgrk);
        CHECK(rgrk.theta == 1.0);
        CHECK_FALSE(grk.theta.has_value());

        for (const BenchRow* r : {&gk, &grk, &rgrk}) {
            REQUIRE(r->it_speedup_1.has_value());
            REQUIRE(r->it_speedup_2.has_value());
            REQUIRE(r->cpu_speedup_1.has_value());
            REQUIRE(r->cpu_speedup_2.has_value());
            // The ratios are quotients of the mean columns, bit for bit.
            CHECK(*r->it_speedup_1 == grk.mean_iterations / gk.mean_iterations);
            CHECK(*r->it_speedup_2 == rgrk.mean_iterations / gk.mean_iterations);
            CHECK(*r->cpu_speedup_1 == grk.mean_cpu_seconds / gk.mean_cpu_seconds);
            CHECK(*r->cpu_speedup_2 == rgrk.mean_cpu_seconds / gk.mean_cpu_seconds);
            CHECK(r->all_converged);
            CHECK(r->mean_cpu_seconds > 0.0);
        }
    }
}

TEST_CASE("ratios require the full gk/grk/rgrk trio") {
    std::vector<Problem> problems;
    problems.push_back(make_consistent_problem(gen_gaussian(40, 10, 3), 3, "t"));

    BenchOptions opt;
    opt.methods = {Method::gk, Method::grk};  // rgrk missing
    opt.repeats = 1;
    const BenchTable table = run_bench(problems, opt);
    REQUIRE(table.rows.size() == 2);
    for (const BenchRow& r : table.rows) {
        CHECK_FALSE(r.it_speedup_1.has_value());
        CHECK_FALSE(r.cpu_speedup_2.has_value());
    }

    // With all three present, an additional rk row carries the ratios too.
    opt.methods = {Method::rk, Method::grk, Method::rgrk, Method::gk};
    const BenchTable full = run_bench(problems, opt);
    REQUIRE(full.rows.size() == 4);
    CHECK(row_of(full, "t", Method::rk).it_speedup_1.has_value());
}

TEST_CASE("a failing problem is skipped, the rest still run") {
    std::vector<Problem> problems;
    // No known solution: the default stopping rule cannot be evaluated and
    // the solver rejects the configuration for every method.
    problems.push_back(make_problem(gen_gaussian(5, 3, 11), Vector{1, 2, 3, 4, 5},
                                    std::nullopt, {}, "broken"));
    problems.push_back(make_consistent_problem(gen_gaussian(40, 10, 5), 5, "good"));

    BenchOptions opt;
    opt.repeats = 1;
    const BenchTable table = run_bench(problems, opt);
    REQUIRE(table.rows.size() == 3);
    for (const BenchRow& r : table.rows) CHECK(r.label == "good");
}

TEST_CASE("identical options reproduce identical iteration means") {
    std::vector<Problem> problems;
    problems.push_back(make_consistent_problem(gen_gaussian(70, 20, 9), 9, "r"));

    BenchOptions opt;
    opt.repeats = 4;
    opt.seed_base = 100;
    const BenchTable first = run_bench(problems, opt);
    const BenchTable second = run_bench(problems, opt);
    REQUIRE(first.rows.size() == second.rows.size());
    for (std::size_t i = 0; i < first.rows.size(); ++i) {
        CHECK(first.rows[i].method == second.rows[i].method);
        CHECK(first.rows[i].mean_iterations == second.rows[i].mean_iterations);
        CHECK(first.rows[i].all_converged == second.rows[i].all_converged);
    }
}

TEST_CASE("bench options are validated") {
    std::vector<Problem> problems;
    problems.push_back(make_consistent_problem(gen_gaussian(4, 2, 1), 1, "v"));
    BenchOptions opt;
    opt.repeats = 0;
    CHECK_THROWS_AS(run_bench(problems, opt), ParamError);
    opt.repeats = 1;
    opt.methods.clear();
    CHECK_THROWS_AS(run_bench(problems, opt), ParamError);
}
