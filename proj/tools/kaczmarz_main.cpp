// Command-line front end: solve one system, benchmark method comparisons,
// verify convergence bounds, or emit seeded test matrices.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kaczmarz/analysis.hpp"
#include "kaczmarz/bench.hpp"
#include "kaczmarz/io.hpp"
#include "kaczmarz/solvers.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace kaczmarz;

// Exit codes, sysexits-inspired: 0 converged/ok, 2 iteration cap reached,
// 64 usage, 65 bad data (or failed checks rate as 1), 66 unreadable input,
// 73 unwritable output.
constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitIterationCap = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitNoInput = 66;
constexpr int kExitCantCreate = 73;

struct CliExit {
    int code;
};

[[noreturn]] void bail(int code, const std::string& msg) {
    std::cerr << "kaczmarz: " << msg << '\n';
    throw CliExit{code};
}

struct MatrixSpec {
    bool generated = false;
    std::size_t m = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string path;
    std::string label;
};

/// Either a readable file path or "gen:MxN:SEED" for a seeded Gaussian.
MatrixSpec parse_matrix_spec(const std::string& s) {
    MatrixSpec spec;
    spec.label = s;
    if (s.rfind("gen:", 0) != 0) {
        spec.path = s;
        return spec;
    }
    unsigned long long m = 0, n = 0, seed = 0;
    int consumed = -1;
    if (std::sscanf(s.c_str(), "gen:%llux%llu:%llu%n", &m, &n, &seed, &consumed) != 3 ||
        consumed != static_cast<int>(s.size()) || m == 0 || n == 0)
        throw ParamError("bad matrix spec '" + s + "'; expected a path or gen:MxN:SEED");
    spec.generated = true;
    spec.m = static_cast<std::size_t>(m);
    spec.n = static_cast<std::size_t>(n);
    spec.seed = static_cast<std::uint64_t>(seed);
    return spec;
}

MatrixHandle load_matrix(const MatrixSpec& spec) {
    if (spec.generated) return gen_gaussian(spec.m, spec.n, spec.seed);
    try {
        return read_matrix_market_file(spec.path);
    } catch (const IoError& e) {
        bail(kExitNoInput, e.what());
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path);
    if (!f) bail(kExitCantCreate, "cannot open '" + path + "' for writing");
    return f;
}

TraceLevel trace_from_name(const std::string& name) {
    if (name == "none") return TraceLevel::none;
    if (name == "indices") return TraceLevel::indices;
    if (name == "full") return TraceLevel::full;
    throw ParamError("unknown trace level '" + name + "'");
}

std::vector<Method> parse_method_list(const std::string& csv) {
    std::vector<Method> methods;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        const Method m = method_from_name(tok);
        if (std::find(methods.begin(), methods.end(), m) == methods.end())
            methods.push_back(m);
    }
    if (methods.empty()) throw ParamError("no methods given");
    return methods;
}

void write_solve_jsonl(std::ostream& out, const Problem& p, const SolveReport& rep,
                       double theta) {
    json summary;
    summary["type"] = "summary";
    summary["label"] = p.label;
    summary["m"] = p.A.rows();
    summary["n"] = p.A.cols();
    summary["density"] = p.A.density();
    summary["method"] = method_name(rep.method);
    if (rep.method == Method::rgrk) summary["theta"] = theta;
    summary["iterations"] = rep.iterations;
    summary["converged"] = rep.converged;
    summary["final_res"] = rep.final_res;
    if (p.x_star) summary["final_err_sq"] = rep.final_err_sq;
    summary["solution"] = rep.solution;
    out << summary.dump() << '\n';
    const bool full = rep.trace_level == TraceLevel::full;
    for (const IterationRecord& rec : rep.trace) {
        json line;
        line["type"] = "iteration";
        line["k"] = rec.k;
        line["chosen"] = rec.chosen;
        line["set_size"] = rec.set_size;
        if (full) {
            line["set_norm_sum"] = rec.set_norm_sum;
            if (p.x_star) line["err_sq"] = rec.err_sq;
            line["step_sq"] = rec.step_sq;
            line["res_norm_sq"] = rec.res_norm_sq;
            line["zeroed_abs"] = rec.zeroed_abs;
        }
        out << line.dump() << '\n';
    }
}

// ---------------------------------------------------------------------------

struct SolveArgs {
    std::string matrix;
    std::string method = "gk";
    double theta = 1.0;
    double tol = 1e-6;
    std::size_t max_iters = 200000;
    std::uint64_t seed = 0;
    std::string trace = "none";
    std::string out;
};

int run_solve(const SolveArgs& a) {
    const MatrixSpec spec = parse_matrix_spec(a.matrix);
    const Problem problem = make_consistent_problem(load_matrix(spec), a.seed, spec.label);
    const Strategy strategy{method_from_name(a.method), a.theta, a.seed};
    SolveConfig cfg;
    cfg.max_iters = a.max_iters;
    cfg.res_tol = a.tol;
    cfg.stop_mode = StopMode::res;
    cfg.trace = trace_from_name(a.trace);
    const SolveReport rep = solve(problem, strategy, cfg);

    std::cout << "label=" << problem.label << " method=" << method_name(rep.method)
              << " m=" << problem.A.rows() << " n=" << problem.A.cols()
              << " iterations=" << rep.iterations
              << " converged=" << (rep.converged ? "true" : "false")
              << " final_res=" << rep.final_res << '\n';
    if (!a.out.empty()) {
        auto f = open_output(a.out);
        try {
            write_solve_jsonl(f, problem, rep, a.theta);
        } catch (const IoError& e) {
            bail(kExitCantCreate, e.what());
        }
    }
    return rep.converged ? kExitOk : kExitIterationCap;
}

struct BenchArgs {
    std::vector<std::string> matrices;
    std::string methods = "grk,rgrk,gk";
    std::size_t repeats = 50;
    double theta = 1.0;
    std::uint64_t seed_base = 0;
    double tol = 1e-6;
    std::size_t max_iters = 200000;
    std::string out;
};

int run_bench_cmd(const BenchArgs& a) {
    std::uint64_t seed_base = a.seed_base;
    if (const char* env = std::getenv("KACZMARZ_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
            bail(kExitUsage, "KACZMARZ_SEED is not an unsigned integer: '" + std::string(env) +
                                 "'");
        seed_base = static_cast<std::uint64_t>(v);
        std::cerr << "kaczmarz: seed-base overridden by KACZMARZ_SEED=" << seed_base << '\n';
    }

    BenchOptions opt;
    opt.methods = parse_method_list(a.methods);
    opt.repeats = a.repeats;
    opt.theta = a.theta;
    opt.seed_base = seed_base;
    opt.config.max_iters = a.max_iters;
    opt.config.res_tol = a.tol;
    opt.config.stop_mode = StopMode::res;

    std::vector<Problem> problems;
    problems.reserve(a.matrices.size());
    for (const std::string& s : a.matrices) {
        const MatrixSpec spec = parse_matrix_spec(s);
        problems.push_back(make_consistent_problem(load_matrix(spec), seed_base, spec.label));
    }

    const BenchTable table = run_bench(problems, opt);
    if (table.rows.empty()) bail(kExitData, "no benchmark rows produced");
    try {
        if (a.out.empty()) {
            write_report_csv(std::cout, table);
        } else {
            auto f = open_output(a.out);
            write_report_csv(f, table);
        }
    } catch (const IoError& e) {
        bail(kExitCantCreate, e.what());
    }
    return kExitOk;
}

struct BoundsArgs {
    std::string matrix;
    std::uint64_t seed = 0;
    double theta = 1.0;
    double tol = 1e-6;
    std::size_t max_iters = 200000;
    std::string out;
};

void print_check(const char* name, const CheckResult& c) {
    if (!c.applicable) {
        std::cout << "check " << name << ": not applicable\n";
        return;
    }
    std::cout << "check " << name << ": " << (c.pass ? "pass" : "FAIL")
              << " (worst gap " << c.worst_gap << " at iteration " << c.worst_iter << ")\n";
}

int run_bounds(const BoundsArgs& a) {
    const MatrixSpec spec = parse_matrix_spec(a.matrix);
    Problem problem = make_consistent_problem(load_matrix(spec), a.seed, spec.label);
    const std::size_t m = problem.A.rows(), n = problem.A.cols();
    if (std::min(m, n) > 2000)
        bail(kExitData, "matrix too large for a full SVD: min(m, n) = " +
                            std::to_string(std::min(m, n)) + " exceeds the 2000 cap");

    Strategy strategy{Method::gk, a.theta, a.seed};
    SolveConfig cfg;
    cfg.max_iters = a.max_iters;
    cfg.res_tol = a.tol;
    cfg.stop_mode = StopMode::res;
    cfg.trace = TraceLevel::full;
    const SolveReport rep = solve(problem, strategy, cfg);
    if (rep.trace.empty())
        bail(kExitData, "start iterate already satisfies the tolerance; nothing to verify");

    const SpectralInfo sp = spectral_info(problem.A);
    const BoundReport bounds = compute_bound_report(problem, rep, sp, a.theta);
    const VerificationSummary ver = verify_run(problem, rep, &sp);

    const double nu_min = problem.A.min_row_sq_norm();
    const double frob = problem.A.frobenius_sq();
    const bool alpha_ok = bounds.alpha >= 1 && bounds.alpha <= m;
    const bool beta_ok = bounds.beta >= nu_min * (1 - 1e-12) && bounds.beta <= frob * (1 + 1e-12);

    std::cout << "label=" << problem.label << " m=" << m << " n=" << n
              << " iterations=" << rep.iterations
              << " converged=" << (rep.converged ? "true" : "false") << '\n';
    std::cout << "lambda_min_pos=" << sp.lambda_min_pos << " rank=" << sp.rank
              << " sigma_max=" << sp.sigma_max << '\n';
    if (sp.rank < std::min(m, n))
        std::cout << "note: rank-deficient (rank " << sp.rank << " < " << std::min(m, n)
                  << "); spectral ratio sigma_max/sigma_min_pos = "
                  << sp.sigma_max / std::sqrt(sp.lambda_min_pos) << '\n';
    std::cout << "alpha=" << bounds.alpha << " beta=" << bounds.beta
              << " factor_initial=" << bounds.factor_initial << '\n';
    if (bounds.factor_envelope)
        std::cout << "factor_envelope=" << *bounds.factor_envelope << '\n';
    if (bounds.grk_factor)
        std::cout << "grk_factor=" << *bounds.grk_factor
                  << " rgrk_factor(theta=" << bounds.rgrk_theta << ")=" << *bounds.rgrk_factor
                  << '\n';
    if (bounds.factor_step.empty())
        std::cout << "per-step factors (k >= 1): not applicable (m = 1)\n";

    std::cout << "check alpha_range: " << (alpha_ok ? "pass" : "FAIL") << '\n';
    std::cout << "check beta_range: " << (beta_ok ? "pass" : "FAIL") << '\n';
    print_check("pythagoras", ver.pythagoras);
    print_check("zeroed_row", ver.zeroed_row);
    print_check("monotone", ver.monotone);
    print_check("step_factor", ver.step_factor);
    print_check("envelope", ver.envelope);

    if (!a.out.empty()) {
        json doc;
        doc["label"] = problem.label;
        doc["m"] = m;
        doc["n"] = n;
        doc["iterations"] = rep.iterations;
        doc["converged"] = rep.converged;
        doc["final_res"] = rep.final_res;
        doc["lambda_min_pos"] = sp.lambda_min_pos;
        doc["rank"] = sp.rank;
        doc["sigma_max"] = sp.sigma_max;
        doc["alpha"] = bounds.alpha;
        doc["beta"] = bounds.beta;
        doc["factor_initial"] = bounds.factor_initial;
        if (bounds.factor_envelope) doc["factor_envelope"] = *bounds.factor_envelope;
        if (bounds.grk_factor) doc["grk_factor"] = *bounds.grk_factor;
        if (bounds.rgrk_factor) {
            doc["rgrk_factor"] = *bounds.rgrk_factor;
            doc["rgrk_theta"] = bounds.rgrk_theta;
        }
        doc["factor_step"] = bounds.factor_step;
        auto checks = json::object();
        const auto put = [&](const char* name, const CheckResult& c) {
            json cj;
            cj["applicable"] = c.applicable;
            cj["pass"] = c.pass;
            cj["worst_gap"] = c.worst_gap;
            cj["worst_iter"] = c.worst_iter;
            checks[name] = cj;
        };
        put("pythagoras", ver.pythagoras);
        put("zeroed_row", ver.zeroed_row);
        put("monotone", ver.monotone);
        put("step_factor", ver.step_factor);
        put("envelope", ver.envelope);
        checks["alpha_range"] = alpha_ok;
        checks["beta_range"] = beta_ok;
        doc["checks"] = checks;
        auto f = open_output(a.out);
        f << doc.dump(2) << '\n';
        if (!f) bail(kExitCantCreate, "write failure on '" + a.out + "'");
    }

    if (!rep.converged) return kExitIterationCap;
    return ver.all_pass() && alpha_ok && beta_ok ? kExitOk : kExitCheckFailed;
}

struct GenArgs {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::uint64_t seed = 0;
    std::string out;
};

int run_gen(const GenArgs& a) {
    const MatrixHandle A = gen_gaussian(a.rows, a.cols, a.seed);
    try {
        write_matrix_market_file(a.out, A);
    } catch (const IoError& e) {
        bail(kExitCantCreate, e.what());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Row-action Kaczmarz solvers: greedy (gk), greedy randomized (grk), "
                 "relaxed greedy randomized (rgrk) and norm-weighted randomized (rk)"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve_cmd = app.add_subcommand("solve", "Run one method on one system");
    solve_cmd->add_option("--matrix", sa.matrix, "Matrix Market file or gen:MxN:SEED")
        ->required();
    solve_cmd->add_option("--method", sa.method, "rk, grk, rgrk or gk (default gk)");
    solve_cmd->add_option("--theta", sa.theta, "rgrk relaxation weight in [0, 1] (default 1)");
    solve_cmd->add_option("--tol", sa.tol, "stopping tolerance on the squared relative "
                                           "solution error (default 1e-6)");
    solve_cmd->add_option("--max-iters", sa.max_iters, "iteration cap (default 200000)");
    solve_cmd->add_option("--seed", sa.seed, "seed for the problem and the selection PRNG");
    solve_cmd->add_option("--trace", sa.trace, "none, indices or full (default none)");
    solve_cmd->add_option("--out", sa.out, "write a JSON-lines report here");

    BenchArgs ba;
    auto* bench_cmd = app.add_subcommand("bench", "Compare methods over repeated solves");
    bench_cmd->add_option("--matrix", ba.matrices, "matrix spec; repeat for several")
        ->required();
    bench_cmd->add_option("--methods", ba.methods, "comma list (default grk,rgrk,gk)");
    bench_cmd->add_option("--repeats", ba.repeats, "runs per (matrix, method) (default 50)");
    bench_cmd->add_option("--theta", ba.theta, "rgrk relaxation weight (default 1)");
    bench_cmd->add_option("--seed-base", ba.seed_base,
                          "repeat j uses seed seed-base + j; the KACZMARZ_SEED environment "
                          "variable overrides this flag");
    bench_cmd->add_option("--tol", ba.tol, "stopping tolerance (default 1e-6)");
    bench_cmd->add_option("--max-iters", ba.max_iters, "iteration cap (default 200000)");
    bench_cmd->add_option("--out", ba.out, "CSV output path (default stdout)");

    BoundsArgs oa;
    auto* bounds_cmd =
        app.add_subcommand("bounds", "Run gk with a full trace and verify the bound factors");
    bounds_cmd->add_option("--matrix", oa.matrix, "matrix spec")->required();
    bounds_cmd->add_option("--seed", oa.seed, "problem seed");
    bounds_cmd->add_option("--theta", oa.theta, "theta for the rgrk comparison factor");
    bounds_cmd->add_option("--tol", oa.tol, "stopping tolerance (default 1e-6)");
    bounds_cmd->add_option("--max-iters", oa.max_iters, "iteration cap (default 200000)");
    bounds_cmd->add_option("--out", oa.out, "JSON report path");

    GenArgs ga;
    auto* gen_cmd = app.add_subcommand("gen", "Write a seeded Gaussian Matrix Market file");
    gen_cmd->add_option("--rows", ga.rows, "row count")->required();
    gen_cmd->add_option("--cols", ga.cols, "column count")->required();
    gen_cmd->add_option("--seed", ga.seed, "generator seed");
    gen_cmd->add_option("--out", ga.out, "output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve_cmd->parsed()) return run_solve(sa);
        if (bench_cmd->parsed()) return run_bench_cmd(ba);
        if (bounds_cmd->parsed()) return run_bounds(oa);
        if (gen_cmd->parsed()) return run_gen(ga);
        return kExitUsage;
    } catch (const CliExit& e) {
        return e.code;
    } catch (const ParamError& e) {
        std::cerr << "kaczmarz: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "kaczmarz: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "kaczmarz: internal error: " << e.what() << '\n';
        return 70;
    }
}
