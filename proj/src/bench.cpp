#include "kaczmarz/bench.hpp"

#include <array>
#include <chrono>
#include <iostream>

namespace kaczmarz {

namespace {

struct MethodAggregate {
    bool ran = false;
    double it_sum = 0.0;
    double cpu_sum = 0.0;
    bool all_converged = true;
};

}  // namespace

BenchTable run_bench(std::span<const Problem> problems, const BenchOptions& options) {
    if (options.repeats < 1) throw ParamError("repeats must be at least 1");
    if (options.methods.empty()) throw ParamError("no methods requested");

    BenchTable table;
    for (const Problem& p : problems) {
        std::array<MethodAggregate, 4> agg{};
        try {
            SolveConfig cfg = options.config;
            cfg.trace = TraceLevel::none;
            // Round-robin over the methods inside the repeat loop: slow
            // clock or load drift then shifts every method's mean equally
            // instead of landing on whichever method ran as a block, so the
            // CPU ratios stay meaningful on a busy machine. The starting
            // method also rotates by one each repeat so periodic
            // interference (timer ticks, cgroup accounting) cannot stay
            // phase-locked to a single method.
            const std::size_t nm = options.methods.size();
            for (std::size_t j = 0; j < options.repeats; ++j) {
                for (std::size_t k = 0; k < nm; ++k) {
                    const Method method = options.methods[(j + k) % nm];
                    auto& a = agg[static_cast<std::size_t>(method)];
                    const Strategy strategy{method, options.theta, options.seed_base + j};
                    const auto t0 = std::chrono::steady_clock::now();
                    const SolveReport rep = solve(p, strategy, cfg);
                    const auto t1 = std::chrono::steady_clock::now();
                    a.it_sum += static_cast<double>(rep.iterations);
                    a.cpu_sum += std::chrono::duration<double>(t1 - t0).count();
                    a.all_converged = a.all_converged && rep.converged;
                }
            }
            for (const Method method : options.methods)
                agg[static_cast<std::size_t>(method)].ran = true;
        } catch (const Error& e) {
            std::cerr << "bench: skipping " << (p.label.empty() ? "<unlabeled>" : p.label)
                      << ": " << e.what() << "\n";
            continue;
        }

        // Ratios are quotients of the stored means themselves, so a table
        // consumer can reproduce them from the mean columns exactly.
        const double reps = static_cast<double>(options.repeats);
        std::array<double, 4> mean_it{};
        std::array<double, 4> mean_cpu{};
        for (std::size_t v = 0; v < agg.size(); ++v) {
            mean_it[v] = agg[v].it_sum / reps;
            mean_cpu[v] = agg[v].cpu_sum / reps;
        }
        const auto idx = [](Method method) { return static_cast<std::size_t>(method); };
        // Speed-up columns are defined by the grk/rgrk-versus-gk comparison
        // and appear only when all three participants ran.
        const bool trio_ran = agg[idx(Method::gk)].ran && agg[idx(Method::grk)].ran &&
                              agg[idx(Method::rgrk)].ran;
        for (const Method method : options.methods) {
            const auto& a = agg[idx(method)];
            BenchRow row;
            row.label = p.label;
            row.m = p.A.rows();
            row.n = p.A.cols();
            row.density = p.A.density();
            row.method = method;
            if (method == Method::rgrk) row.theta = options.theta;
            row.mean_iterations = mean_it[idx(method)];
            row.mean_cpu_seconds = mean_cpu[idx(method)];
            row.repeats = options.repeats;
            row.all_converged = a.all_converged;
            if (trio_ran) {
                row.it_speedup_1 = mean_it[idx(Method::grk)] / mean_it[idx(Method::gk)];
                row.cpu_speedup_1 = mean_cpu[idx(Method::grk)] / mean_cpu[idx(Method::gk)];
                row.it_speedup_2 = mean_it[idx(Method::rgrk)] / mean_it[idx(Method::gk)];
                row.cpu_speedup_2 = mean_cpu[idx(Method::rgrk)] / mean_cpu[idx(Method::gk)];
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

}  // namespace kaczmarz
