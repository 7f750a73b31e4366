#pragma once

#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace geols {

/// Absolute slack used when testing the improvement threshold. Moves that
/// land exactly on the threshold are rejected so the search always
/// terminates under floating point.
inline constexpr double kImprovementSlack = 1e-12;

struct SearchConfig {
    double epsilon = 1.0 / 3.0;
    int swap_budget = 2;
    long max_iterations = 1'000'000;
    // <= 0 means "use the default 1 - 1/n" with n taken from the problem.
    double improvement_factor = 0.0;
    std::uint64_t seed = 0;
};

enum class Termination { LocalOptimum, IterationCap };

struct SearchTrace {
    long iterations = 0;
    std::vector<double> costs;  // cost after each accepted move
    double initial_cost = 0.0;
    double wall_ms = 0.0;
    Termination termination = Termination::LocalOptimum;
};

template <typename S>
struct SearchResult {
    S solution;
    SearchTrace trace;
};

template <typename P>
concept LocalSearchProblem = requires(const P& p, const typename P::Solution& s, double thr) {
    { p.size() } -> std::convertible_to<std::size_t>;
    { p.cost(s) } -> std::convertible_to<double>;
    { p.validate(s) };
    { p.improving_neighbor(s, thr) } -> std::convertible_to<std::optional<typename P::Solution>>;
};

/// Upper bound on the number of accepted moves when every move improves by
/// a factor of at least 1 - 1/n: ceil(log(c0/cf) / log(1/(1-1/n))).
inline long iteration_bound(double initial_cost, double final_cost, std::size_t n) {
    if (!(final_cost > 0.0) || !(initial_cost > 0.0))
        throw std::invalid_argument("iteration_bound: costs must be positive");
    if (initial_cost < final_cost)
        throw std::invalid_argument("iteration_bound: initial cost below final cost");
    if (initial_cost == final_cost) return 0;
    if (n <= 1) return 0;  // per-move factor is 0, no move is acceptable
    const double denom = std::log(1.0 / (1.0 - 1.0 / static_cast<double>(n)));
    return static_cast<long>(std::ceil(std::log(initial_cost / final_cost) / denom));
}

/// First-improvement local search: repeatedly moves to the first neighbor
/// whose cost clears the (1 - 1/n)-style threshold, until none exists or
/// the iteration cap is hit.
template <LocalSearchProblem P>
SearchResult<typename P::Solution> run_local_search(const P& problem,
                                                    typename P::Solution initial,
                                                    const SearchConfig& config) {
    problem.validate(initial);
    const auto t0 = std::chrono::steady_clock::now();

    double factor = config.improvement_factor;
    if (factor <= 0.0) {
        const auto n = static_cast<double>(problem.size());
        factor = n > 1.0 ? 1.0 - 1.0 / n : 0.0;
    } else if (factor >= 1.0) {
        throw std::invalid_argument("improvement_factor must be in (0,1)");
    }

    SearchResult<typename P::Solution> result{std::move(initial), {}};
    double cost = problem.cost(result.solution);
    result.trace.initial_cost = cost;
    result.trace.termination = Termination::IterationCap;

    for (long it = 0; it < config.max_iterations; ++it) {
        const double threshold = factor * cost - kImprovementSlack;
        std::optional<typename P::Solution> next = problem.improving_neighbor(result.solution, threshold);
        if (!next) {
            result.trace.termination = Termination::LocalOptimum;
            break;
        }
        problem.validate(*next);
        result.solution = std::move(*next);
        cost = problem.cost(result.solution);
        result.trace.costs.push_back(cost);
        ++result.trace.iterations;
    }

    const auto t1 = std::chrono::steady_clock::now();
    result.trace.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return result;
}

}  // namespace geols
