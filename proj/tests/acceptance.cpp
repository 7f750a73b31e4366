// Acceptance suite: one pass/fail line per criterion, exit code equals the
// number of failures. Thresholds and pilot-frozen constants are pinned here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "geols/bench.hpp"
#include "geols/clustering.hpp"
#include "geols/dissection.hpp"
#include "geols/engine.hpp"
#include "geols/oracles.hpp"
#include "geols/rng.hpp"
#include "geols/steiner.hpp"
#include "geols/tsp.hpp"

using namespace geols;

namespace {

int failures = 0;

void report(int num, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("[%s] criterion %2d: %s (%s) [%.1fs]\n", pass ? "PASS" : "FAIL", num,
                name.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

struct TraceCheck {
    double initial_cost;
    double final_cost;
    long iterations;
    std::size_t n;
};

struct RatioPool {
    std::string name;
    std::vector<double> ratios;

    double mean() const {
        double s = 0;
        for (double r : ratios) s += r;
        return s / static_cast<double>(ratios.size());
    }
    double max() const { return *std::max_element(ratios.begin(), ratios.end()); }
    double min() const { return *std::min_element(ratios.begin(), ratios.end()); }
};

std::vector<TraceCheck> g_traces;
std::vector<std::pair<TspInstance, Tour>> g_tsp_optima;
int g_kmedian_budget_violations = 0;

// k-median adapter that counts budget violations at every accepted step
// instead of assuming the neighborhood enforces them
struct TrackedKMedianProblem {
    using Solution = KMedianSolution;

    KMedianProblem inner;

    std::size_t size() const { return inner.size(); }
    double cost(const Solution& s) const { return kmedian_cost(*inner.instance, s); }
    void validate(const Solution& s) const {
        if (s.open.empty()) throw std::invalid_argument("empty k-median solution");
        for (int idx : s.open)
            if (idx < 0 ||
                static_cast<std::size_t>(idx) >= inner.instance->candidate_sites.size())
                throw std::invalid_argument("open index out of range");
        if (static_cast<int>(s.open.size()) > kmedian_budget(*inner.instance))
            ++g_kmedian_budget_violations;
    }
    std::optional<Solution> improving_neighbor(const Solution& s, double threshold) const {
        return inner.improving_neighbor(s, threshold);
    }
};

void record_trace(const SearchTrace& trace, std::size_t n) {
    const double final_cost = trace.costs.empty() ? trace.initial_cost : trace.costs.back();
    g_traces.push_back({trace.initial_cost, final_cost, trace.iterations, n});
}

// ---------------------------------------------------------------------------

void criterion_1_oracle_ratios() {
    Timer timer;
    std::vector<RatioPool> pools;

    {  // TSP: n = 12, budget 3
        RatioPool pool{"tsp", {}};
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const TspInstance inst{gen_uniform(12, seed)};
            TspProblem prob{&inst, 3};
            SearchConfig cfg;
            cfg.swap_budget = 3;
            auto res = run_local_search(prob, uncross(inst, nearest_neighbor_tour(inst)), cfg);
            record_trace(res.trace, 12);
            pool.ratios.push_back(tour_length(inst, res.solution) /
                                  held_karp_tsp(inst.points).optimal_cost);
            g_tsp_optima.emplace_back(inst, res.solution);
        }
        pools.push_back(std::move(pool));
    }

    {  // facility location: n = 12, f in {0.3, 1, 3}, budget 2
        RatioPool pool{"fl", {}};
        for (double f : {0.3, 1.0, 3.0}) {
            for (std::uint64_t seed = 0; seed < 100; ++seed) {
                ClusteringInstance inst;
                inst.clients = gen_uniform(12, seed);
                inst.candidate_sites = inst.clients;
                inst.facility_cost = f;
                FlProblem prob{&inst, 2};
                SearchConfig cfg;
                cfg.swap_budget = 2;
                auto res = run_local_search(prob, initial_fl_solution(inst), cfg);
                record_trace(res.trace, 12);
                pool.ratios.push_back(
                    fl_cost(inst, res.solution) /
                    brute_force_fl(inst.clients, inst.candidate_sites, f).optimal_cost);
            }
        }
        pools.push_back(std::move(pool));
    }

    {  // k-median: n = 10, k = 2, eps in {0, 1/3}, budget 2
        RatioPool pool{"kmedian", {}};
        for (double eps : {0.0, 1.0 / 3.0}) {
            for (std::uint64_t seed = 0; seed < 100; ++seed) {
                ClusteringInstance inst;
                inst.clients = gen_uniform(10, seed);
                inst.candidate_sites = inst.clients;
                inst.k = 2;
                inst.epsilon = eps;
                TrackedKMedianProblem prob{KMedianProblem{&inst, 2}};
                SearchConfig cfg;
                cfg.swap_budget = 2;
                auto res = run_local_search(prob, initial_kmedian_solution(inst, seed), cfg);
                record_trace(res.trace, 10);
                const int kk = std::min(kmedian_budget(inst),
                                        static_cast<int>(inst.candidate_sites.size()));
                pool.ratios.push_back(
                    kmedian_cost(inst, res.solution) /
                    brute_force_kmedian(inst.clients, inst.candidate_sites, kk).optimal_cost);
            }
        }
        pools.push_back(std::move(pool));
    }

    {  // Steiner: n = 4, budget 2
        RatioPool pool{"steiner", {}};
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const SteinerInstance inst{gen_uniform(4, seed)};
            SteinerProblem prob{&inst, 2};
            SearchConfig cfg;
            cfg.swap_budget = 2;
            auto res = run_local_search(prob, SteinerSolution{}, cfg);
            record_trace(res.trace, 4);
            pool.ratios.push_back(steiner_cost(inst, res.solution) /
                                  small_steiner_opt(inst.terminals).optimal_cost);
        }
        pools.push_back(std::move(pool));
    }

    bool pass = timer.seconds() < 300.0;  // the stated five-minute budget
    std::string detail;
    for (const auto& pool : pools) {
        const bool ok = pool.mean() <= 1.15 && pool.max() <= 1.5 && pool.min() >= 1.0 - 1e-9;
        pass = pass && ok;
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s mean %.3f max %.3f; ", pool.name.c_str(),
                      pool.mean(), pool.max());
        detail += buf;
    }
    report(1, "oracle ratio suite", pass, detail, timer.seconds());
}

void criterion_2_aspect_ratio() {
    Timer timer;
    const double epsilons[] = {0.5, 1.0 / 3.0, 0.25};
    int violations = 0;
    double worst = 1.0;
    Rng meta(555);
    for (int trial = 0; trial < 1000; ++trial) {
        const double eps = epsilons[trial % 3];
        const int nl = 1 + static_cast<int>(meta.next_below(200));
        const int ng = static_cast<int>(meta.next_below(201));
        const auto l = gen_uniform(nl, meta.next_u64());
        const auto g = ng > 0 ? gen_uniform(ng, meta.next_u64()) : std::vector<Point>{};
        const auto tree = adaptive_dissection(l, g, eps, meta.next_u64());
        worst = std::max(worst, tree.max_aspect_ratio);
        if (tree.max_aspect_ratio > 5.0 + 1e-9) ++violations;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "1000 dissections, worst aspect %.4f, %d over 5", worst,
                  violations);
    report(2, "aspect-ratio invariant", violations == 0, buf, timer.seconds());
}

void criterion_3_karp_perimeter() {
    Timer timer;
    const double eps = 0.25;  // stop threshold 1/eps^2 = 16
    std::vector<double> means;
    for (int n : {256, 1024, 4096}) {
        double mean = 0.0;
        for (int s = 0; s < 20; ++s) {
            const auto pts = gen_uniform(n, 1000 + s);
            mean += perimeter_sum(karp_dissection(pts, 16)) / (eps * std::sqrt(n));
        }
        means.push_back(mean / 20.0);
    }
    const bool pass = means.back() <= means.front() * 1.25 && timer.seconds() < 60.0;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "normalized means %.3f / %.3f / %.3f", means[0], means[1],
                  means[2]);
    report(3, "Karp perimeter bound", pass, buf, timer.seconds());
}

void criterion_4_cut_probability() {
    Timer timer;
    bool pass = true;
    std::string detail;
    for (double d : {0.01, 0.05}) {
        const auto buckets = cut_probability_experiment(d, 40, 40, 1.0 / 3.0, 10000, 99);
        double worst_excess = -1.0;
        for (const auto& b : buckets) {
            const double cap = std::min(1.0, b.bound);
            const double sigma = std::sqrt(cap * (1.0 - cap) / static_cast<double>(b.trials));
            const double excess = b.frequency - (cap + 3.0 * sigma);
            worst_excess = std::max(worst_excess, excess);
            if (excess > 0.0) pass = false;
        }
        char buf[80];
        std::snprintf(buf, sizeof(buf), "d=%.2f worst freq-bound gap %.4f; ", d, worst_excess);
        detail += buf;
    }
    report(4, "cut-probability bound", pass, detail, timer.seconds());
}

void criterion_5_structure_property() {
    Timer timer;
    // pilot-frozen normalization constant (documented in the README)
    const double kFrozenRatio = 1.5;
    int violations = 0;
    long draws = 0, below = 0;
    for (int t = 0; t < 200; ++t) {
        Rng meta(Rng::mix(20240601, t));
        const int nc = 100 + static_cast<int>(meta.next_below(201));
        const int nl = 10 + static_cast<int>(meta.next_below(31));
        const int ng = 10 + static_cast<int>(meta.next_below(31));
        const auto clients = gen_uniform(nc, meta.next_u64());
        const auto l = gen_uniform(nl, meta.next_u64());
        const auto g = gen_uniform(ng, meta.next_u64());
        const auto stats = verify_structure_bound(clients, l, g, 1.0 / 3.0, 5, meta.next_u64());
        violations += stats.violations;
        for (double r : stats.ratios) {
            ++draws;
            if (r < kFrozenRatio) ++below;
        }
    }
    const double frac = static_cast<double>(below) / static_cast<double>(draws);
    const bool pass = violations == 0 && frac >= 0.95;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d violations, %.1f%% of %ld draws under %.2f", violations,
                  100.0 * frac, draws, kFrozenRatio);
    report(5, "structure-property invariant", pass, buf, timer.seconds());
}

void criterion_6_balanced_clustering() {
    Timer timer;
    const double epsilons[] = {0.5, 1.0 / 3.0, 0.25};
    int trials = 0, bad_clusters = 0, uncovered = 0;
    Rng rng(777);
    for (int t = 0; t < 200; ++t) {
        const double eps = epsilons[t % 3];
        const int u = static_cast<int>(std::llround(1.0 / eps));
        const int smin = (u * u + 1) / 2, smax = u * u;
        std::vector<BalancedSet> sets;
        long tl = 0, tg = 0, tv = 0;
        const int count = 3 + static_cast<int>(rng.next_below(40));
        for (int i = 0; i < count; ++i) {
            const int size = smin + static_cast<int>(rng.next_below(smax - smin + 1));
            const int gc = static_cast<int>(rng.next_below(size + 1));
            sets.push_back({size - gc, gc});
            tl += size - gc;
            tg += gc;
            tv += (size - gc) - gc - u;
        }
        while (static_cast<double>(tl) < (1.0 + 3.0 * eps) * tg || tv < 0) {
            sets.push_back({smax, 0});
            tl += smax;
            tv += smax - u;
        }
        const auto out = balanced_clustering(sets, eps);
        ++trials;
        std::vector<int> seen(sets.size(), 0);
        for (const auto& cluster : out.clusters) {
            long surplus = 0;
            for (int i : cluster) {
                surplus += sets[i].l_count - sets[i].g_count;
                ++seen[i];
            }
            const bool ok = static_cast<double>(surplus) >= cluster.size() / eps - 1e-9 &&
                            static_cast<double>(cluster.size()) <= 4.0 / std::pow(eps, 5) + 1e-9;
            if (!ok) ++bad_clusters;
        }
        for (int s : seen)
            if (s != 1) ++uncovered;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d trials, %d bad clusters, %d coverage faults", trials,
                  bad_clusters, uncovered);
    report(6, "balanced clustering", bad_clusters == 0 && uncovered == 0, buf, timer.seconds());
}

void criterion_7_lower_bound() {
    Timer timer;
    const auto lb = lower_bound_instance(10);
    const double bad = tour_length(lb.instance, lb.bad);
    const double good = tour_length(lb.instance, lb.good);
    const double ratio = bad / good;
    const bool stable = verify_local_optimality(lb.instance, lb.bad, 2);
    const bool noncrossing = tour_is_noncrossing(lb.instance, lb.bad);
    // 1.7293 recorded at freeze time; the ratio must not regress below 1.72
    const bool pass = stable && noncrossing && ratio >= 1.5 && ratio >= 1.72;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "ratio %.4f, 2-exchange optimal: %s", ratio,
                  stable ? "yes" : "no");
    report(7, "lower-bound instance", pass, buf, timer.seconds());
}

void criterion_8_noncrossing_optima() {
    Timer timer;
    int crossing = 0;
    for (const auto& [inst, tour] : g_tsp_optima)
        if (!tour_is_noncrossing(inst, tour)) ++crossing;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%zu local optima, %d with crossings", g_tsp_optima.size(),
                  crossing);
    report(8, "non-crossing local optima", crossing == 0 && !g_tsp_optima.empty(), buf,
           timer.seconds());
}

void criterion_9_iteration_bound() {
    Timer timer;
    int violations = 0;
    for (const auto& t : g_traces) {
        if (!(t.final_cost > 0.0)) continue;
        if (t.iterations > iteration_bound(t.initial_cost, t.final_cost, t.n)) ++violations;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%zu traces, %d over the bound", g_traces.size(), violations);
    report(9, "iteration bound", violations == 0 && !g_traces.empty(), buf, timer.seconds());
}

void criterion_10_beta_trend() {
    Timer timer;
    const auto est = estimate_beta({100, 400, 1600}, 20, 0.75, 2024);
    bool pass = timer.seconds() < 600.0;  // the stated ten-minute budget
    for (std::size_t i = 0; i + 1 < est.mean.size(); ++i) {
        const double se_a = est.stddev[i] / std::sqrt(20.0);
        const double se_b = est.stddev[i + 1] / std::sqrt(20.0);
        const double slack = 2.0 * std::sqrt(se_a * se_a + se_b * se_b);
        if (est.mean[i + 1] > est.mean[i] + slack) pass = false;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "means %.4f / %.4f / %.4f", est.mean[0], est.mean[1],
                  est.mean[2]);
    report(10, "beta convergence trend", pass, buf, timer.seconds());
}

void criterion_11_bicriteria_budget() {
    Timer timer;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%d violations across all k-median steps",
                  g_kmedian_budget_violations);
    report(11, "bicriteria budget", g_kmedian_budget_violations == 0, buf, timer.seconds());
}

}  // namespace

int main() {
    criterion_1_oracle_ratios();
    criterion_2_aspect_ratio();
    criterion_3_karp_perimeter();
    criterion_4_cut_probability();
    criterion_5_structure_property();
    criterion_6_balanced_clustering();
    criterion_7_lower_bound();
    criterion_8_noncrossing_optima();
    criterion_9_iteration_bound();
    criterion_10_beta_trend();
    criterion_11_bicriteria_budget();

    std::printf("%s: %d of 11 criteria failed\n", failures == 0 ? "SUCCESS" : "FAILURE",
                failures);
    return failures;
}
