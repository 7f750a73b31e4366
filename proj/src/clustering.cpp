#include "geols/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "geols/rng.hpp"

namespace geols {

ClientAssignment assign_clients(std::span<const Point> clients,
                                std::span<const Point> open_facilities) {
    if (open_facilities.empty())
        throw std::invalid_argument("assign_clients: no open facilities");
    ClientAssignment out;
    out.serving.resize(clients.size());
    out.distances.resize(clients.size());
    for (std::size_t c = 0; c < clients.size(); ++c) {
        int best = 0;
        double best_d = dist(clients[c], open_facilities[0]);
        for (std::size_t s = 1; s < open_facilities.size(); ++s) {
            const double d = dist(clients[c], open_facilities[s]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(s);
            }
        }
        out.serving[c] = best;
        out.distances[c] = best_d;
        out.total += best_d;
    }
    return out;
}

namespace {

void check_open_indices(const ClusteringInstance& inst, const std::vector<int>& open) {
    if (open.empty()) throw std::invalid_argument("solution opens no facility");
    std::vector<bool> seen(inst.candidate_sites.size(), false);
    for (int s : open) {
        if (s < 0 || static_cast<std::size_t>(s) >= inst.candidate_sites.size())
            throw std::invalid_argument("open facility index out of range");
        if (seen[s]) throw std::invalid_argument("open facility repeated");
        seen[s] = true;
    }
}

double service_cost(const ClusteringInstance& inst, const std::vector<int>& open) {
    double total = 0.0;
    for (const Point& c : inst.clients) {
        double best = std::numeric_limits<double>::infinity();
        for (int s : open) best = std::min(best, dist(c, inst.candidate_sites[s]));
        total += best;
    }
    return total;
}

}  // namespace

double fl_cost(const ClusteringInstance& inst, const FacilitySolution& sol) {
    check_open_indices(inst, sol.open);
    return inst.facility_cost * static_cast<double>(sol.open.size()) + service_cost(inst, sol.open);
}

int kmedian_budget(const ClusteringInstance& inst) {
    return static_cast<int>(std::floor((1.0 + 3.0 * inst.epsilon) * inst.k + 1e-9));
}

double kmedian_cost(const ClusteringInstance& inst, const KMedianSolution& sol) {
    check_open_indices(inst, sol.open);
    if (static_cast<int>(sol.open.size()) > kmedian_budget(inst))
        throw std::invalid_argument("k-median solution exceeds the (1+3eps)k budget");
    return service_cost(inst, sol.open);
}

std::optional<std::vector<int>> swap_improving_neighbor(const ClusteringInstance& inst,
                                                        const std::vector<int>& open, int p,
                                                        double threshold, ClusteringMode mode) {
    if (p < 1 || p > 4) throw std::invalid_argument("swap_improving_neighbor: p must be 1..4");
    check_open_indices(inst, open);

    const int m = static_cast<int>(inst.candidate_sites.size());
    std::vector<bool> is_open(m, false);
    for (int s : open) is_open[s] = true;
    std::vector<int> open_sorted = open;
    std::sort(open_sorted.begin(), open_sorted.end());
    std::vector<int> closed;
    for (int s = 0; s < m; ++s)
        if (!is_open[s]) closed.push_back(s);

    const int cap = mode == ClusteringMode::KMedian ? kmedian_budget(inst)
                                                    : std::numeric_limits<int>::max();

    auto evaluate = [&](const std::vector<int>& drop,
                        const std::vector<int>& add) -> std::optional<std::vector<int>> {
        const int new_size =
            static_cast<int>(open_sorted.size() - drop.size() + add.size());
        if (new_size < 1 || new_size > cap) return std::nullopt;
        std::vector<int> next;
        next.reserve(new_size);
        std::size_t di = 0;
        for (int s : open_sorted) {
            if (di < drop.size() && drop[di] == s) {
                ++di;
                continue;
            }
            next.push_back(s);
        }
        next.insert(next.end(), add.begin(), add.end());
        std::sort(next.begin(), next.end());
        double cost = service_cost(inst, next);
        if (mode == ClusteringMode::FacilityLocation)
            cost += inst.facility_cost * static_cast<double>(next.size());
        if (cost <= threshold) return next;
        return std::nullopt;
    };

    // all size-c combinations of pool, lexicographic
    auto for_combos = [](const std::vector<int>& pool, int c, auto&& fn) -> bool {
        if (c > static_cast<int>(pool.size())) return false;
        std::vector<int> pick(c);
        std::vector<int> at(c);
        for (int i = 0; i < c; ++i) at[i] = i;
        while (true) {
            for (int i = 0; i < c; ++i) pick[i] = pool[at[i]];
            if (fn(pick)) return true;
            int i = c - 1;
            const int n = static_cast<int>(pool.size());
            while (i >= 0 && at[i] == n - c + i) --i;
            if (i < 0) return false;
            ++at[i];
            for (int j = i + 1; j < c; ++j) at[j] = at[j - 1] + 1;
        }
    };

    std::optional<std::vector<int>> found;
    auto run_pair = [&](int d, int a) {
        return for_combos(open_sorted, d, [&](const std::vector<int>& drop) {
            return for_combos(closed, a, [&](const std::vector<int>& add) {
                if (auto r = evaluate(drop, add)) {
                    found = std::move(r);
                    return true;
                }
                return false;
            });
        });
    };

    // cheap moves first: drops, single swaps, adds, then wider combinations
    if (run_pair(1, 0)) return found;
    if (p >= 2 && run_pair(1, 1)) return found;
    if (run_pair(0, 1)) return found;
    for (int tot = 2; tot <= p; ++tot) {
        for (int d = tot; d >= 0; --d) {
            const int a = tot - d;
            if ((d == 1 && a <= 1) || (d == 0 && a == 1)) continue;  // already scanned
            if (run_pair(d, a)) return found;
        }
    }
    return std::nullopt;
}

FacilitySolution initial_fl_solution(const ClusteringInstance& inst) {
    FacilitySolution sol;
    sol.open.resize(inst.candidate_sites.size());
    for (std::size_t s = 0; s < inst.candidate_sites.size(); ++s)
        sol.open[s] = static_cast<int>(s);
    return sol;
}

KMedianSolution initial_kmedian_solution(const ClusteringInstance& inst, std::uint64_t seed) {
    const int m = static_cast<int>(inst.candidate_sites.size());
    if (inst.k < 1 || inst.k > m)
        throw std::invalid_argument("initial_kmedian_solution: invalid k");
    Rng rng(seed);
    std::vector<int> pool(m);
    for (int i = 0; i < m; ++i) pool[i] = i;
    KMedianSolution sol;
    for (int i = 0; i < inst.k; ++i) {
        const std::size_t j = i + rng.next_below(m - i);
        std::swap(pool[i], pool[j]);
        sol.open.push_back(pool[i]);
    }
    std::sort(sol.open.begin(), sol.open.end());
    return sol;
}

void add_grid_sites(ClusteringInstance& inst, int g) {
    if (g < 1) throw std::invalid_argument("add_grid_sites: grid must be >= 1");
    const Rect bb = Rect::bounding(inst.clients);
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            const double fx = g == 1 ? 0.5 : static_cast<double>(i) / (g - 1);
            const double fy = g == 1 ? 0.5 : static_cast<double>(j) / (g - 1);
            inst.candidate_sites.push_back(
                {bb.xmin + fx * bb.width(), bb.ymin + fy * bb.height()});
        }
    }
}

void FlProblem::validate(const Solution& s) const { check_open_indices(*instance, s.open); }

void KMedianProblem::validate(const Solution& s) const {
    check_open_indices(*instance, s.open);
    if (static_cast<int>(s.open.size()) > kmedian_budget(*instance))
        throw std::invalid_argument("k-median solution exceeds the (1+3eps)k budget");
}

}  // namespace geols
