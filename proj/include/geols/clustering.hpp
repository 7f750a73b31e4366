#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "geols/geom.hpp"

namespace geols {

struct ClusteringInstance {
    std::vector<Point> clients;
    std::vector<Point> candidate_sites;
    double facility_cost = 1.0;  // f, facility location only
    int k = 1;                   // k-median only
    double epsilon = 0.0;        // k-median bicriteria budget
};

struct FacilitySolution {
    std::vector<int> open;  // candidate-site indices, nonempty
};

struct KMedianSolution {
    std::vector<int> open;  // 1 <= |open| <= floor((1+3eps)k)
};

struct ClientAssignment {
    std::vector<int> serving;      // client -> index into the facility span
    std::vector<double> distances;  // c_S per client
    double total = 0.0;
};

enum class ClusteringMode { FacilityLocation, KMedian };

/// Nearest open facility per client, lowest index on ties.
ClientAssignment assign_clients(std::span<const Point> clients,
                                std::span<const Point> open_facilities);

/// f * |open| + total service distance.
double fl_cost(const ClusteringInstance& inst, const FacilitySolution& sol);

/// Largest cardinality a k-median solution may use: floor((1+3eps) k).
int kmedian_budget(const ClusteringInstance& inst);

/// Total service distance; throws when the cardinality budget is violated.
double kmedian_cost(const ClusteringInstance& inst, const KMedianSolution& sol);

/// Enumerates add/drop/swap combinations with symmetric difference at most p
/// (drops, then single swaps, then adds, then multi-swaps) and returns the
/// first open set whose cost is at or below the threshold. k-median mode
/// keeps the cardinality inside [1, floor((1+3eps)k)].
std::optional<std::vector<int>> swap_improving_neighbor(const ClusteringInstance& inst,
                                                        const std::vector<int>& open, int p,
                                                        double threshold, ClusteringMode mode);

/// Stock initial solutions: everything open for facility location, k seeded
/// random medians for k-median.
FacilitySolution initial_fl_solution(const ClusteringInstance& inst);
KMedianSolution initial_kmedian_solution(const ClusteringInstance& inst, std::uint64_t seed);

/// Adds a g x g uniform grid over the client bounding box to the candidate
/// sites.
void add_grid_sites(ClusteringInstance& inst, int g);

struct FlProblem {
    using Solution = FacilitySolution;

    const ClusteringInstance* instance = nullptr;
    int swap_budget = 1;

    std::size_t size() const { return instance->clients.size(); }
    double cost(const Solution& s) const { return fl_cost(*instance, s); }
    void validate(const Solution& s) const;
    std::optional<Solution> improving_neighbor(const Solution& s, double threshold) const {
        auto next = swap_improving_neighbor(*instance, s.open, swap_budget, threshold,
                                            ClusteringMode::FacilityLocation);
        if (!next) return std::nullopt;
        return Solution{std::move(*next)};
    }
};

struct KMedianProblem {
    using Solution = KMedianSolution;

    const ClusteringInstance* instance = nullptr;
    int swap_budget = 1;

    std::size_t size() const { return instance->clients.size(); }
    double cost(const Solution& s) const { return kmedian_cost(*instance, s); }
    void validate(const Solution& s) const;
    std::optional<Solution> improving_neighbor(const Solution& s, double threshold) const {
        auto next = swap_improving_neighbor(*instance, s.open, swap_budget, threshold,
                                            ClusteringMode::KMedian);
        if (!next) return std::nullopt;
        return Solution{std::move(*next)};
    }
};

}  // namespace geols
