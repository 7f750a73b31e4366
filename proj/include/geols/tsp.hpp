#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "geols/geom.hpp"

namespace geols {

struct TspInstance {
    std::vector<Point> points;  // n >= 3 for a proper tour
};

/// Cyclic visiting order over point indices.
struct Tour {
    std::vector<int> order;
};

/// Canonical form: starts at index 0 and proceeds toward the smaller-index
/// neighbor, so equal tours compare equal.
Tour canonical(const Tour& t);

void validate_tour(const TspInstance& inst, const Tour& t);

double tour_length(const TspInstance& inst, const Tour& t);

/// Nearest-neighbor construction from point 0; the stock initial solution.
Tour nearest_neighbor_tour(const TspInstance& inst);

/// True iff no two tour edges properly intersect (exhaustive pair scan).
bool tour_is_noncrossing(const TspInstance& inst, const Tour& t);

/// Repeatedly applies 2-exchanges to crossing edge pairs until none remain.
/// Never increases the length.
Tour uncross(const TspInstance& inst, Tour t);

/// Per-point nearest-neighbor candidate lists, used to prune move scans on
/// instances above 500 points.
struct TspNeighborLists {
    std::vector<std::vector<int>> lists;
};

TspNeighborLists build_neighbor_lists(const TspInstance& inst, int want = 16);

/// First tour within the move classes (2-opt always; Or-opt relocations of
/// up to 3 points and 3-opt reconnections for p >= 3) that is non-crossing
/// and has length <= threshold. Candidates are pruned to grid-based nearest
/// neighbors above 500 points; pass cached lists to skip rebuilding them.
std::optional<Tour> kopt_improving_neighbor(const TspInstance& inst, const Tour& t, int p,
                                            double threshold,
                                            const TspNeighborLists* cached = nullptr);

/// Exhaustive check that no move in the p-budget classes strictly improves
/// the length while keeping the tour non-crossing.
bool verify_local_optimality(const TspInstance& inst, const Tour& t, int p);

/// Karp-style baseline: dissect until every box holds at most ceil(1/eps^2)
/// points, solve boxes exactly, stitch along a boustrophedon box order and
/// uncross the result.
Tour karp_partition_tour(const TspInstance& inst, double epsilon);

struct LowerBoundInstance {
    TspInstance instance;
    Tour bad;   // locally optimal under 2-exchanges, yet long
    Tour good;  // short reference tour
};

/// Worst-case construction: a comb of vertical teeth whose column-serpentine
/// traversal is 2-optimal but much longer than the row-serpentine tour. The
/// parameter k controls the tooth height (and the achieved ratio 2 - O(1/k)).
LowerBoundInstance lower_bound_instance(int k);

/// Engine adapter; builds the candidate lists once per instance.
struct TspProblem {
    using Solution = Tour;

    TspProblem(const TspInstance* inst, int budget) : instance(inst), swap_budget(budget) {}

    const TspInstance* instance = nullptr;
    int swap_budget = 2;
    mutable std::shared_ptr<const TspNeighborLists> candidates;

    std::size_t size() const { return instance->points.size(); }
    double cost(const Solution& t) const { return tour_length(*instance, t); }
    void validate(const Solution& t) const { validate_tour(*instance, t); }
    std::optional<Solution> improving_neighbor(const Solution& t, double threshold) const {
        if (instance->points.size() > 500 && !candidates)
            candidates = std::make_shared<TspNeighborLists>(build_neighbor_lists(*instance));
        return kopt_improving_neighbor(*instance, t, swap_budget, threshold, candidates.get());
    }
};

}  // namespace geols
