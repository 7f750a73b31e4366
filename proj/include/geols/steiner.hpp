#pragma once

#include <optional>
#include <span>
#include <vector>

#include "geols/geom.hpp"

namespace geols {

struct SteinerInstance {
    std::vector<Point> terminals;  // n >= 2
};

struct SteinerSolution {
    std::vector<Point> steiner_points;  // at most n of them
};

/// Weiszfeld fixpoint for the point minimizing total distance to the
/// anchors. Iterates landing on an anchor are nudged by 1e-12 to dodge the
/// division singularity.
Point geometric_median(std::span<const Point> anchors, Point init, int max_iters, double tol);

/// Fermat point of a triangle: the interior torsion point when all angles
/// are below 120 degrees, otherwise the wide-angle vertex.
Point fermat_point(const Point& a, const Point& b, const Point& c, double tol = 1e-9);

/// MST length of terminals plus Steiner points. Throws when the solution
/// carries more Steiner points than terminals.
double steiner_cost(const SteinerInstance& inst, const SteinerSolution& sol);

/// Searches moves that change at most p Steiner points (delete sets, plus
/// one added junction; a relocate costs 2 of the budget). Added junctions
/// are Fermat points of triples adjacent in the current MST, refined by
/// geometric-median iteration. Returns the first neighbor at or below the
/// threshold.
std::optional<SteinerSolution> steiner_improving_neighbor(const SteinerInstance& inst,
                                                          const SteinerSolution& sol, int p,
                                                          double threshold);

/// While the solution has more Steiner points than terminals, drop the
/// point whose removal increases the cost least.
SteinerSolution greedy_trim(const SteinerInstance& inst, SteinerSolution sol);

/// Engine adapter.
struct SteinerProblem {
    using Solution = SteinerSolution;

    const SteinerInstance* instance = nullptr;
    int swap_budget = 1;

    std::size_t size() const { return instance->terminals.size(); }
    double cost(const Solution& s) const { return steiner_cost(*instance, s); }
    void validate(const Solution& s) const;
    std::optional<Solution> improving_neighbor(const Solution& s, double threshold) const {
        return steiner_improving_neighbor(*instance, s, swap_budget, threshold);
    }
};

}  // namespace geols
