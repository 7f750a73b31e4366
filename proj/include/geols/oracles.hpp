#pragma once

#include <span>
#include <vector>

#include "geols/geom.hpp"

namespace geols {

/// Result of an exact desk-scale solver. The solution field that applies to
/// the problem at hand is filled; the others stay empty.
struct OracleResult {
    double optimal_cost = 0.0;
    std::vector<int> tour;                 // TSP: visiting order
    std::vector<int> open;                 // FL / k-median: open site indices
    std::vector<Point> steiner_points;     // Steiner: chosen junctions
    long nodes_explored = 0;
};

/// Exact TSP by Held-Karp bitmask dynamic programming, 3 <= n <= 18.
OracleResult held_karp_tsp(std::span<const Point> points);

/// Exact uniform facility location by enumeration of all nonempty subsets
/// of at most 18 candidate sites.
OracleResult brute_force_fl(std::span<const Point> clients,
                            std::span<const Point> candidate_sites, double f);

/// Exact k-median by enumeration of all k-subsets; refuses instances with
/// more than 10^6 subsets.
OracleResult brute_force_kmedian(std::span<const Point> clients,
                                 std::span<const Point> candidate_sites, int k);

/// Exact Euclidean Steiner tree for 2 to 4 terminals: full topologies with
/// geometric-median junctions plus all degenerate ones, each scored as the
/// MST of terminals plus junctions.
OracleResult small_steiner_opt(std::span<const Point> terminals);

}  // namespace geols
