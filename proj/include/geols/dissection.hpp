#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "geols/geom.hpp"

namespace geols {

// ---------------------------------------------------------------------------
// Karp-style dissection: recursive median splits of the longer side
// ---------------------------------------------------------------------------

struct KarpBox {
    Rect rect;
    std::vector<int> points;  // indices into the input set
};

/// Splits the bounding box recursively at the point median of the longer
/// side until every box holds at most stop_threshold points. Box counts end
/// up in [ceil(threshold/2), threshold] and the boxes tile the bounding box.
std::vector<KarpBox> karp_dissection(std::span<const Point> points, int stop_threshold);

/// Sum of box perimeters; diagnostic for the O(eps * sqrt n) bound.
double perimeter_sum(std::span<const KarpBox> boxes);

// ---------------------------------------------------------------------------
// Recursive adaptive dissection of two facility sets
// ---------------------------------------------------------------------------

enum class DissectionProcess { CutPair, Partition, Leaf };

struct DissectionNode {
    Rect rect;
    DissectionProcess process = DissectionProcess::Leaf;  // how the children were made
    std::vector<int> local_facilities;                    // indices into L
    std::vector<int> global_facilities;                   // indices into G
    std::optional<Rect> sub_rect;                         // B'' of the Sub-Rectangle step
    std::optional<Segment> cut;
    std::vector<int> children;
    int label = 0;
    bool is_region_node = false;
};

struct DissectionTree {
    std::vector<DissectionNode> nodes;  // nodes[0] is the root
    std::vector<Point> l_points;
    std::vector<Point> g_points;
    double epsilon = 0.0;
    double max_aspect_ratio = 1.0;  // over every Sub-Rectangle/Cut-Rectangle rect
};

/// Runs the recursive adaptive dissection: nodes with enough facilities are
/// cut by a random line in the middle third of the shrunk sub-rectangle's
/// longest side; facility-sparse nodes fall to the Partition process. L is
/// split geometrically, G follows its nearest-L facility unless it already
/// sits in the far half.
DissectionTree adaptive_dissection(std::span<const Point> l_points,
                                   std::span<const Point> g_points, double epsilon,
                                   std::uint64_t seed);

// ---------------------------------------------------------------------------
// Regions and portals
// ---------------------------------------------------------------------------

struct Region {
    int node = -1;
    Rect outer;
    std::vector<Rect> holes;  // rects of the nearest descendant regions
    std::vector<int> l_members;
    std::vector<int> g_members;
    bool from_partition = false;
};

/// Bottom-up label propagation: a node whose accumulated facility count
/// first exceeds 1/(2 eps^2) becomes a region node; each region is its rect
/// minus descendant region rects. Every facility lands in exactly one region.
std::vector<Region> compute_regions(DissectionTree& tree, double epsilon);

struct PortalSet {
    std::vector<std::vector<Point>> per_region;
};

/// p equally spaced portals along each boundary edge of each region (outer
/// rect and holes), corners included and deduplicated.
PortalSet place_portals(std::span<const Region> regions, int p);

// ---------------------------------------------------------------------------
// Assignments
// ---------------------------------------------------------------------------

struct AssignmentTarget {
    enum class Kind { LFacility, GFacility, Portal };
    Kind kind = Kind::LFacility;
    int index = -1;   // facility index, or portal index within the region
    int region = -1;  // owning region for portals
    Point position;
};

struct Assignment {
    std::vector<AssignmentTarget> targets;  // one per client
    double cost = 0.0;                      // sum of client-to-target distances
};

/// E0: each client is sent to the farther of its two serving facilities
/// (ties go to the L side).
Assignment e0_assignment(std::span<const Point> clients, std::span<const Point> l_points,
                         std::span<const Point> g_points);

/// E: starts from E0 and reroutes every client whose L-server lies in a
/// region R that does not also hold its G-server, to the nearest element of
/// portals(R) plus the L facilities outside R.
Assignment build_assignment(std::span<const Point> clients, std::span<const Point> l_points,
                            std::span<const Point> g_points, std::span<const Region> regions,
                            const PortalSet& portals);

// ---------------------------------------------------------------------------
// Client partitioning
// ---------------------------------------------------------------------------

struct ClientPartition {
    std::vector<int> c_g;                      // clients served no closer by L
    std::vector<int> c_l;                      // the rest
    std::vector<std::vector<int>> c_r;         // per region
    std::vector<std::vector<int>> delta_r;     // per region
};

ClientPartition partition_clients(std::span<const Point> clients,
                                  std::span<const Point> l_points,
                                  std::span<const Point> g_points,
                                  std::span<const Region> regions);

// ---------------------------------------------------------------------------
// Balanced clustering of typed sets
// ---------------------------------------------------------------------------

struct BalancedSet {
    int l_count = 0;
    int g_count = 0;
};

struct BalancedClusters {
    std::vector<std::vector<int>> clusters;  // indices into the input sets
};

/// Groups the sets so every cluster keeps an L-surplus of at least |C|/eps
/// while staying small: zero-valued sets become singletons, opposite-sign
/// values cancel in exact batches, one residual cluster absorbs the
/// remaining negatives.
BalancedClusters balanced_clustering(std::span<const BalancedSet> sets, double epsilon);

// ---------------------------------------------------------------------------
// Monte-Carlo experiments
// ---------------------------------------------------------------------------

struct StructureBoundStats {
    int trials = 0;
    int violations = 0;          // structure-property violations, all trials
    double mean_increase = 0.0;  // mean of sum |d(c,E) - d(c,E0)|
    double max_increase = 0.0;
    double mean_ratio = 0.0;  // normalized by eps^2 log(1/eps^2) sum(c_G + c_L)
    double max_ratio = 0.0;
    std::vector<double> cost_e;   // per trial
    std::vector<double> cost_e0;  // per trial
    std::vector<double> ratios;   // per trial
};

StructureBoundStats verify_structure_bound(std::span<const Point> clients,
                                           std::span<const Point> l_points,
                                           std::span<const Point> g_points, double epsilon,
                                           int trials, std::uint64_t seed);

struct CutProbabilityBucket {
    double s_min = 0.0;  // dyadic bucket of the cut side-length
    double s_max = 0.0;
    long separations = 0;
    long trials = 0;
    double frequency = 0.0;
    double bound = 0.0;  // min(1, 3 d / s_min)
};

/// Monte-Carlo estimate of the probability that a probe edge of length d is
/// first separated by a Cut-Rectangle line, bucketed by the side-length of
/// the rectangle that produced the cut.
std::vector<CutProbabilityBucket> cut_probability_experiment(double d, int n_l, int n_g,
                                                             double epsilon, int trials,
                                                             std::uint64_t seed);

/// True iff the given assignment obeys the structure property for every
/// client; counts of offending clients are returned through *violations.
int count_structure_violations(std::span<const Point> clients,
                               std::span<const Point> l_points,
                               std::span<const Point> g_points,
                               std::span<const Region> regions, const PortalSet& portals,
                               const Assignment& assignment);

}  // namespace geols
