#include "geols/dissection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "geols/clustering.hpp"
#include "geols/rng.hpp"

namespace geols {

// ---------------------------------------------------------------------------
// Karp dissection
// ---------------------------------------------------------------------------

namespace {

void karp_split(std::span<const Point> pts, Rect rect, std::vector<int> members,
                int stop_threshold, std::vector<KarpBox>& out) {
    if (static_cast<int>(members.size()) <= stop_threshold) {
        out.push_back({rect, std::move(members)});
        return;
    }
    const bool split_x = rect.width() >= rect.height();
    auto key = [&](int i) { return split_x ? pts[i].x : pts[i].y; };
    std::sort(members.begin(), members.end(),
              [&](int a, int b) { return key(a) < key(b) || (key(a) == key(b) && a < b); });
    const std::size_t half = (members.size() + 1) / 2;
    const double split_at = (key(members[half - 1]) + key(members[half])) / 2.0;

    Rect left = rect, right = rect;
    if (split_x) {
        left.xmax = split_at;
        right.xmin = split_at;
    } else {
        left.ymax = split_at;
        right.ymin = split_at;
    }
    std::vector<int> a(members.begin(), members.begin() + half);
    std::vector<int> b(members.begin() + half, members.end());
    karp_split(pts, left, std::move(a), stop_threshold, out);
    karp_split(pts, right, std::move(b), stop_threshold, out);
}

}  // namespace

std::vector<KarpBox> karp_dissection(std::span<const Point> points, int stop_threshold) {
    if (stop_threshold < 2) throw std::invalid_argument("karp_dissection: threshold must be >= 2");
    if (points.empty()) return {};
    std::vector<int> all(points.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<KarpBox> out;
    karp_split(points, Rect::bounding(points), std::move(all), stop_threshold, out);
    return out;
}

double perimeter_sum(std::span<const KarpBox> boxes) {
    double total = 0.0;
    for (const auto& b : boxes) total += b.rect.perimeter();
    return total;
}

// ---------------------------------------------------------------------------
// Adaptive dissection
// ---------------------------------------------------------------------------

namespace {

struct Builder {
    std::span<const Point> l_pts;
    std::span<const Point> g_pts;
    std::vector<int> g_home;  // nearest L facility of each g, global Voronoi
    double size_min;          // 1/(2 eps^2)
    double size_max;          // 1/eps^2
    double l_cut_threshold;   // 1/(2 eps)
    Rng rng;
    DissectionTree* tree;

    void track_aspect(const Rect& r) {
        tree->max_aspect_ratio = std::max(tree->max_aspect_ratio, aspect_ratio(r));
    }

    int build(Rect rect, std::vector<int> l_idx, std::vector<int> g_idx) {
        const int id = static_cast<int>(tree->nodes.size());
        tree->nodes.push_back({});
        tree->nodes[id].rect = rect;
        tree->nodes[id].local_facilities = l_idx;
        tree->nodes[id].global_facilities = g_idx;

        const double total = static_cast<double>(l_idx.size() + g_idx.size());
        if (total < size_min) return id;

        if (static_cast<double>(l_idx.size()) > l_cut_threshold) {
            std::vector<Point> l_here;
            l_here.reserve(l_idx.size());
            for (int i : l_idx) l_here.push_back(l_pts[i]);
            const Rect b_prime = Rect::bounding(l_here);
            const double bp = b_prime.long_side();
            if (bp > 0.0) {
                cut_node(id, rect, b_prime, bp, std::move(l_idx), std::move(g_idx));
                return id;
            }
            // all local facilities coincide; no usable sub-rectangle
        }
        partition_node(id, rect, l_idx, g_idx);
        return id;
    }

    void cut_node(int id, const Rect& rect, const Rect& b_prime, double bp,
                  std::vector<int> l_idx, std::vector<int> g_idx) {
        const double pad = bp / 3.0;
        const Rect extended{b_prime.xmin - pad, b_prime.ymin - pad, b_prime.xmax + pad,
                            b_prime.ymax + pad};
        const Rect sub{std::max(extended.xmin, rect.xmin), std::max(extended.ymin, rect.ymin),
                       std::min(extended.xmax, rect.xmax), std::min(extended.ymax, rect.ymax)};
        track_aspect(sub);

        // ties on the longest side go to the horizontal one (vertical cut)
        const bool cut_x = sub.width() >= sub.height();
        const double s2 = cut_x ? sub.width() : sub.height();
        const double lo = cut_x ? sub.xmin : sub.ymin;
        const double cut_at = lo + s2 * (1.0 + rng.next_double()) / 3.0;

        Rect b1 = sub, b2 = sub;
        Segment cut;
        if (cut_x) {
            b1.xmax = cut_at;
            b2.xmin = cut_at;
            cut = {{cut_at, sub.ymin}, {cut_at, sub.ymax}};
        } else {
            b1.ymax = cut_at;
            b2.ymin = cut_at;
            cut = {{sub.xmin, cut_at}, {sub.xmax, cut_at}};
        }
        track_aspect(b1);
        track_aspect(b2);

        std::vector<int> l1, l2;
        for (int i : l_idx) {
            const double c = cut_x ? l_pts[i].x : l_pts[i].y;
            (c < cut_at ? l1 : l2).push_back(i);
        }
        std::vector<char> in_l1(l_pts.size(), 0);
        for (int i : l1) in_l1[i] = 1;
        std::vector<int> g1, g2;
        for (int gi : g_idx) {
            if (in_l1[g_home[gi]] && !b2.contains(g_pts[gi]))
                g1.push_back(gi);
            else
                g2.push_back(gi);
        }

        tree->nodes[id].process = DissectionProcess::CutPair;
        tree->nodes[id].sub_rect = sub;
        tree->nodes[id].cut = cut;
        const int c1 = build(b1, std::move(l1), std::move(g1));
        const int c2 = build(b2, std::move(l2), std::move(g2));
        tree->nodes[id].children = {c1, c2};
    }

    void partition_node(int id, const Rect& rect, const std::vector<int>& l_idx,
                        const std::vector<int>& g_idx) {
        struct Entry {
            Point p;
            bool is_g;
            int idx;
        };
        std::vector<Entry> entries;
        entries.reserve(l_idx.size() + g_idx.size());
        for (int i : l_idx) entries.push_back({l_pts[i], false, i});
        for (int i : g_idx) entries.push_back({g_pts[i], true, i});
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            if (a.p.x != b.p.x) return a.p.x < b.p.x;
            if (a.p.y != b.p.y) return a.p.y < b.p.y;
            if (a.is_g != b.is_g) return !a.is_g;
            return a.idx < b.idx;
        });

        const std::size_t total = entries.size();
        const std::size_t parts =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(total / size_max)));
        tree->nodes[id].process = DissectionProcess::Partition;

        std::size_t from = 0;
        for (std::size_t part = 0; part < parts; ++part) {
            const std::size_t count = total / parts + (part < total % parts ? 1 : 0);
            std::vector<int> l_chunk, g_chunk;
            std::vector<Point> chunk_pts;
            for (std::size_t k = from; k < from + count; ++k) {
                chunk_pts.push_back(entries[k].p);
                (entries[k].is_g ? g_chunk : l_chunk).push_back(entries[k].idx);
            }
            from += count;
            const Rect bbox = rect.clip(Rect::bounding(chunk_pts));
            const int child = static_cast<int>(tree->nodes.size());
            tree->nodes.push_back({});
            tree->nodes[child].rect = bbox;
            tree->nodes[child].local_facilities = std::move(l_chunk);
            tree->nodes[child].global_facilities = std::move(g_chunk);
            tree->nodes[id].children.push_back(child);
        }
    }
};

}  // namespace

DissectionTree adaptive_dissection(std::span<const Point> l_points,
                                   std::span<const Point> g_points, double epsilon,
                                   std::uint64_t seed) {
    if (l_points.empty()) throw std::invalid_argument("adaptive_dissection: L must be nonempty");
    if (!(epsilon > 0.0) || 1.0 / (epsilon * epsilon) < 2.0)
        throw std::invalid_argument("adaptive_dissection: need 1/eps^2 >= 2");

    DissectionTree tree;
    tree.l_points.assign(l_points.begin(), l_points.end());
    tree.g_points.assign(g_points.begin(), g_points.end());
    tree.epsilon = epsilon;

    // smallest enclosing square of L and G
    std::vector<Point> all(l_points.begin(), l_points.end());
    all.insert(all.end(), g_points.begin(), g_points.end());
    const Rect bb = Rect::bounding(all);
    const double side = bb.long_side();
    const Point c = bb.center();
    const Rect square{c.x - side / 2.0, c.y - side / 2.0, c.x + side / 2.0, c.y + side / 2.0};

    Builder builder{l_points,
                    g_points,
                    {},
                    1.0 / (2.0 * epsilon * epsilon),
                    1.0 / (epsilon * epsilon),
                    1.0 / (2.0 * epsilon),
                    Rng(seed),
                    &tree};
    builder.g_home.resize(g_points.size());
    for (std::size_t gi = 0; gi < g_points.size(); ++gi) {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t li = 0; li < l_points.size(); ++li) {
            const double d = dist(g_points[gi], l_points[li]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(li);
            }
        }
        builder.g_home[gi] = best;
    }

    std::vector<int> l_all(l_points.size()), g_all(g_points.size());
    std::iota(l_all.begin(), l_all.end(), 0);
    std::iota(g_all.begin(), g_all.end(), 0);
    builder.build(square, std::move(l_all), std::move(g_all));
    return tree;
}

// ---------------------------------------------------------------------------
// Regions
// ---------------------------------------------------------------------------

std::vector<Region> compute_regions(DissectionTree& tree, double epsilon) {
    if (tree.nodes.empty()) return {};
    const double threshold = 1.0 / (2.0 * epsilon * epsilon);

    // bottom-up labels; a node fires as a region when its label first
    // exceeds the threshold
    auto propagate = [&](auto&& self, int id) -> int {
        DissectionNode& node = tree.nodes[id];
        node.is_region_node = false;
        if (node.children.empty()) {
            node.label = static_cast<int>(node.local_facilities.size() +
                                          node.global_facilities.size());
        } else {
            int sum = 0;
            for (int ch : node.children) sum += self(self, ch);
            node.label = sum;
        }
        if (static_cast<double>(node.label) > threshold) {
            node.is_region_node = true;
            node.label = 0;
        }
        return node.label;
    };
    propagate(propagate, 0);
    if (tree.nodes[0].label > 0) {
        // facilities above the last fired node still need a home
        tree.nodes[0].is_region_node = true;
        tree.nodes[0].label = 0;
    }

    std::vector<Region> regions;
    // DFS carrying the nearest enclosing region; leaves hand their
    // facilities to it, nested region rects become holes
    auto walk = [&](auto&& self, int id, int parent_region, bool parent_is_partition) -> void {
        const DissectionNode& node = tree.nodes[id];
        int current = parent_region;
        if (node.is_region_node) {
            if (parent_region >= 0) regions[parent_region].holes.push_back(node.rect);
            current = static_cast<int>(regions.size());
            regions.push_back({});
            regions[current].node = id;
            regions[current].outer = node.rect;
            regions[current].from_partition = parent_is_partition;
        }
        if (node.children.empty()) {
            if (current >= 0) {
                auto& r = regions[current];
                r.l_members.insert(r.l_members.end(), node.local_facilities.begin(),
                                   node.local_facilities.end());
                r.g_members.insert(r.g_members.end(), node.global_facilities.begin(),
                                   node.global_facilities.end());
            }
            return;
        }
        for (int ch : node.children)
            self(self, ch, current, node.process == DissectionProcess::Partition);
    };
    walk(walk, 0, -1, false);
    return regions;
}

PortalSet place_portals(std::span<const Region> regions, int p) {
    if (p < 1) throw std::invalid_argument("place_portals: p must be >= 1");
    PortalSet out;
    out.per_region.resize(regions.size());
    for (std::size_t ri = 0; ri < regions.size(); ++ri) {
        std::vector<Point>& pts = out.per_region[ri];
        auto add_edge = [&](Point a, Point b) {
            if (p == 1) {
                pts.push_back({(a.x + b.x) / 2.0, (a.y + b.y) / 2.0});
                return;
            }
            for (int j = 0; j < p; ++j) {
                const double t = static_cast<double>(j) / (p - 1);
                pts.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
            }
        };
        auto add_rect = [&](const Rect& r) {
            add_edge({r.xmin, r.ymin}, {r.xmax, r.ymin});
            add_edge({r.xmax, r.ymin}, {r.xmax, r.ymax});
            add_edge({r.xmax, r.ymax}, {r.xmin, r.ymax});
            add_edge({r.xmin, r.ymax}, {r.xmin, r.ymin});
        };
        add_rect(regions[ri].outer);
        for (const Rect& hole : regions[ri].holes) add_rect(hole);

        // shared corners show up once
        std::vector<Point> dedup;
        for (const Point& q : pts) {
            bool seen = false;
            for (const Point& kept : dedup)
                if (kept.x == q.x && kept.y == q.y) seen = true;
            if (!seen) dedup.push_back(q);
        }
        pts = std::move(dedup);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Assignments
// ---------------------------------------------------------------------------

Assignment e0_assignment(std::span<const Point> clients, std::span<const Point> l_points,
                         std::span<const Point> g_points) {
    const ClientAssignment to_l = assign_clients(clients, l_points);
    const ClientAssignment to_g = assign_clients(clients, g_points);
    Assignment out;
    out.targets.resize(clients.size());
    for (std::size_t c = 0; c < clients.size(); ++c) {
        AssignmentTarget& t = out.targets[c];
        if (to_l.distances[c] >= to_g.distances[c]) {
            t.kind = AssignmentTarget::Kind::LFacility;
            t.index = to_l.serving[c];
            t.position = l_points[t.index];
            out.cost += to_l.distances[c];
        } else {
            t.kind = AssignmentTarget::Kind::GFacility;
            t.index = to_g.serving[c];
            t.position = g_points[t.index];
            out.cost += to_g.distances[c];
        }
    }
    return out;
}

namespace {

// facility index -> owning region
std::pair<std::vector<int>, std::vector<int>> region_lookup(std::span<const Region> regions,
                                                            std::size_t n_l, std::size_t n_g) {
    std::vector<int> l_region(n_l, -1), g_region(n_g, -1);
    for (std::size_t ri = 0; ri < regions.size(); ++ri) {
        for (int li : regions[ri].l_members) l_region[li] = static_cast<int>(ri);
        for (int gi : regions[ri].g_members) g_region[gi] = static_cast<int>(ri);
    }
    return {std::move(l_region), std::move(g_region)};
}

}  // namespace

Assignment build_assignment(std::span<const Point> clients, std::span<const Point> l_points,
                            std::span<const Point> g_points, std::span<const Region> regions,
                            const PortalSet& portals) {
    const ClientAssignment to_l = assign_clients(clients, l_points);
    const ClientAssignment to_g = assign_clients(clients, g_points);
    const auto [l_region, g_region] = region_lookup(regions, l_points.size(), g_points.size());

    Assignment out = e0_assignment(clients, l_points, g_points);
    out.cost = 0.0;
    for (std::size_t c = 0; c < clients.size(); ++c) {
        const int r = l_region[to_l.serving[c]];
        const bool violating = r >= 0 && g_region[to_g.serving[c]] != r;
        if (violating) {
            // nearest of portals(R) and the L facilities outside R
            AssignmentTarget best;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t li = 0; li < l_points.size(); ++li) {
                if (l_region[li] == r) continue;
                const double d = dist(clients[c], l_points[li]);
                if (d < best_d) {
                    best_d = d;
                    best = {AssignmentTarget::Kind::LFacility, static_cast<int>(li), -1,
                            l_points[li]};
                }
            }
            const auto& ps = portals.per_region[r];
            for (std::size_t pi = 0; pi < ps.size(); ++pi) {
                const double d = dist(clients[c], ps[pi]);
                if (d < best_d) {
                    best_d = d;
                    best = {AssignmentTarget::Kind::Portal, static_cast<int>(pi), r, ps[pi]};
                }
            }
            out.targets[c] = best;
        }
        out.cost += dist(clients[c], out.targets[c].position);
    }
    return out;
}

int count_structure_violations(std::span<const Point> clients,
                               std::span<const Point> l_points,
                               std::span<const Point> g_points,
                               std::span<const Region> regions, const PortalSet& portals,
                               const Assignment& assignment) {
    const ClientAssignment to_l = assign_clients(clients, l_points);
    const ClientAssignment to_g = assign_clients(clients, g_points);
    const auto [l_region, g_region] = region_lookup(regions, l_points.size(), g_points.size());

    int violations = 0;
    for (std::size_t c = 0; c < clients.size(); ++c) {
        const int r = l_region[to_l.serving[c]];
        if (r < 0 || g_region[to_g.serving[c]] == r) continue;
        const AssignmentTarget& t = assignment.targets[c];
        const bool ok_portal = t.kind == AssignmentTarget::Kind::Portal && t.region == r &&
                               t.index >= 0 &&
                               t.index < static_cast<int>(portals.per_region[r].size());
        const bool ok_facility =
            t.kind == AssignmentTarget::Kind::LFacility && l_region[t.index] != r;
        if (!ok_portal && !ok_facility) ++violations;
    }
    return violations;
}

// ---------------------------------------------------------------------------
// Client partitioning
// ---------------------------------------------------------------------------

ClientPartition partition_clients(std::span<const Point> clients,
                                  std::span<const Point> l_points,
                                  std::span<const Point> g_points,
                                  std::span<const Region> regions) {
    const ClientAssignment to_l = assign_clients(clients, l_points);
    const ClientAssignment to_g = assign_clients(clients, g_points);
    const auto [l_region, g_region] = region_lookup(regions, l_points.size(), g_points.size());

    ClientPartition out;
    out.c_r.resize(regions.size());
    out.delta_r.resize(regions.size());
    std::vector<bool> in_c_g(clients.size(), false);
    for (std::size_t c = 0; c < clients.size(); ++c) {
        // c_L = max(c_L, c_G) sends ties to C_G
        if (to_l.distances[c] >= to_g.distances[c]) {
            in_c_g[c] = true;
            out.c_g.push_back(static_cast<int>(c));
        } else {
            out.c_l.push_back(static_cast<int>(c));
        }
    }
    for (std::size_t c = 0; c < clients.size(); ++c) {
        const int rg = g_region[to_g.serving[c]];
        const int rl = l_region[to_l.serving[c]];
        // C_R := V_G(G_R) intersect (C_G union V_L(L_R))
        if (rg >= 0 && (in_c_g[c] || rl == rg)) out.c_r[rg].push_back(static_cast<int>(c));
        // Delta_R := V_L(L_R) minus V_G(G_R)
        if (rl >= 0 && rg != rl) out.delta_r[rl].push_back(static_cast<int>(c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Balanced clustering
// ---------------------------------------------------------------------------

BalancedClusters balanced_clustering(std::span<const BalancedSet> sets, double epsilon) {
    const double inv = 1.0 / epsilon;
    const int u = static_cast<int>(std::llround(inv));
    if (std::abs(inv - u) > 1e-9 || u < 2)
        throw std::invalid_argument("balanced_clustering: 1/eps must be an integer >= 2");
    const double size_min = u * u / 2.0;
    const double size_max = static_cast<double>(u) * u;

    long total_l = 0, total_g = 0, total_v = 0;
    std::vector<int> value(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const int sz = sets[i].l_count + sets[i].g_count;
        if (sz < size_min || sz > size_max)
            throw std::invalid_argument("balanced_clustering: set size out of range");
        value[i] = sets[i].l_count - sets[i].g_count - u;
        total_l += sets[i].l_count;
        total_g += sets[i].g_count;
        total_v += value[i];
    }
    if (static_cast<double>(total_l) < (1.0 + 3.0 * epsilon) * static_cast<double>(total_g) - 1e-9)
        throw std::invalid_argument("balanced_clustering: L total below (1+3eps) x G total");
    if (total_v < 0)
        throw std::invalid_argument(
            "balanced_clustering: aggregate surplus negative; no valid clustering exists");

    BalancedClusters out;
    std::vector<std::vector<int>> by_value_pos(size_max + 1), by_value_neg(size_max + u + 1);
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (value[i] == 0) {
            out.clusters.push_back({static_cast<int>(i)});
        } else if (value[i] > 0) {
            by_value_pos[value[i]].push_back(static_cast<int>(i));
        } else {
            by_value_neg[-value[i]].push_back(static_cast<int>(i));
        }
    }

    // exact cancellation batches: a/gcd sets of value -b against b/gcd sets
    // of value +a
    bool progressed = true;
    while (progressed) {
        progressed = false;
        for (int b = static_cast<int>(by_value_neg.size()) - 1; b >= 1 && !progressed; --b) {
            if (by_value_neg[b].empty()) continue;
            for (int a = static_cast<int>(by_value_pos.size()) - 1; a >= 1 && !progressed; --a) {
                const int g = std::gcd(a, b);
                const std::size_t need_neg = static_cast<std::size_t>(a / g);
                const std::size_t need_pos = static_cast<std::size_t>(b / g);
                if (by_value_neg[b].size() < need_neg || by_value_pos[a].size() < need_pos)
                    continue;
                std::vector<int> cluster;
                for (std::size_t t = 0; t < need_neg; ++t) {
                    cluster.push_back(by_value_neg[b].back());
                    by_value_neg[b].pop_back();
                }
                for (std::size_t t = 0; t < need_pos; ++t) {
                    cluster.push_back(by_value_pos[a].back());
                    by_value_pos[a].pop_back();
                }
                out.clusters.push_back(std::move(cluster));
                progressed = true;
            }
        }
    }

    // residual: every remaining negative plus the largest positives needed
    // to restore a nonnegative sum
    std::vector<int> residual;
    long residual_sum = 0;
    for (std::size_t b = 1; b < by_value_neg.size(); ++b) {
        for (int i : by_value_neg[b]) {
            residual.push_back(i);
            residual_sum -= static_cast<long>(b);
        }
        by_value_neg[b].clear();
    }
    if (!residual.empty()) {
        for (int a = static_cast<int>(by_value_pos.size()) - 1; a >= 1 && residual_sum < 0; --a) {
            while (!by_value_pos[a].empty() && residual_sum < 0) {
                residual.push_back(by_value_pos[a].back());
                by_value_pos[a].pop_back();
                residual_sum += a;
            }
        }
        out.clusters.push_back(std::move(residual));
    }

    // leftover positives carry their own surplus
    for (const auto& cls : by_value_pos)
        for (int i : cls) out.clusters.push_back({i});
    return out;
}

// ---------------------------------------------------------------------------
// Monte-Carlo experiments
// ---------------------------------------------------------------------------

StructureBoundStats verify_structure_bound(std::span<const Point> clients,
                                           std::span<const Point> l_points,
                                           std::span<const Point> g_points, double epsilon,
                                           int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("verify_structure_bound: trials must be >= 1");
    const int p = static_cast<int>(std::ceil(1.0 / (epsilon * epsilon)));

    const ClientAssignment to_l = assign_clients(clients, l_points);
    const ClientAssignment to_g = assign_clients(clients, g_points);
    double denom_base = 0.0;
    for (std::size_t c = 0; c < clients.size(); ++c)
        denom_base += to_l.distances[c] + to_g.distances[c];
    const double denom =
        epsilon * epsilon * std::log(1.0 / (epsilon * epsilon)) * denom_base;

    StructureBoundStats stats;
    stats.trials = trials;
    for (int t = 0; t < trials; ++t) {
        DissectionTree tree = adaptive_dissection(l_points, g_points, epsilon, Rng::mix(seed, t));
        const auto regions = compute_regions(tree, epsilon);
        const auto portals = place_portals(regions, p);
        const Assignment e0 = e0_assignment(clients, l_points, g_points);
        const Assignment e = build_assignment(clients, l_points, g_points, regions, portals);
        stats.violations +=
            count_structure_violations(clients, l_points, g_points, regions, portals, e);

        double increase = 0.0;
        for (std::size_t c = 0; c < clients.size(); ++c)
            increase += std::abs(dist(clients[c], e.targets[c].position) -
                                 dist(clients[c], e0.targets[c].position));
        const double ratio = denom > 0.0 ? increase / denom : (increase > 0.0 ? 1e300 : 0.0);
        stats.cost_e.push_back(e.cost);
        stats.cost_e0.push_back(e0.cost);
        stats.ratios.push_back(ratio);
        stats.mean_increase += increase;
        stats.max_increase = std::max(stats.max_increase, increase);
        stats.mean_ratio += ratio;
        stats.max_ratio = std::max(stats.max_ratio, ratio);
    }
    stats.mean_increase /= trials;
    stats.mean_ratio /= trials;
    return stats;
}

std::vector<CutProbabilityBucket> cut_probability_experiment(double d, int n_l, int n_g,
                                                             double epsilon, int trials,
                                                             std::uint64_t seed) {
    if (trials < 1000)
        throw std::invalid_argument("cut_probability_experiment: trials must be >= 1000");
    if (d < 0.0) throw std::invalid_argument("cut_probability_experiment: negative edge length");

    constexpr int kMinExp = -10, kMaxExp = 2;
    std::vector<CutProbabilityBucket> buckets;
    for (int e = kMinExp; e < kMaxExp; ++e) {
        CutProbabilityBucket b;
        b.s_min = std::pow(2.0, e);
        b.s_max = std::pow(2.0, e + 1);
        b.trials = trials;
        b.bound = std::min(1.0, b.s_min > 0.0 ? 3.0 * d / b.s_min : 1.0);
        buckets.push_back(b);
    }

    for (int t = 0; t < trials; ++t) {
        Rng rng(Rng::mix(seed, t));
        std::vector<Point> l(n_l), g(n_g);
        for (auto& p : l) p = {rng.next_double(), rng.next_double()};
        for (auto& p : g) p = {rng.next_double(), rng.next_double()};
        const Point v{rng.next_double(), rng.next_double()};
        const double angle = rng.next_double() * 2.0 * 3.14159265358979323846;
        const Point w{v.x + d * std::cos(angle), v.y + d * std::sin(angle)};

        const DissectionTree tree =
            adaptive_dissection(l, g, epsilon, rng.next_u64());

        // descend to the first Cut-Rectangle line separating the endpoints
        int id = 0;
        while (true) {
            const DissectionNode& node = tree.nodes[id];
            if (node.process != DissectionProcess::CutPair) break;
            const Rect& sub = *node.sub_rect;
            const bool v_in = sub.contains(v), w_in = sub.contains(w);
            if (!v_in || !w_in) break;  // left the cut chain (Sub-Rectangle side)
            const bool cut_x = node.cut->a.x == node.cut->b.x;
            const double at = cut_x ? node.cut->a.x : node.cut->a.y;
            const double cv = cut_x ? v.x : v.y;
            const double cw = cut_x ? w.x : w.y;
            const bool v_low = cv < at, w_low = cw < at;
            if (v_low != w_low) {
                const double s = sub.long_side();
                for (auto& b : buckets)
                    if (s >= b.s_min && s < b.s_max) ++b.separations;
                break;
            }
            id = node.children[v_low ? 0 : 1];
        }
    }

    for (auto& b : buckets)
        b.frequency = static_cast<double>(b.separations) / static_cast<double>(b.trials);
    return buckets;
}

}  // namespace geols
