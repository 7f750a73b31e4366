#include "geols/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace geols {

Point geometric_median(std::span<const Point> anchors, Point init, int max_iters, double tol) {
    Point cur = init;
    for (int it = 0; it < max_iters; ++it) {
        double wx = 0.0, wy = 0.0, wsum = 0.0;
        for (const Point& a : anchors) {
            double d = dist(cur, a);
            if (d < 1e-12) {
                // nudge off the anchor to keep the weights finite
                cur.x += 1e-12;
                cur.y += 1e-12;
                d = dist(cur, a);
            }
            const double w = 1.0 / d;
            wx += w * a.x;
            wy += w * a.y;
            wsum += w;
        }
        const Point next{wx / wsum, wy / wsum};
        const double moved = dist(cur, next);
        cur = next;
        if (moved < tol) break;
    }
    return cur;
}

Point fermat_point(const Point& a, const Point& b, const Point& c, double tol) {
    // A vertex with angle >= 120 degrees is itself the minimizer.
    const Point pts[3] = {a, b, c};
    for (int i = 0; i < 3; ++i) {
        const Point& v = pts[i];
        const Point& u = pts[(i + 1) % 3];
        const Point& w = pts[(i + 2) % 3];
        const double du = dist(v, u), dw = dist(v, w);
        if (du < 1e-15 || dw < 1e-15) return v;  // degenerate triangle
        const double dot = (u.x - v.x) * (w.x - v.x) + (u.y - v.y) * (w.y - v.y);
        if (dot / (du * dw) <= -0.5) return v;
    }
    const Point centroid{(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
    return geometric_median(pts, centroid, 200, tol);
}

double steiner_cost(const SteinerInstance& inst, const SteinerSolution& sol) {
    if (sol.steiner_points.size() > inst.terminals.size())
        throw std::invalid_argument("steiner_cost: more Steiner points than terminals");
    std::vector<Point> all = inst.terminals;
    all.insert(all.end(), sol.steiner_points.begin(), sol.steiner_points.end());
    return mst_length(all);
}

namespace {

// Edges of an MST over the given points, as index pairs.
std::vector<std::pair<int, int>> mst_edges(std::span<const Point> pts) {
    const int n = static_cast<int>(pts.size());
    std::vector<std::pair<int, int>> edges;
    if (n < 2) return edges;
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<int> from(n, -1);
    std::vector<bool> used(n, false);
    best[0] = 0.0;
    for (int step = 0; step < n; ++step) {
        int v = -1;
        for (int i = 0; i < n; ++i)
            if (!used[i] && (v < 0 || best[i] < best[v])) v = i;
        used[v] = true;
        if (from[v] >= 0) edges.emplace_back(from[v], v);
        for (int i = 0; i < n; ++i) {
            if (used[i]) continue;
            const double d = dist(pts[v], pts[i]);
            if (d < best[i]) {
                best[i] = d;
                from[i] = v;
            }
        }
    }
    return edges;
}

// Fermat points of vertex triples adjacent in the current MST; junctions at
// a vertex itself are useless and skipped.
std::vector<Point> add_candidates(const SteinerInstance& inst, const SteinerSolution& sol) {
    std::vector<Point> all = inst.terminals;
    all.insert(all.end(), sol.steiner_points.begin(), sol.steiner_points.end());
    const auto edges = mst_edges(all);
    std::vector<std::vector<int>> adj(all.size());
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<Point> out;
    for (std::size_t v = 0; v < all.size(); ++v) {
        for (std::size_t i = 0; i < adj[v].size(); ++i) {
            for (std::size_t j = i + 1; j < adj[v].size(); ++j) {
                const Point cand =
                    fermat_point(all[adj[v][i]], all[v], all[adj[v][j]], 1e-9);
                if (dist(cand, all[adj[v][i]]) < 1e-9 || dist(cand, all[v]) < 1e-9 ||
                    dist(cand, all[adj[v][j]]) < 1e-9)
                    continue;
                out.push_back(cand);
            }
        }
    }
    return out;
}

// Remove near-duplicate Steiner points so the cardinality stays meaningful.
void merge_duplicates(std::vector<Point>& pts) {
    std::vector<Point> kept;
    for (const Point& p : pts) {
        bool dup = false;
        for (const Point& q : kept)
            if (dist(p, q) < 1e-9) dup = true;
        if (!dup) kept.push_back(p);
    }
    pts = std::move(kept);
}

}  // namespace

std::optional<SteinerSolution> steiner_improving_neighbor(const SteinerInstance& inst,
                                                          const SteinerSolution& sol, int p,
                                                          double threshold) {
    if (p < 1 || p > 3) throw std::invalid_argument("steiner_improving_neighbor: p must be 1..3");

    const std::size_t n = inst.terminals.size();
    const auto& cur = sol.steiner_points;
    const std::vector<Point> adds = add_candidates(inst, sol);

    auto try_move = [&](const std::vector<int>& deletes,
                        const Point* add) -> std::optional<SteinerSolution> {
        SteinerSolution next;
        for (std::size_t i = 0; i < cur.size(); ++i)
            if (std::find(deletes.begin(), deletes.end(), static_cast<int>(i)) == deletes.end())
                next.steiner_points.push_back(cur[i]);
        if (add) next.steiner_points.push_back(*add);
        merge_duplicates(next.steiner_points);
        if (next.steiner_points.size() > n) return std::nullopt;
        if (steiner_cost(inst, next) <= threshold) return next;
        return std::nullopt;
    };

    // Budget-1 moves first: single deletes, then single adds.
    for (int i = 0; i < static_cast<int>(cur.size()); ++i)
        if (auto r = try_move({i}, nullptr)) return r;
    for (const Point& c : adds)
        if (auto r = try_move({}, &c)) return r;

    if (p >= 2) {
        // relocations: delete one, add one
        for (int i = 0; i < static_cast<int>(cur.size()); ++i)
            for (const Point& c : adds)
                if (auto r = try_move({i}, &c)) return r;
        for (int i = 0; i < static_cast<int>(cur.size()); ++i)
            for (int j = i + 1; j < static_cast<int>(cur.size()); ++j)
                if (auto r = try_move({i, j}, nullptr)) return r;
    }
    if (p >= 3) {
        for (int i = 0; i < static_cast<int>(cur.size()); ++i)
            for (int j = i + 1; j < static_cast<int>(cur.size()); ++j) {
                for (const Point& c : adds)
                    if (auto r = try_move({i, j}, &c)) return r;
                for (int k = j + 1; k < static_cast<int>(cur.size()); ++k)
                    if (auto r = try_move({i, j, k}, nullptr)) return r;
            }
    }
    return std::nullopt;
}

SteinerSolution greedy_trim(const SteinerInstance& inst, SteinerSolution sol) {
    const std::size_t n = inst.terminals.size();
    while (sol.steiner_points.size() > n) {
        double best_cost = std::numeric_limits<double>::infinity();
        std::size_t best_idx = 0;
        for (std::size_t i = 0; i < sol.steiner_points.size(); ++i) {
            SteinerSolution trimmed;
            for (std::size_t j = 0; j < sol.steiner_points.size(); ++j)
                if (j != i) trimmed.steiner_points.push_back(sol.steiner_points[j]);
            std::vector<Point> all = inst.terminals;
            all.insert(all.end(), trimmed.steiner_points.begin(), trimmed.steiner_points.end());
            const double c = mst_length(all);
            if (c < best_cost) {
                best_cost = c;
                best_idx = i;
            }
        }
        sol.steiner_points.erase(sol.steiner_points.begin() + static_cast<long>(best_idx));
    }
    return sol;
}

void SteinerProblem::validate(const Solution& s) const {
    if (s.steiner_points.size() > instance->terminals.size())
        throw std::invalid_argument("Steiner solution exceeds the cardinality bound");
    for (const Point& p : s.steiner_points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("Steiner point has non-finite coordinates");
}

}  // namespace geols
