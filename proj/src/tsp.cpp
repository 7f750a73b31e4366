#include "geols/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "geols/dissection.hpp"
#include "geols/oracles.hpp"

namespace geols {

namespace {

constexpr double kImproveTol = 1e-9;

double edge_len(const TspInstance& inst, int u, int v) {
    return dist(inst.points[u], inst.points[v]);
}

// Checks the freshly created edges of a candidate tour against every tour
// edge. The pre-move tour is non-crossing, so only new edges can offend.
bool new_edges_noncrossing(const TspInstance& inst, const Tour& t,
                           const std::vector<std::pair<int, int>>& new_edges) {
    const int n = static_cast<int>(t.order.size());
    for (int i = 0; i < n; ++i) {
        const Segment e{inst.points[t.order[i]], inst.points[t.order[(i + 1) % n]]};
        for (const auto& [u, v] : new_edges) {
            const Segment f{inst.points[u], inst.points[v]};
            if (segments_properly_intersect(e, f)) return false;
        }
    }
    return true;
}

Tour apply_two_opt(const Tour& t, int i, int j) {
    Tour next = t;
    std::reverse(next.order.begin() + i + 1, next.order.begin() + j + 1);
    return next;
}

}  // namespace

// Nearest neighbors of every point through a uniform grid, used to prune
// candidate scans on large instances.
TspNeighborLists build_neighbor_lists(const TspInstance& inst, int want) {
    const int n = static_cast<int>(inst.points.size());
    const Rect bb = Rect::bounding(inst.points);
    const int g = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n) / 2.0)));
    const double cw = std::max(bb.width(), 1e-12) / g;
    const double ch = std::max(bb.height(), 1e-12) / g;
    std::vector<std::vector<int>> cells(static_cast<std::size_t>(g) * g);
    auto cell_of = [&](const Point& p) {
        int cx = std::min(g - 1, static_cast<int>((p.x - bb.xmin) / cw));
        int cy = std::min(g - 1, static_cast<int>((p.y - bb.ymin) / ch));
        return cy * g + cx;
    };
    for (int i = 0; i < n; ++i) cells[cell_of(inst.points[i])].push_back(i);

    std::vector<std::vector<int>> lists(n);
    std::vector<std::pair<double, int>> found;
    for (int i = 0; i < n; ++i) {
        const Point& p = inst.points[i];
        int cx = std::min(g - 1, static_cast<int>((p.x - bb.xmin) / cw));
        int cy = std::min(g - 1, static_cast<int>((p.y - bb.ymin) / ch));
        found.clear();
        for (int ring = 0; ring < g; ++ring) {
            for (int yy = std::max(0, cy - ring); yy <= std::min(g - 1, cy + ring); ++yy) {
                for (int xx = std::max(0, cx - ring); xx <= std::min(g - 1, cx + ring); ++xx) {
                    if (std::max(std::abs(yy - cy), std::abs(xx - cx)) != ring) continue;
                    for (int q : cells[static_cast<std::size_t>(yy) * g + xx])
                        if (q != i) found.emplace_back(dist(p, inst.points[q]), q);
                }
            }
            if (static_cast<int>(found.size()) >= want && ring >= 2) break;
        }
        std::sort(found.begin(), found.end());
        const int take = std::min<int>(want, static_cast<int>(found.size()));
        lists[i].reserve(take);
        for (int k = 0; k < take; ++k) lists[i].push_back(found[k].second);
    }
    return {std::move(lists)};
}

namespace {

struct MoveScan {
    const TspInstance& inst;
    const Tour& t;
    double base_len;
    double threshold;
    bool require_noncrossing;

    std::optional<Tour> check(Tour candidate, double cand_len,
                              const std::vector<std::pair<int, int>>& new_edges) const {
        if (cand_len > threshold) return std::nullopt;
        if (require_noncrossing && !new_edges_noncrossing(inst, candidate, new_edges))
            return std::nullopt;
        return candidate;
    }

    std::optional<Tour> two_opt(int i, int j) const {
        const auto& o = t.order;
        const int n = static_cast<int>(o.size());
        if (j == i + 1 || (i == 0 && j == n - 1)) return std::nullopt;
        const int jn = (j + 1) % n;
        const double delta = edge_len(inst, o[i], o[j]) + edge_len(inst, o[i + 1], o[jn]) -
                             edge_len(inst, o[i], o[i + 1]) - edge_len(inst, o[j], o[jn]);
        if (base_len + delta > threshold) return std::nullopt;
        return check(apply_two_opt(t, i, j), base_len + delta,
                     {{o[i], o[j]}, {o[i + 1], o[jn]}});
    }

    // Relocate the segment at positions [i, i+len) to sit after position j,
    // optionally reversed.
    std::optional<Tour> or_opt(int i, int len, int j, bool reversed) const {
        const auto& o = t.order;
        const int n = static_cast<int>(o.size());
        const int tail = i + len - 1;
        const int sa = reversed ? o[tail] : o[i];
        const int sb = reversed ? o[i] : o[tail];
        const int jn = (j + 1) % n;
        const double removed = edge_len(inst, o[i - 1], o[i]) + edge_len(inst, o[tail], o[tail + 1]) +
                               edge_len(inst, o[j], o[jn]);
        const double added = edge_len(inst, o[i - 1], o[tail + 1]) + edge_len(inst, o[j], sa) +
                             edge_len(inst, sb, o[jn]);
        const double delta = added - removed;
        if (base_len + delta > threshold) return std::nullopt;

        Tour next;
        next.order.reserve(n);
        std::vector<int> seg(o.begin() + i, o.begin() + tail + 1);
        if (reversed) std::reverse(seg.begin(), seg.end());
        std::vector<int> rest;
        rest.reserve(n - len);
        for (int k = 0; k < n; ++k)
            if (k < i || k > tail) rest.push_back(o[k]);
        // position of o[j] within rest
        for (std::size_t k = 0; k < rest.size(); ++k) {
            next.order.push_back(rest[k]);
            if (rest[k] == o[j]) next.order.insert(next.order.end(), seg.begin(), seg.end());
        }
        return check(std::move(next), base_len + delta,
                     {{o[i - 1], o[tail + 1]}, {o[j], sa}, {sb, o[jn]}});
    }

    // Pure 3-opt reconnections of the segments P | A | B | C where A spans
    // positions (i, j] and B spans (j, k]. The reversal-only variants are
    // 2-opt composites and already scanned.
    std::optional<Tour> three_opt(int i, int j, int k, int type) const {
        const auto& o = t.order;
        const int n = static_cast<int>(o.size());
        const int kn = (k + 1) % n;
        const double removed = edge_len(inst, o[i], o[i + 1]) + edge_len(inst, o[j], o[j + 1]) +
                               edge_len(inst, o[k], o[kn]);
        std::vector<int> a(o.begin() + i + 1, o.begin() + j + 1);
        std::vector<int> b(o.begin() + j + 1, o.begin() + k + 1);
        double added = 0.0;
        std::vector<std::pair<int, int>> new_edges;
        std::vector<int> mid;
        switch (type) {
            case 0:  // A' B'
                added = edge_len(inst, o[i], o[j]) + edge_len(inst, o[i + 1], o[k]) +
                        edge_len(inst, o[j + 1], o[kn]);
                new_edges = {{o[i], o[j]}, {o[i + 1], o[k]}, {o[j + 1], o[kn]}};
                mid.assign(a.rbegin(), a.rend());
                mid.insert(mid.end(), b.rbegin(), b.rend());
                break;
            case 1:  // B A
                added = edge_len(inst, o[i], o[j + 1]) + edge_len(inst, o[k], o[i + 1]) +
                        edge_len(inst, o[j], o[kn]);
                new_edges = {{o[i], o[j + 1]}, {o[k], o[i + 1]}, {o[j], o[kn]}};
                mid = b;
                mid.insert(mid.end(), a.begin(), a.end());
                break;
            case 2:  // B A'
                added = edge_len(inst, o[i], o[j + 1]) + edge_len(inst, o[k], o[j]) +
                        edge_len(inst, o[i + 1], o[kn]);
                new_edges = {{o[i], o[j + 1]}, {o[k], o[j]}, {o[i + 1], o[kn]}};
                mid = b;
                mid.insert(mid.end(), a.rbegin(), a.rend());
                break;
            default:  // B' A
                added = edge_len(inst, o[i], o[k]) + edge_len(inst, o[j + 1], o[i + 1]) +
                        edge_len(inst, o[j], o[kn]);
                new_edges = {{o[i], o[k]}, {o[j + 1], o[i + 1]}, {o[j], o[kn]}};
                mid.assign(b.rbegin(), b.rend());
                mid.insert(mid.end(), a.begin(), a.end());
                break;
        }
        const double delta = added - removed;
        if (base_len + delta > threshold) return std::nullopt;

        Tour next;
        next.order.reserve(n);
        next.order.insert(next.order.end(), o.begin(), o.begin() + i + 1);
        next.order.insert(next.order.end(), mid.begin(), mid.end());
        next.order.insert(next.order.end(), o.begin() + k + 1, o.end());
        return check(std::move(next), base_len + delta, new_edges);
    }
};

std::optional<Tour> scan_moves(const TspInstance& inst, const Tour& t, int p, double threshold,
                               bool require_noncrossing, const TspNeighborLists* cached,
                               bool allow_pruning = true) {
    const int n = static_cast<int>(t.order.size());
    const MoveScan scan{inst, t, tour_length(inst, t), threshold, require_noncrossing};
    const bool pruned = allow_pruning && n > 500;
    TspNeighborLists local;
    const std::vector<std::vector<int>>* nn_ptr = nullptr;
    std::vector<int> pos(n);
    if (pruned) {
        if (!cached) {
            local = build_neighbor_lists(inst, 16);
            cached = &local;
        }
        nn_ptr = &cached->lists;
        for (int k = 0; k < n; ++k) pos[t.order[k]] = k;
    }
    const auto& nn = pruned ? *nn_ptr : local.lists;

    // 2-opt
    if (!pruned) {
        for (int i = 0; i + 1 < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (auto r = scan.two_opt(i, j)) return r;
    } else {
        for (int i = 0; i < n; ++i) {
            for (int q : nn[t.order[i]]) {
                const int j = pos[q];
                const int lo = std::min(i, j), hi = std::max(i, j);
                if (lo == hi) continue;
                if (auto r = scan.two_opt(lo, hi)) return r;
            }
        }
    }
    if (p < 3) return std::nullopt;

    // Or-opt relocations
    for (int len = 1; len <= 3; ++len) {
        for (int i = 1; i + len - 1 <= n - 2; ++i) {
            auto try_insert = [&](int j) -> std::optional<Tour> {
                if (j >= i - 1 && j <= i + len - 1) return std::nullopt;
                if (auto r = scan.or_opt(i, len, j, false)) return r;
                if (auto r = scan.or_opt(i, len, j, true)) return r;
                return std::nullopt;
            };
            if (!pruned) {
                for (int j = 0; j < n; ++j)
                    if (auto r = try_insert(j)) return r;
            } else {
                for (int q : nn[t.order[i]])
                    if (auto r = try_insert(pos[q])) return r;
                for (int q : nn[t.order[i + len - 1]])
                    if (auto r = try_insert(pos[q])) return r;
            }
        }
    }

    // pure 3-opt
    auto three_all = [&](int i, int j, int k) -> std::optional<Tour> {
        for (int type = 0; type < 4; ++type)
            if (auto r = scan.three_opt(i, j, k, type)) return r;
        return std::nullopt;
    };
    if (!pruned) {
        for (int i = 0; i + 2 < n; ++i)
            for (int j = i + 1; j + 1 < n; ++j)
                for (int k = j + 1; k < n; ++k)
                    if (auto r = three_all(i, j, k)) return r;
    } else {
        for (int i = 0; i < n; ++i) {
            for (int q1 : nn[t.order[i]]) {
                for (int q2 : nn[q1]) {
                    int a = i, b = pos[q1], c = pos[q2];
                    if (a > b) std::swap(a, b);
                    if (b > c) std::swap(b, c);
                    if (a > b) std::swap(a, b);
                    if (a == b || b == c) continue;
                    if (auto r = three_all(a, b, c)) return r;
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace

Tour canonical(const Tour& t) {
    const int n = static_cast<int>(t.order.size());
    if (n == 0) return t;
    const auto it = std::find(t.order.begin(), t.order.end(), 0);
    if (it == t.order.end()) return t;
    const int p0 = static_cast<int>(it - t.order.begin());
    Tour rot;
    rot.order.reserve(n);
    for (int k = 0; k < n; ++k) rot.order.push_back(t.order[(p0 + k) % n]);
    if (n >= 3 && rot.order[n - 1] < rot.order[1]) {
        std::reverse(rot.order.begin() + 1, rot.order.end());
    }
    return rot;
}

void validate_tour(const TspInstance& inst, const Tour& t) {
    const std::size_t n = inst.points.size();
    if (n < 3) throw std::invalid_argument("tour: instance needs at least 3 points");
    if (t.order.size() != n) throw std::invalid_argument("tour: wrong length");
    std::vector<bool> seen(n, false);
    for (int v : t.order) {
        if (v < 0 || static_cast<std::size_t>(v) >= n)
            throw std::invalid_argument("tour: index out of range");
        if (seen[v]) throw std::invalid_argument("tour: repeated index");
        seen[v] = true;
    }
}

double tour_length(const TspInstance& inst, const Tour& t) {
    validate_tour(inst, t);
    const int n = static_cast<int>(t.order.size());
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += edge_len(inst, t.order[i], t.order[(i + 1) % n]);
    return total;
}

Tour nearest_neighbor_tour(const TspInstance& inst) {
    const int n = static_cast<int>(inst.points.size());
    Tour t;
    t.order.reserve(n);
    std::vector<bool> used(n, false);
    int cur = 0;
    t.order.push_back(cur);
    used[cur] = true;
    for (int step = 1; step < n; ++step) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int v = 0; v < n; ++v) {
            if (used[v]) continue;
            const double d = edge_len(inst, cur, v);
            if (d < best_d) {
                best_d = d;
                best = v;
            }
        }
        cur = best;
        used[cur] = true;
        t.order.push_back(cur);
    }
    return t;
}

bool tour_is_noncrossing(const TspInstance& inst, const Tour& t) {
    const int n = static_cast<int>(t.order.size());
    for (int i = 0; i < n; ++i) {
        const Segment e{inst.points[t.order[i]], inst.points[t.order[(i + 1) % n]]};
        for (int j = i + 1; j < n; ++j) {
            const Segment f{inst.points[t.order[j]], inst.points[t.order[(j + 1) % n]]};
            if (segments_properly_intersect(e, f)) return false;
        }
    }
    return true;
}

Tour uncross(const TspInstance& inst, Tour t) {
    const int n = static_cast<int>(t.order.size());
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i + 1 < n && !changed; ++i) {
            const Segment e{inst.points[t.order[i]], inst.points[t.order[i + 1]]};
            for (int j = i + 1; j < n && !changed; ++j) {
                const Segment f{inst.points[t.order[j]], inst.points[t.order[(j + 1) % n]]};
                if (segments_properly_intersect(e, f)) {
                    // a 2-exchange on crossing edges strictly shortens the tour
                    t = apply_two_opt(t, i, j);
                    changed = true;
                }
            }
        }
    }
    return t;
}

std::optional<Tour> kopt_improving_neighbor(const TspInstance& inst, const Tour& t, int p,
                                            double threshold, const TspNeighborLists* cached) {
    if (p < 2 || p > 4) throw std::invalid_argument("kopt_improving_neighbor: p must be 2..4");
    validate_tour(inst, t);
    return scan_moves(inst, t, p, threshold, /*require_noncrossing=*/true, cached);
}

bool verify_local_optimality(const TspInstance& inst, const Tour& t, int p) {
    if (p < 2 || p > 3) throw std::invalid_argument("verify_local_optimality: p must be 2 or 3");
    validate_tour(inst, t);
    const double len = tour_length(inst, t);
    const double threshold = len - kImproveTol * std::max(1.0, len);
    // the verifier never prunes; it is the exhaustive ground truth
    return !scan_moves(inst, t, p, threshold, /*require_noncrossing=*/true, nullptr,
                       /*allow_pruning=*/false)
                .has_value();
}

Tour karp_partition_tour(const TspInstance& inst, double epsilon) {
    if (!(epsilon > 0.0) || epsilon >= 1.0)
        throw std::invalid_argument("karp_partition_tour: epsilon must be in (0,1)");
    const int threshold =
        std::max(2, static_cast<int>(std::ceil(1.0 / (epsilon * epsilon))));
    if (threshold > 18)
        throw std::invalid_argument(
            "karp_partition_tour: box size exceeds 18; use a larger epsilon so the stop "
            "threshold shrinks");
    validate_tour(inst, nearest_neighbor_tour(inst));  // n >= 3 and points sane

    const auto boxes = karp_dissection(inst.points, threshold);

    // boustrophedon over box centers: y-sorted bands, alternating x direction
    std::vector<int> idx(boxes.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        const Point ca = boxes[a].rect.center(), cb = boxes[b].rect.center();
        return ca.y < cb.y || (ca.y == cb.y && ca.x < cb.x);
    });
    const int rows = std::max(1, static_cast<int>(std::llround(std::sqrt(static_cast<double>(boxes.size())))));
    const int per_row = static_cast<int>((boxes.size() + rows - 1) / rows);
    std::vector<int> ordered;
    for (int r = 0; r * per_row < static_cast<int>(idx.size()); ++r) {
        auto first = idx.begin() + r * per_row;
        auto last = idx.begin() + std::min<std::size_t>((r + 1) * per_row, idx.size());
        std::vector<int> row(first, last);
        std::sort(row.begin(), row.end(), [&](int a, int b) {
            return boxes[a].rect.center().x < boxes[b].rect.center().x;
        });
        if (r % 2 == 1) std::reverse(row.begin(), row.end());
        ordered.insert(ordered.end(), row.begin(), row.end());
    }

    // solve each box exactly and stitch
    Tour stitched;
    Point prev_end{0.0, 0.0};
    bool have_prev = false;
    for (std::size_t bi = 0; bi < ordered.size(); ++bi) {
        const auto& box = boxes[ordered[bi]];
        const auto& members = box.points;
        std::vector<int> cycle;
        if (members.size() >= 3) {
            std::vector<Point> local;
            local.reserve(members.size());
            for (int m : members) local.push_back(inst.points[m]);
            const auto hk = held_karp_tsp(local);
            for (int v : hk.tour) cycle.push_back(members[v]);
        } else {
            cycle = members;
        }
        if (have_prev && cycle.size() > 1) {
            // open the cycle at the vertex nearest the running endpoint
            int start = 0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < cycle.size(); ++k) {
                const double d = dist(prev_end, inst.points[cycle[k]]);
                if (d < best) {
                    best = d;
                    start = static_cast<int>(k);
                }
            }
            std::rotate(cycle.begin(), cycle.begin() + start, cycle.end());
            // walk toward the next box when reversing helps
            if (bi + 1 < ordered.size() && cycle.size() > 2) {
                const Point target = boxes[ordered[bi + 1]].rect.center();
                const double fwd = dist(inst.points[cycle.back()], target);
                const double rev = dist(inst.points[cycle[1]], target);
                if (rev < fwd) std::reverse(cycle.begin() + 1, cycle.end());
            }
        }
        stitched.order.insert(stitched.order.end(), cycle.begin(), cycle.end());
        if (!stitched.order.empty()) {
            prev_end = inst.points[stitched.order.back()];
            have_prev = true;
        }
    }

    return canonical(uncross(inst, std::move(stitched)));
}

LowerBoundInstance lower_bound_instance(int k) {
    if (k < 2) throw std::invalid_argument("lower_bound_instance: k must be at least 2");
    // Comb grid: N columns ("teeth") of M rows. Vertical spacing sits just
    // under twice the horizontal spacing, the widest gap at which the
    // column-serpentine tour stays 2-optimal.
    const int m_rows = (k + 1) % 2 == 0 ? k + 1 : k + 2;
    const int n_cols = 20 * k;
    const double a = 1.0;
    const double b = 1.9;
    const double scale = 1.0 / (a * (n_cols - 1));

    LowerBoundInstance out;
    auto id = [&](int c, int r) { return c * m_rows + r; };
    out.instance.points.resize(static_cast<std::size_t>(n_cols) * m_rows);
    for (int c = 0; c < n_cols; ++c)
        for (int r = 0; r < m_rows; ++r)
            out.instance.points[id(c, r)] = {c * a * scale, r * b * scale};

    // bad: serpentine down/up the teeth over rows 0..M-2, then walk the top
    // row back and close with one short vertical edge
    for (int c = 0; c < n_cols; ++c) {
        if (c % 2 == 0)
            for (int r = m_rows - 2; r >= 0; --r) out.bad.order.push_back(id(c, r));
        else
            for (int r = 0; r <= m_rows - 2; ++r) out.bad.order.push_back(id(c, r));
    }
    for (int c = n_cols - 1; c >= 0; --c) out.bad.order.push_back(id(c, m_rows - 1));

    // good: row serpentine; M is even, so the closing edge runs down the
    // first column
    for (int r = 0; r < m_rows; ++r) {
        if (r % 2 == 0)
            for (int c = 0; c < n_cols; ++c) out.good.order.push_back(id(c, r));
        else
            for (int c = n_cols - 1; c >= 0; --c) out.good.order.push_back(id(c, r));
    }
    return out;
}

}  // namespace geols
