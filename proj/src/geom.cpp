#include "geols/geom.hpp"

#include <algorithm>
#include <limits>

namespace geols {

double dist(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

double mst_length(std::span<const Point> points) {
    const std::size_t n = points.size();
    if (n < 2) return 0.0;

    // Prim over the dense distance matrix; instances here stay small.
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<bool> in_tree(n, false);
    best[0] = 0.0;
    double total = 0.0;
    for (std::size_t added = 0; added < n; ++added) {
        std::size_t next = n;
        double next_cost = std::numeric_limits<double>::infinity();
        for (std::size_t v = 0; v < n; ++v) {
            if (!in_tree[v] && best[v] < next_cost) {
                next = v;
                next_cost = best[v];
            }
        }
        in_tree[next] = true;
        total += next_cost;
        for (std::size_t v = 0; v < n; ++v) {
            if (!in_tree[v]) {
                best[v] = std::min(best[v], dist(points[next], points[v]));
            }
        }
    }
    return total;
}

namespace {

// Signed orientation area with a fixed relative tolerance; returns -1/0/+1.
int orientation(const Point& a, const Point& b, const Point& c) {
    const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    const double scale = std::abs(b.x - a.x) + std::abs(b.y - a.y) +
                         std::abs(c.x - a.x) + std::abs(c.y - a.y);
    const double tol = 1e-12 * std::max(1.0, scale * scale);
    if (cross > tol) return 1;
    if (cross < -tol) return -1;
    return 0;
}

}  // namespace

bool segments_properly_intersect(const Segment& s1, const Segment& s2) {
    const int o1 = orientation(s1.a, s1.b, s2.a);
    const int o2 = orientation(s1.a, s1.b, s2.b);
    const int o3 = orientation(s2.a, s2.b, s1.a);
    const int o4 = orientation(s2.a, s2.b, s1.b);
    // Proper crossing requires each segment's endpoints strictly on opposite
    // sides of the other; any collinearity or touching fails the test.
    return o1 * o2 < 0 && o3 * o4 < 0;
}

double aspect_ratio(const Rect& r) {
    const double s = r.short_side();
    const double l = r.long_side();
    if (s <= 0.0) throw std::invalid_argument("aspect_ratio: degenerate rectangle");
    return l / s;
}

}  // namespace geols
