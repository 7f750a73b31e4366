#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace geols {

/// Planar point, coordinates on unit-square scale.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point& a, const Point& b) = default;
};

/// Axis-aligned rectangle, xmin <= xmax and ymin <= ymax.
struct Rect {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double long_side() const { return std::max(width(), height()); }
    double short_side() const { return std::min(width(), height()); }
    double perimeter() const { return 2.0 * (width() + height()); }
    Point center() const { return {(xmin + xmax) / 2.0, (ymin + ymax) / 2.0}; }

    bool contains(const Point& p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }

    /// Clamping intersection: always yields a valid (possibly zero-area)
    /// rectangle inside *this.
    Rect clip(const Rect& r) const {
        auto clampd = [](double v, double lo, double hi) { return std::min(std::max(v, lo), hi); };
        Rect out;
        out.xmin = clampd(r.xmin, xmin, xmax);
        out.xmax = clampd(r.xmax, xmin, xmax);
        out.ymin = clampd(r.ymin, ymin, ymax);
        out.ymax = clampd(r.ymax, ymin, ymax);
        return out;
    }

    static Rect bounding(std::span<const Point> pts) {
        if (pts.empty()) throw std::invalid_argument("bounding rect of empty point set");
        Rect r{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
        for (const Point& p : pts) {
            r.xmin = std::min(r.xmin, p.x);
            r.xmax = std::max(r.xmax, p.x);
            r.ymin = std::min(r.ymin, p.y);
            r.ymax = std::max(r.ymax, p.y);
        }
        return r;
    }

    friend bool operator==(const Rect& a, const Rect& b) = default;
};

/// Closed line segment between two points.
struct Segment {
    Point a;
    Point b;

    double length() const;
};

double dist(const Point& a, const Point& b);

inline double Segment::length() const { return dist(a, b); }

/// Total length of a Euclidean minimum spanning tree (Prim over the dense
/// distance matrix). Zero for fewer than two points.
double mst_length(std::span<const Point> points);

/// True iff the two open segments cross at a point interior to both.
/// Segments that merely share an endpoint, touch, or overlap collinearly do
/// not properly intersect.
bool segments_properly_intersect(const Segment& s1, const Segment& s2);

/// Ratio of longer to shorter side. Throws std::invalid_argument on a
/// degenerate (zero side) rectangle, which indicates a caller bug.
double aspect_ratio(const Rect& r);

}  // namespace geols
