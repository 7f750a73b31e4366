#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "geols/geom.hpp"
#include "geols/oracles.hpp"
#include "geols/rng.hpp"

using namespace geols;

namespace {

// (n-1)!/2 tour enumeration, the independent route against Held-Karp.
double exhaustive_tsp(const std::vector<Point>& pts) {
    const int n = static_cast<int>(pts.size());
    std::vector<int> perm(n - 1);
    std::iota(perm.begin(), perm.end(), 1);
    double best = std::numeric_limits<double>::infinity();
    do {
        double len = dist(pts[0], pts[perm[0]]);
        for (int i = 0; i + 1 < n - 1; ++i) len += dist(pts[perm[i]], pts[perm[i + 1]]);
        len += dist(pts[perm[n - 2]], pts[0]);
        best = std::min(best, len);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<Point> random_points(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Point> pts(n);
    for (auto& p : pts) p = {rng.next_double(), rng.next_double()};
    return pts;
}

}  // namespace

TEST_CASE("held_karp_tsp on known instances") {
    const std::vector<Point> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(held_karp_tsp(square).optimal_cost == doctest::Approx(4.0));

    std::vector<Point> pentagon;
    for (int i = 0; i < 5; ++i) {
        const double a = 2.0 * 3.14159265358979323846 * i / 5.0;
        pentagon.push_back({std::cos(a), std::sin(a)});
    }
    CHECK(held_karp_tsp(pentagon).optimal_cost ==
          doctest::Approx(10.0 * std::sin(3.14159265358979323846 / 5.0)));

    std::vector<Point> with_center = square;
    with_center.push_back({0.5, 0.5});
    CHECK(held_karp_tsp(with_center).optimal_cost == doctest::Approx(exhaustive_tsp(with_center)));
    CHECK(held_karp_tsp(with_center).optimal_cost ==
          doctest::Approx(4.0 + 2.0 * std::sqrt(0.5) - 1.0));
}

TEST_CASE("held_karp_tsp equals exhaustive enumeration up to n = 8") {
    for (int n = 4; n <= 8; ++n) {
        const auto pts = random_points(n, 100 + n);
        const auto hk = held_karp_tsp(pts);
        CHECK(hk.optimal_cost == doctest::Approx(exhaustive_tsp(pts)).epsilon(1e-9));
        // returned tour realizes the reported cost
        double len = 0.0;
        for (std::size_t i = 0; i < hk.tour.size(); ++i)
            len += dist(pts[hk.tour[i]], pts[hk.tour[(i + 1) % hk.tour.size()]]);
        CHECK(len == doctest::Approx(hk.optimal_cost));
    }
}

TEST_CASE("held_karp_tsp capacity errors") {
    CHECK_THROWS_AS(held_karp_tsp(random_points(2, 1)), std::invalid_argument);
    CHECK_THROWS_AS(held_karp_tsp(random_points(19, 1)), std::invalid_argument);
}

TEST_CASE("brute_force_fl examples") {
    const std::vector<Point> one{{0.25, 0.5}};
    const auto r1 = brute_force_fl(one, one, 1.0);
    CHECK(r1.optimal_cost == doctest::Approx(1.0));

    const std::vector<Point> two{{0, 0}, {1, 0}};
    const auto r2 = brute_force_fl(two, two, 0.4);
    CHECK(r2.optimal_cost == doctest::Approx(0.8));
    CHECK(r2.open.size() == 2);

    const auto r3 = brute_force_fl(two, two, 2.0);
    CHECK(r3.optimal_cost == doctest::Approx(3.0));
    CHECK(r3.open.size() == 1);
}

TEST_CASE("brute_force_kmedian examples") {
    const std::vector<Point> two{{0, 0}, {2, 0}};
    CHECK(brute_force_kmedian(two, two, 1).optimal_cost == doctest::Approx(2.0));
    CHECK(brute_force_kmedian(two, two, 2).optimal_cost == doctest::Approx(0.0));

    const auto pts = random_points(9, 42);
    const auto r = brute_force_kmedian(pts, pts, 2);
    // independent pair loop
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 9; ++i) {
        for (int j = i + 1; j < 9; ++j) {
            double total = 0.0;
            for (const Point& c : pts) total += std::min(dist(c, pts[i]), dist(c, pts[j]));
            best = std::min(best, total);
        }
    }
    CHECK(r.optimal_cost == doctest::Approx(best).epsilon(1e-12));
    CHECK(r.nodes_explored == 36);
}

TEST_CASE("small_steiner_opt equilateral triangle") {
    const std::vector<Point> tri{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2.0}};
    const auto r = small_steiner_opt(tri);
    CHECK(r.optimal_cost == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
    CHECK(r.steiner_points.size() == 1);
}

TEST_CASE("small_steiner_opt wide-angle triangle degenerates to the MST") {
    // angle at the middle vertex is 150 degrees
    const double ang = 150.0 * 3.14159265358979323846 / 180.0;
    const std::vector<Point> tri{{1, 0}, {0, 0}, {std::cos(ang), std::sin(ang)}};
    const auto r = small_steiner_opt(tri);
    CHECK(r.optimal_cost == doctest::Approx(mst_length(tri)).epsilon(1e-9));
}

TEST_CASE("small_steiner_opt unit square") {
    const std::vector<Point> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto r = small_steiner_opt(square);
    CHECK(r.optimal_cost == doctest::Approx(1.0 + std::sqrt(3.0)).epsilon(1e-6));
    CHECK(r.steiner_points.size() == 2);
}

TEST_CASE("small_steiner_opt brackets the terminal MST") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const int n = 2 + static_cast<int>(seed % 3);
        const auto pts = random_points(n, 900 + seed);
        const auto r = small_steiner_opt(pts);
        const double mst = mst_length(pts);
        CHECK(r.optimal_cost <= mst + 1e-9);
        CHECK(r.optimal_cost >= mst / 2.0 - 1e-9);
    }
}

TEST_CASE("oracle capacity errors") {
    const auto pts = random_points(5, 3);
    CHECK_THROWS_AS(small_steiner_opt(pts), std::invalid_argument);
    CHECK_THROWS_AS(brute_force_kmedian(pts, pts, 0), std::invalid_argument);
}
