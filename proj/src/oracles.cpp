#include "geols/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "geols/steiner.hpp"

namespace geols {

namespace {

std::vector<std::vector<double>> distance_matrix(std::span<const Point> a,
                                                 std::span<const Point> b) {
    std::vector<std::vector<double>> d(a.size(), std::vector<double>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) d[i][j] = dist(a[i], b[j]);
    return d;
}

}  // namespace

OracleResult held_karp_tsp(std::span<const Point> points) {
    const int n = static_cast<int>(points.size());
    if (n < 3) throw std::invalid_argument("held_karp_tsp: need at least 3 points");
    if (n > 18) throw std::invalid_argument("held_karp_tsp: capacity is 18 points");

    const auto d = distance_matrix(points, points);
    const int m = n - 1;  // nodes 1..n-1; tours anchored at 0
    const std::size_t masks = std::size_t{1} << m;
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(masks * m, kInf);
    std::vector<std::int8_t> parent(masks * m, -1);

    for (int j = 0; j < m; ++j) dp[(std::size_t{1} << j) * m + j] = d[0][j + 1];

    long explored = 0;
    for (std::size_t mask = 1; mask < masks; ++mask) {
        for (int j = 0; j < m; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            const double cur = dp[mask * m + j];
            if (cur == kInf) continue;
            ++explored;
            const std::size_t rest = mask;
            for (int k = 0; k < m; ++k) {
                if (rest & (std::size_t{1} << k)) continue;
                const std::size_t nmask = mask | (std::size_t{1} << k);
                const double cand = cur + d[j + 1][k + 1];
                if (cand < dp[nmask * m + k]) {
                    dp[nmask * m + k] = cand;
                    parent[nmask * m + k] = static_cast<std::int8_t>(j);
                }
            }
        }
    }

    const std::size_t full = masks - 1;
    double best = kInf;
    int best_end = -1;
    for (int j = 0; j < m; ++j) {
        const double cand = dp[full * m + j] + d[j + 1][0];
        if (cand < best) {
            best = cand;
            best_end = j;
        }
    }

    OracleResult res;
    res.optimal_cost = best;
    res.nodes_explored = explored;
    std::vector<int> rev;
    std::size_t mask = full;
    int j = best_end;
    while (j >= 0) {
        rev.push_back(j + 1);
        const int pj = parent[mask * m + j];
        mask &= ~(std::size_t{1} << j);
        j = pj;
    }
    res.tour.push_back(0);
    for (auto it = rev.rbegin(); it != rev.rend(); ++it) res.tour.push_back(*it);
    return res;
}

OracleResult brute_force_fl(std::span<const Point> clients,
                            std::span<const Point> candidate_sites, double f) {
    const int m = static_cast<int>(candidate_sites.size());
    if (m == 0) throw std::invalid_argument("brute_force_fl: no candidate sites");
    if (m > 18) throw std::invalid_argument("brute_force_fl: capacity is 18 sites");
    if (f < 0.0) throw std::invalid_argument("brute_force_fl: negative facility cost");

    const auto d = distance_matrix(clients, candidate_sites);
    OracleResult res;
    res.optimal_cost = std::numeric_limits<double>::infinity();
    const std::uint32_t limit = std::uint32_t{1} << m;
    for (std::uint32_t subset = 1; subset < limit; ++subset) {
        double cost = f * static_cast<double>(std::popcount(subset));
        for (std::size_t c = 0; c < clients.size(); ++c) {
            double nearest = std::numeric_limits<double>::infinity();
            for (int s = 0; s < m; ++s)
                if (subset & (std::uint32_t{1} << s)) nearest = std::min(nearest, d[c][s]);
            cost += nearest;
        }
        ++res.nodes_explored;
        if (cost < res.optimal_cost) {
            res.optimal_cost = cost;
            res.open.clear();
            for (int s = 0; s < m; ++s)
                if (subset & (std::uint32_t{1} << s)) res.open.push_back(s);
        }
    }
    return res;
}

OracleResult brute_force_kmedian(std::span<const Point> clients,
                                 std::span<const Point> candidate_sites, int k) {
    const int m = static_cast<int>(candidate_sites.size());
    if (k < 1 || k > m) throw std::invalid_argument("brute_force_kmedian: invalid k");

    double combos = 1.0;
    for (int i = 0; i < k; ++i) combos = combos * (m - i) / (i + 1);
    if (combos > 1e6) throw std::invalid_argument("brute_force_kmedian: too many subsets");

    const auto d = distance_matrix(clients, candidate_sites);
    OracleResult res;
    res.optimal_cost = std::numeric_limits<double>::infinity();

    std::vector<int> pick(k);
    for (int i = 0; i < k; ++i) pick[i] = i;
    while (true) {
        double cost = 0.0;
        for (std::size_t c = 0; c < clients.size(); ++c) {
            double nearest = std::numeric_limits<double>::infinity();
            for (int s : pick) nearest = std::min(nearest, d[c][s]);
            cost += nearest;
        }
        ++res.nodes_explored;
        if (cost < res.optimal_cost) {
            res.optimal_cost = cost;
            res.open = pick;
        }
        // next k-combination in lexicographic order
        int i = k - 1;
        while (i >= 0 && pick[i] == m - k + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    return res;
}

OracleResult small_steiner_opt(std::span<const Point> terminals) {
    const int n = static_cast<int>(terminals.size());
    if (n < 2) throw std::invalid_argument("small_steiner_opt: need at least 2 terminals");
    if (n > 4) throw std::invalid_argument("small_steiner_opt: capacity is 4 terminals");

    OracleResult res;
    if (n == 2) {
        res.optimal_cost = dist(terminals[0], terminals[1]);
        res.nodes_explored = 1;
        return res;
    }

    // Candidate junction sets, each evaluated as MST(terminals + junctions).
    std::vector<std::vector<Point>> candidates;
    candidates.push_back({});  // plain MST

    if (n == 3) {
        candidates.push_back({fermat_point(terminals[0], terminals[1], terminals[2], 1e-10)});
    } else {
        // single junction per terminal triple
        for (int skip = 0; skip < 4; ++skip) {
            std::vector<Point> triple;
            for (int i = 0; i < 4; ++i)
                if (i != skip) triple.push_back(terminals[i]);
            candidates.push_back({fermat_point(triple[0], triple[1], triple[2], 1e-10)});
        }
        // full topologies: two junctions, one per terminal pair, joined by an
        // edge; positions settled by alternating geometric medians
        const int pairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
        for (const auto& pr : pairings) {
            const Point &a = terminals[pr[0]], &b = terminals[pr[1]];
            const Point &c = terminals[pr[2]], &e = terminals[pr[3]];
            Point s1{(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
            Point s2{(c.x + e.x) / 2.0, (c.y + e.y) / 2.0};
            for (int it = 0; it < 2000; ++it) {
                const Point anchors1[3] = {a, b, s2};
                const Point n1 = geometric_median(anchors1, s1, 200, 1e-12);
                const Point anchors2[3] = {c, e, n1};
                const Point n2 = geometric_median(anchors2, s2, 200, 1e-12);
                const double moved = dist(n1, s1) + dist(n2, s2);
                s1 = n1;
                s2 = n2;
                if (moved < 1e-10) break;
            }
            candidates.push_back({s1, s2});
        }
    }

    res.optimal_cost = std::numeric_limits<double>::infinity();
    for (const auto& junctions : candidates) {
        std::vector<Point> all(terminals.begin(), terminals.end());
        all.insert(all.end(), junctions.begin(), junctions.end());
        const double cost = mst_length(all);
        ++res.nodes_explored;
        if (cost < res.optimal_cost) {
            res.optimal_cost = cost;
            res.steiner_points = junctions;
        }
    }
    return res;
}

}  // namespace geols
