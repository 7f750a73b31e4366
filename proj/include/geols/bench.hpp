#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geols/dissection.hpp"
#include "geols/engine.hpp"
#include "geols/geom.hpp"

namespace geols {

enum class ProblemKind { Tsp, Steiner, Fl, KMedian };
enum class GeneratorKind { Uniform, Poisson, File, Comb };

std::string to_string(ProblemKind p);
ProblemKind problem_from_string(const std::string& s);

struct InstanceSpec {
    GeneratorKind generator = GeneratorKind::Uniform;
    int n = 10;  // point count, Poisson intensity, or comb parameter k
    std::uint64_t seed = 0;
    std::string path;  // file mode
};

struct ExperimentConfig {
    ProblemKind problem = ProblemKind::Tsp;
    InstanceSpec instance;
    double epsilon = 1.0 / 3.0;
    int swap_budget = 2;
    double f = 1.0;  // facility location
    int k = 2;       // k-median
    std::vector<std::uint64_t> seeds;
    bool oracle = false;
    std::string out;  // output path prefix; empty writes nothing
};

struct ResultRecord {
    std::string problem;
    int n = 0;
    std::uint64_t seed = 0;
    double cost = 0.0;
    std::optional<double> oracle_cost;
    std::optional<double> ratio;
    long iterations = 0;
    double wall_ms = 0.0;
};

struct BHHEstimate {
    std::vector<int> n_values;
    std::vector<std::vector<double>> samples;  // tour length / sqrt(n), per n
    std::vector<double> mean;
    std::vector<double> stddev;
};

/// n i.i.d. uniform points in the unit square, deterministic per seed.
std::vector<Point> gen_uniform(int n, std::uint64_t seed);

/// Poisson point process: the count is Poisson(intensity), locations uniform.
std::vector<Point> gen_poisson(int intensity, std::uint64_t seed);

/// Swap budget from epsilon: ceil(1/eps^c) with the per-problem exponent
/// (2 for TSP and Steiner, 3 for facility location, 9 for k-median), capped.
int budget_from_epsilon(ProblemKind problem, double epsilon, int cap = 4);

/// Runs local search per seed, optionally scores against the exact oracle,
/// and persists CSV plus JSON when the config names an output prefix.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& config);

/// Local-search tour costs normalized by sqrt(n) across instance sizes; the
/// per-n means trend toward the BHH constant from above.
BHHEstimate estimate_beta(const std::vector<int>& n_values, int trials_per_n, double epsilon,
                          std::uint64_t seed);

// -- file formats -----------------------------------------------------------

/// Point list: one "x y" pair per line, '#' comments ignored.
std::vector<Point> read_points(const std::string& path);
void write_points(const std::string& path, std::span<const Point> points);

void write_csv(const std::string& path, std::span<const ResultRecord> records);
std::vector<ResultRecord> read_csv(const std::string& path);
void write_records_json(const std::string& path, std::span<const ResultRecord> records);
std::vector<ResultRecord> read_records_json(const std::string& path);

ExperimentConfig load_config(const std::string& path);

std::string tour_to_json(std::span<const int> order);
std::string points_to_json(std::span<const Point> pts);
std::string open_set_to_json(std::span<const int> open);
std::string dissection_to_json(const DissectionTree& tree, std::span<const Region> regions,
                               const PortalSet* portals);

}  // namespace geols
