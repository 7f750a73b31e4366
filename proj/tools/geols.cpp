#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geols/bench.hpp"
#include "geols/clustering.hpp"
#include "geols/engine.hpp"
#include "geols/oracles.hpp"
#include "geols/rng.hpp"
#include "geols/steiner.hpp"
#include "geols/tsp.hpp"

using namespace geols;

namespace {

std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
    std::vector<std::uint64_t> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(std::stoull(item));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    return out;
}

// clustering instance sidecar: "<points>.json" carrying f, k, epsilon
void apply_sidecar(const std::string& in_path, double& f, int& k, double& eps) {
    if (in_path.empty()) return;
    std::ifstream in(in_path + ".json");
    if (!in) return;
    nlohmann::json j;
    in >> j;
    if (j.contains("f")) f = j["f"].get<double>();
    if (j.contains("k")) k = j["k"].get<int>();
    if (j.contains("epsilon")) eps = j["epsilon"].get<double>();
}

struct SolveOptions {
    std::string problem = "tsp";
    int n = 12;
    std::uint64_t seed = 0;
    std::string in_path;
    std::string out_path;
    double epsilon = 1.0 / 3.0;
    int swap_budget = 2;
    bool from_epsilon = false;
    int budget_cap = 4;
    double f = 1.0;
    int k = 2;
    int grid = 0;
};

void emit_solution(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) return;
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << payload << "\n";
}

int run_solve(SolveOptions opt) {
    const ProblemKind kind = problem_from_string(opt.problem);
    const std::vector<Point> pts =
        opt.in_path.empty() ? gen_uniform(opt.n, opt.seed) : read_points(opt.in_path);
    apply_sidecar(opt.in_path, opt.f, opt.k, opt.epsilon);
    const int budget = opt.from_epsilon ? budget_from_epsilon(kind, opt.epsilon, opt.budget_cap)
                                        : opt.swap_budget;
    SearchConfig cfg;
    cfg.epsilon = opt.epsilon;
    cfg.swap_budget = budget;
    cfg.seed = opt.seed;

    switch (kind) {
        case ProblemKind::Tsp: {
            TspInstance inst{pts};
            TspProblem prob{&inst, budget};
            const auto res =
                run_local_search(prob, uncross(inst, nearest_neighbor_tour(inst)), cfg);
            std::cout << "cost " << tour_length(inst, res.solution) << "\n"
                      << "iterations " << res.trace.iterations << "\n"
                      << "tour " << tour_to_json(canonical(res.solution).order) << "\n";
            emit_solution(opt.out_path, tour_to_json(canonical(res.solution).order));
            break;
        }
        case ProblemKind::Steiner: {
            SteinerInstance inst{pts};
            SteinerProblem prob{&inst, budget};
            const auto res = run_local_search(prob, SteinerSolution{}, cfg);
            std::cout << "cost " << steiner_cost(inst, res.solution) << "\n"
                      << "iterations " << res.trace.iterations << "\n"
                      << "steiner_points " << points_to_json(res.solution.steiner_points) << "\n";
            emit_solution(opt.out_path, points_to_json(res.solution.steiner_points));
            break;
        }
        case ProblemKind::Fl: {
            ClusteringInstance inst;
            inst.clients = pts;
            inst.candidate_sites = pts;
            inst.facility_cost = opt.f;
            if (opt.grid > 0) add_grid_sites(inst, opt.grid);
            FlProblem prob{&inst, budget};
            const auto res = run_local_search(prob, initial_fl_solution(inst), cfg);
            std::cout << "cost " << fl_cost(inst, res.solution) << "\n"
                      << "iterations " << res.trace.iterations << "\n"
                      << "open " << open_set_to_json(res.solution.open) << "\n";
            emit_solution(opt.out_path, open_set_to_json(res.solution.open));
            break;
        }
        default: {
            ClusteringInstance inst;
            inst.clients = pts;
            inst.candidate_sites = pts;
            inst.k = opt.k;
            inst.epsilon = opt.epsilon;
            if (opt.grid > 0) add_grid_sites(inst, opt.grid);
            KMedianProblem prob{&inst, budget};
            const auto res =
                run_local_search(prob, initial_kmedian_solution(inst, opt.seed), cfg);
            std::cout << "cost " << kmedian_cost(inst, res.solution) << "\n"
                      << "iterations " << res.trace.iterations << "\n"
                      << "open " << open_set_to_json(res.solution.open) << "\n";
            emit_solution(opt.out_path, open_set_to_json(res.solution.open));
            break;
        }
    }
    return 0;
}

int run_oracle(const std::string& problem, int n, std::uint64_t seed, const std::string& in_path,
               double f, int k) {
    const ProblemKind kind = problem_from_string(problem);
    const std::vector<Point> pts = in_path.empty() ? gen_uniform(n, seed) : read_points(in_path);
    double eps_unused = 0.0;
    apply_sidecar(in_path, f, k, eps_unused);
    OracleResult res;
    switch (kind) {
        case ProblemKind::Tsp:
            res = held_karp_tsp(pts);
            std::cout << "cost " << res.optimal_cost << "\n"
                      << "tour " << tour_to_json(res.tour) << "\n";
            break;
        case ProblemKind::Steiner:
            res = small_steiner_opt(pts);
            std::cout << "cost " << res.optimal_cost << "\n"
                      << "steiner_points " << points_to_json(res.steiner_points) << "\n";
            break;
        case ProblemKind::Fl:
            res = brute_force_fl(pts, pts, f);
            std::cout << "cost " << res.optimal_cost << "\n"
                      << "open " << open_set_to_json(res.open) << "\n";
            break;
        default:
            res = brute_force_kmedian(pts, pts, k);
            std::cout << "cost " << res.optimal_cost << "\n"
                      << "open " << open_set_to_json(res.open) << "\n";
            break;
    }
    std::cout << "nodes_explored " << res.nodes_explored << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"local-search solvers and dissection experiments for planar instances"};
    app.require_subcommand(1);

    // ---- solve ----
    SolveOptions solve;
    auto* cmd_solve = app.add_subcommand("solve", "run one local search");
    cmd_solve->add_option("--problem", solve.problem, "tsp|steiner|fl|kmedian");
    cmd_solve->add_option("--n", solve.n, "instance size");
    cmd_solve->add_option("--seed", solve.seed, "instance seed");
    cmd_solve->add_option("--in", solve.in_path, "point file instead of a generator");
    cmd_solve->add_option("--epsilon", solve.epsilon, "epsilon parameter");
    cmd_solve->add_option("--swap-budget", solve.swap_budget, "neighborhood budget p");
    cmd_solve->add_flag("--from-epsilon", solve.from_epsilon,
                        "derive the budget from epsilon (capped)");
    cmd_solve->add_option("--budget-cap", solve.budget_cap, "cap for --from-epsilon");
    cmd_solve->add_option("--f", solve.f, "facility opening cost");
    cmd_solve->add_option("--k", solve.k, "median count");
    cmd_solve->add_option("--grid", solve.grid, "extra g x g candidate grid");
    cmd_solve->add_option("--out", solve.out_path, "write the solution JSON here");

    // ---- bench ----
    std::string bench_config, bench_problem = "tsp", bench_seeds, bench_out, beta_ns;
    int bench_n = 12, bench_trials = 0, bench_k = 2, bench_budget = 2, bench_cap = 4;
    std::uint64_t bench_seed_base = 0;
    double bench_eps = 1.0 / 3.0, bench_f = 1.0;
    bool bench_oracle = false, bench_from_eps = false, bench_beta = false;
    auto* cmd_bench = app.add_subcommand("bench", "seeded experiment batches");
    cmd_bench->add_option("--config", bench_config, "JSON experiment config");
    cmd_bench->add_option("--problem", bench_problem, "tsp|steiner|fl|kmedian");
    cmd_bench->add_option("--n", bench_n, "instance size");
    cmd_bench->add_option("--seeds", bench_seeds, "comma-separated seed list");
    cmd_bench->add_option("--trials", bench_trials, "number of seeds 0..trials-1");
    cmd_bench->add_option("--seed", bench_seed_base, "base seed for --trials");
    cmd_bench->add_option("--epsilon", bench_eps, "epsilon parameter");
    cmd_bench->add_option("--swap-budget", bench_budget, "neighborhood budget p");
    cmd_bench->add_flag("--from-epsilon", bench_from_eps, "derive the budget from epsilon");
    cmd_bench->add_option("--budget-cap", bench_cap, "cap for --from-epsilon");
    cmd_bench->add_option("--f", bench_f, "facility opening cost");
    cmd_bench->add_option("--k", bench_k, "median count");
    cmd_bench->add_flag("--oracle", bench_oracle, "score each run against the exact oracle");
    cmd_bench->add_option("--out", bench_out, "output prefix for csv/json");
    cmd_bench->add_flag("--beta", bench_beta, "tour-length scaling experiment");
    cmd_bench->add_option("--n-values", beta_ns, "sizes for --beta, comma separated");

    // ---- dissect ----
    std::string dissect_mode = "adaptive", dissect_out;
    int dis_nl = 40, dis_ng = 40, dis_n = 256, dis_threshold = 16, dis_portals = 0,
        dis_clients = 200, dis_trials = 20;
    double dis_eps = 1.0 / 3.0, dis_d = 0.01;
    std::uint64_t dis_seed = 0;
    auto* cmd_dissect = app.add_subcommand("dissect", "dissection machinery and experiments");
    cmd_dissect->add_option("--mode", dissect_mode, "adaptive|karp|structure|cutprob");
    cmd_dissect->add_option("--nl", dis_nl, "local facility count");
    cmd_dissect->add_option("--ng", dis_ng, "global facility count");
    cmd_dissect->add_option("--n", dis_n, "point count (karp mode)");
    cmd_dissect->add_option("--threshold", dis_threshold, "stop threshold (karp mode)");
    cmd_dissect->add_option("--epsilon", dis_eps, "epsilon parameter");
    cmd_dissect->add_option("--seed", dis_seed, "seed");
    cmd_dissect->add_option("--portals", dis_portals, "portals per boundary (0: ceil(1/eps^2))");
    cmd_dissect->add_option("--clients", dis_clients, "client count (structure mode)");
    cmd_dissect->add_option("--trials", dis_trials, "trial count (structure/cutprob)");
    cmd_dissect->add_option("--d", dis_d, "probe edge length (cutprob mode)");
    cmd_dissect->add_option("--out", dissect_out, "output file");

    // ---- oracle ----
    std::string oracle_problem = "tsp", oracle_in;
    int oracle_n = 10, oracle_k = 2;
    double oracle_f = 1.0;
    std::uint64_t oracle_seed = 0;
    auto* cmd_oracle = app.add_subcommand("oracle", "exact desk-scale solvers");
    cmd_oracle->add_option("--problem", oracle_problem, "tsp|steiner|fl|kmedian");
    cmd_oracle->add_option("--n", oracle_n, "instance size");
    cmd_oracle->add_option("--seed", oracle_seed, "instance seed");
    cmd_oracle->add_option("--in", oracle_in, "point file instead of a generator");
    cmd_oracle->add_option("--f", oracle_f, "facility opening cost");
    cmd_oracle->add_option("--k", oracle_k, "median count");

    // ---- lowerbound ----
    int lb_k = 10;
    bool lb_verify = false;
    std::string lb_out;
    auto* cmd_lb = app.add_subcommand("lowerbound", "worst-case comb instance");
    cmd_lb->add_option("--k", lb_k, "tooth parameter");
    cmd_lb->add_flag("--verify", lb_verify, "run the exhaustive 2-exchange check");
    cmd_lb->add_option("--out", lb_out, "prefix for instance/tah tour files");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_solve) return run_solve(solve);

        if (*cmd_bench) {
            if (bench_beta) {
                std::vector<int> ns =
                    beta_ns.empty() ? std::vector<int>{100, 400, 1600} : parse_int_list(beta_ns);
                const int trials = bench_trials > 0 ? bench_trials : 20;
                const auto est = estimate_beta(ns, trials, bench_eps, bench_seed_base);
                std::cout << "n,mean,stddev\n";
                for (std::size_t i = 0; i < est.n_values.size(); ++i)
                    std::cout << est.n_values[i] << "," << est.mean[i] << "," << est.stddev[i]
                              << "\n";
                return 0;
            }
            ExperimentConfig cfg;
            if (!bench_config.empty()) {
                cfg = load_config(bench_config);
            } else {
                cfg.problem = problem_from_string(bench_problem);
                cfg.instance.n = bench_n;
                cfg.epsilon = bench_eps;
                cfg.swap_budget = bench_from_eps
                                      ? budget_from_epsilon(cfg.problem, bench_eps, bench_cap)
                                      : bench_budget;
                cfg.f = bench_f;
                cfg.k = bench_k;
                cfg.oracle = bench_oracle;
                cfg.out = bench_out;
                if (!bench_seeds.empty()) cfg.seeds = parse_seed_list(bench_seeds);
                for (int t = 0; t < bench_trials; ++t) cfg.seeds.push_back(bench_seed_base + t);
            }
            const auto records = run_experiment(cfg);
            double mean_ratio = 0.0;
            int with_oracle = 0;
            for (const auto& r : records) {
                if (r.ratio) {
                    mean_ratio += *r.ratio;
                    ++with_oracle;
                }
            }
            std::cout << "records " << records.size() << "\n";
            if (with_oracle > 0) std::cout << "mean_ratio " << mean_ratio / with_oracle << "\n";
            return 0;
        }

        if (*cmd_dissect) {
            if (dissect_mode == "karp") {
                const auto pts = gen_uniform(dis_n, dis_seed);
                const auto boxes = karp_dissection(pts, dis_threshold);
                std::cout << "boxes " << boxes.size() << "\n"
                          << "perimeter_sum " << perimeter_sum(boxes) << "\n";
                return 0;
            }
            if (dissect_mode == "structure") {
                const auto clients = gen_uniform(dis_clients, Rng::mix(dis_seed, 1));
                const auto l = gen_uniform(dis_nl, Rng::mix(dis_seed, 2));
                const auto g = gen_uniform(dis_ng, Rng::mix(dis_seed, 3));
                const auto stats =
                    verify_structure_bound(clients, l, g, dis_eps, dis_trials, dis_seed);
                std::cout << "trial,cost_E,cost_E0,ratio\n";
                for (int t = 0; t < stats.trials; ++t)
                    std::cout << t << "," << stats.cost_e[t] << "," << stats.cost_e0[t] << ","
                              << stats.ratios[t] << "\n";
                std::cout << "violations " << stats.violations << "\n"
                          << "mean_ratio " << stats.mean_ratio << "\n"
                          << "max_ratio " << stats.max_ratio << "\n";
                return 0;
            }
            if (dissect_mode == "cutprob") {
                const auto buckets = cut_probability_experiment(dis_d, dis_nl, dis_ng, dis_eps,
                                                                dis_trials, dis_seed);
                std::cout << "s_min,s_max,separations,frequency,bound\n";
                for (const auto& b : buckets)
                    std::cout << b.s_min << "," << b.s_max << "," << b.separations << ","
                              << b.frequency << "," << b.bound << "\n";
                return 0;
            }
            const auto l = gen_uniform(dis_nl, Rng::mix(dis_seed, 2));
            const auto g = gen_uniform(dis_ng, Rng::mix(dis_seed, 3));
            auto tree = adaptive_dissection(l, g, dis_eps, dis_seed);
            const auto regions = compute_regions(tree, dis_eps);
            const int p = dis_portals > 0
                              ? dis_portals
                              : static_cast<int>(std::ceil(1.0 / (dis_eps * dis_eps)));
            const auto portals = place_portals(regions, p);
            const std::string payload = dissection_to_json(tree, regions, &portals);
            if (dissect_out.empty()) {
                std::cout << payload << "\n";
            } else {
                std::ofstream out(dissect_out);
                if (!out) throw std::runtime_error("cannot write " + dissect_out);
                out << payload << "\n";
                std::cout << "regions " << regions.size() << "\n"
                          << "max_aspect_ratio " << tree.max_aspect_ratio << "\n";
            }
            return 0;
        }

        if (*cmd_oracle)
            return run_oracle(oracle_problem, oracle_n, oracle_seed, oracle_in, oracle_f,
                              oracle_k);

        if (*cmd_lb) {
            const auto lb = lower_bound_instance(lb_k);
            const double bad = tour_length(lb.instance, lb.bad);
            const double good = tour_length(lb.instance, lb.good);
            std::cout << "n " << lb.instance.points.size() << "\n"
                      << "bad " << bad << "\n"
                      << "good " << good << "\n"
                      << "ratio " << bad / good << "\n";
            if (lb_verify)
                std::cout << "two_opt_optimal "
                          << (verify_local_optimality(lb.instance, lb.bad, 2) ? "yes" : "no")
                          << "\n";
            if (!lb_out.empty()) {
                write_points(lb_out + "_points.txt", lb.instance.points);
                std::ofstream bad_out(lb_out + "_bad.json"), good_out(lb_out + "_good.json");
                bad_out << tour_to_json(lb.bad.order) << "\n";
                good_out << tour_to_json(lb.good.order) << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
