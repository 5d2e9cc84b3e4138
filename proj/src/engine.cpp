#include "aco/engine.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <limits>

namespace aco {

namespace {

[[noreturn]] void bad_arg(const std::string& msg) {
    throw Error(ErrorKind::InvalidArgument, msg);
}

void deposit_edges(PheromoneMatrix& tau, const std::vector<int>& order, double delta) {
    const int n = static_cast<int>(order.size());
    if (n != tau.n)
        bad_arg("tour has " + std::to_string(n) + " cities, pheromone matrix has " +
                std::to_string(tau.n));
    for (int k = 0; k + 1 < n; ++k) tau.deposit(order[k], order[k + 1], delta);
    tau.deposit(order[n - 1], order[0], delta);
}

int pick_proportional(std::span<const double> weights, Rng& rng) {
    if (weights.empty())
        throw Error(ErrorKind::Precondition, "proportional selection needs at least one weight");
    double total = 0.0;
    bool degenerate = false;
    for (double w : weights) {
        if (w < 0.0) throw Error(ErrorKind::Precondition, "selection weights must be nonnegative");
        if (!std::isfinite(w)) degenerate = true;
        total += w;
    }
    // The draw happens unconditionally so replay stays aligned on fallbacks.
    double r = rng.next_double();
    if (degenerate || !std::isfinite(total) || !(total > 0.0)) return 0;
    double threshold = r * total;
    double acc = 0.0;
    for (size_t k = 0; k < weights.size(); ++k) {
        acc += weights[k];
        if (acc > threshold) return static_cast<int>(k);
    }
    return static_cast<int>(weights.size()) - 1;
}

Tour construct_impl(int start, const AcoParams& p, PheromoneMatrix& tau, const DistanceMatrix& d,
                    Rng& rng, const Matrix* eta_beta) {
    const int n = d.n;
    if (n < 3) bad_arg("tour construction needs n >= 3, got " + std::to_string(n));
    if (tau.n != n) bad_arg("pheromone matrix size does not match instance");
    if (start < 0 || start >= n)
        bad_arg("start city " + std::to_string(start) + " out of range for n = " +
                std::to_string(n));

    std::vector<char> visited(static_cast<size_t>(n), 0);
    Tour tour;
    tour.order.reserve(static_cast<size_t>(n));
    std::vector<int> feasible;
    feasible.reserve(static_cast<size_t>(n));
    std::vector<double> weights;
    weights.reserve(static_cast<size_t>(n));

    const bool acs = p.variant == Variant::ACS;
    int current = start;
    visited[static_cast<size_t>(start)] = 1;
    tour.order.push_back(start);

    for (int step = 1; step < n; ++step) {
        feasible.clear();
        for (int j = 0; j < n; ++j)
            if (!visited[static_cast<size_t>(j)]) feasible.push_back(j);
        weights.clear();
        for (int j : feasible) {
            double e = eta_beta ? (*eta_beta)(current, j)
                                : pow_weight(heuristic_value(d.values(current, j)), p.beta);
            weights.push_back(pow_weight(tau.tau(current, j), p.alpha) * e);
        }

        int next = -1;
        if (acs) {
            double q = rng.next_double();
            if (q < p.q0) {
                // feasible is ascending, so the first maximum is the lowest city.
                size_t best_k = 0;
                for (size_t k = 1; k < weights.size(); ++k)
                    if (weights[k] > weights[best_k]) best_k = k;
                next = feasible[best_k];
            } else {
                next = feasible[static_cast<size_t>(pick_proportional(weights, rng))];
            }
        } else {
            next = feasible[static_cast<size_t>(pick_proportional(weights, rng))];
        }

        tour.length += d.values(current, next);
        if (acs) tau.set(current, next, acs_local_update(tau.tau(current, next), p.xi, p.tau0));
        visited[static_cast<size_t>(next)] = 1;
        tour.order.push_back(next);
        current = next;
    }

    tour.length += d.values(current, start);
    if (acs) tau.set(current, start, acs_local_update(tau.tau(current, start), p.xi, p.tau0));
    return tour;
}

} // namespace

std::optional<Variant> variant_from_name(std::string_view name) {
    std::string s;
    s.reserve(name.size());
    for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s == "as") return Variant::AS;
    if (s == "asrank" || s == "rank" || s == "as-rank") return Variant::ASRank;
    if (s == "mmas" || s == "maxmin" || s == "max-min") return Variant::MMAS;
    if (s == "acs") return Variant::ACS;
    return std::nullopt;
}

void AcoParams::validate() const {
    if (iterations < 1) bad_arg("iterations must be >= 1, got " + std::to_string(iterations));
    if (num_ants < 1) bad_arg("ants must be >= 1, got " + std::to_string(num_ants));
    if (!std::isfinite(alpha) || alpha < 0.0) bad_arg("alpha must be finite and >= 0");
    if (!std::isfinite(beta) || beta < 0.0) bad_arg("beta must be finite and >= 0");
    if (!(rho > 0.0 && rho < 1.0)) bad_arg("rho must lie in (0, 1)");
    if (!std::isfinite(tau0) || !(tau0 > 0.0)) bad_arg("tau0 must be positive");
    if (!(xi > 0.0 && xi < 1.0)) bad_arg("xi must lie in (0, 1)");
    if (!(q0 >= 0.0 && q0 <= 1.0)) bad_arg("q0 must lie in [0, 1]");
    if (rank_cutoff < 1) bad_arg("rank cutoff must be >= 1, got " + std::to_string(rank_cutoff));
    if (!std::isfinite(deposit_q) || !(deposit_q > 0.0)) bad_arg("deposit q must be positive");
}

AcoParams default_params(Variant v) {
    AcoParams p;
    p.variant = v;
    p.rho = (v == Variant::MMAS || v == Variant::ACS) ? 0.1 : 0.5;
    return p;
}

PheromoneMatrix::PheromoneMatrix(int n_, double tau0, bool symmetric_)
    : n(n_), symmetric(symmetric_) {
    if (n_ < 1) bad_arg("pheromone matrix needs n >= 1");
    if (!std::isfinite(tau0) || !(tau0 > 0.0)) bad_arg("tau0 must be positive");
    tau = Matrix::Constant(n_, n_, tau0);
}

std::vector<double> transition_weights(int current, std::span<const int> feasible,
                                       const PheromoneMatrix& tau, const DistanceMatrix& d,
                                       double alpha, double beta) {
    const int n = d.n;
    if (tau.n != n) bad_arg("pheromone matrix size does not match instance");
    if (current < 0 || current >= n) bad_arg("current city out of range");
    std::vector<double> weights;
    weights.reserve(feasible.size());
    for (int j : feasible) {
        if (j < 0 || j >= n) bad_arg("feasible city out of range");
        double t = pow_weight(tau.tau(current, j), alpha);
        double e = pow_weight(heuristic_value(d.values(current, j)), beta);
        weights.push_back(t * e);
    }
    return weights;
}

int select_next_proportional(std::span<const double> weights, Rng& rng) {
    return pick_proportional(weights, rng);
}

int select_next_acs(int current, std::span<const int> feasible, const PheromoneMatrix& tau,
                    const DistanceMatrix& d, double alpha, double beta, double q0, Rng& rng) {
    if (feasible.empty())
        throw Error(ErrorKind::Precondition, "ACS selection needs a nonempty feasible set");
    if (!(q0 >= 0.0 && q0 <= 1.0)) bad_arg("q0 must lie in [0, 1]");
    double q = rng.next_double();
    auto weights = transition_weights(current, feasible, tau, d, alpha, beta);
    if (q < q0) {
        size_t best_k = 0;
        for (size_t k = 1; k < weights.size(); ++k) {
            if (weights[k] > weights[best_k] ||
                (weights[k] == weights[best_k] && feasible[k] < feasible[best_k]))
                best_k = k;
        }
        return feasible[best_k];
    }
    return feasible[static_cast<size_t>(pick_proportional(weights, rng))];
}

Tour construct_tour(int start, const AcoParams& params, PheromoneMatrix& tau,
                    const DistanceMatrix& d, Rng& rng) {
    params.validate();
    return construct_impl(start, params, tau, d, rng, nullptr);
}

void as_update(PheromoneMatrix& tau, std::span<const Tour> tours, double rho, double q) {
    if (!(rho > 0.0 && rho < 1.0)) bad_arg("rho must lie in (0, 1)");
    if (!(q > 0.0)) bad_arg("deposit q must be positive");
    tau.tau *= (1.0 - rho);
    for (const Tour& t : tours) {
        if (!(t.length > 0.0)) bad_arg("tour length must be positive");
        deposit_edges(tau, t.order, q / t.length);
    }
}

void asrank_update(PheromoneMatrix& tau, std::span<const Tour> ranked, int rank_cutoff,
                   double rho, double q) {
    if (!(rho > 0.0 && rho < 1.0)) bad_arg("rho must lie in (0, 1)");
    if (!(q > 0.0)) bad_arg("deposit q must be positive");
    if (rank_cutoff < 1) bad_arg("rank cutoff must be >= 1");
    for (size_t k = 1; k < ranked.size(); ++k)
        if (ranked[k].length < ranked[k - 1].length)
            bad_arg("ranked tours must be sorted ascending by length");
    tau.tau *= (1.0 - rho);
    // Rank r deposits (w - r) q / L_r; rank w and below deposit nothing.
    for (size_t k = 0; k < ranked.size(); ++k) {
        int rank = static_cast<int>(k) + 1;
        if (rank >= rank_cutoff) break;
        if (!(ranked[k].length > 0.0)) bad_arg("tour length must be positive");
        double factor = static_cast<double>(rank_cutoff - rank);
        deposit_edges(tau, ranked[k].order, factor * q / ranked[k].length);
    }
}

std::pair<double, double> mmas_trail_limits(double best_length, double rho, int n) {
    if (!(best_length > 0.0) || !std::isfinite(best_length))
        bad_arg("best length must be positive and finite");
    if (!(rho > 0.0 && rho < 1.0)) bad_arg("rho must lie in (0, 1)");
    if (n < 1) bad_arg("n must be >= 1");
    double tau_max = 1.0 / (rho * best_length);
    double tau_min = tau_max / (2.0 * static_cast<double>(n));
    return {tau_min, tau_max};
}

void mmas_update(PheromoneMatrix& tau, const Tour& best, double rho, double q, double tau_min,
                 double tau_max) {
    if (!(rho > 0.0 && rho < 1.0)) bad_arg("rho must lie in (0, 1)");
    if (!(q > 0.0)) bad_arg("deposit q must be positive");
    if (!(tau_min >= 0.0) || !(tau_min <= tau_max)) bad_arg("trail limits must satisfy 0 <= min <= max");
    if (!(best.length > 0.0)) bad_arg("tour length must be positive");
    tau.tau *= (1.0 - rho);
    deposit_edges(tau, best.order, q / best.length);
    tau.tau = tau.tau.cwiseMax(tau_min).cwiseMin(tau_max);
}

double acs_local_update(double tau_ij, double xi, double tau0) {
    return (1.0 - xi) * tau_ij + xi * tau0;
}

void acs_global_update(PheromoneMatrix& tau, const Tour& best, double rho, double q) {
    if (!(rho > 0.0 && rho < 1.0)) bad_arg("rho must lie in (0, 1)");
    if (!(q > 0.0)) bad_arg("deposit q must be positive");
    if (!(best.length > 0.0)) bad_arg("tour length must be positive");
    const double target = q / best.length;
    const auto& o = best.order;
    const int n = static_cast<int>(o.size());
    if (n != tau.n) bad_arg("tour size does not match pheromone matrix");
    auto reinforce = [&](int a, int b) {
        tau.set(a, b, (1.0 - rho) * tau.tau(a, b) + rho * target);
    };
    for (int k = 0; k + 1 < n; ++k) reinforce(o[k], o[k + 1]);
    reinforce(o[n - 1], o[0]);
}

RunRow RunRecord::to_row() const {
    RunRow r;
    r.instance = instance;
    r.dimension = static_cast<int>(best_tour.order.size());
    r.algorithm = variant_name(variant);
    r.seed = seed;
    r.run_index = run_index;
    r.best_length = best_tour.length;
    r.iterations = static_cast<int>(best_length_per_iteration.size());
    r.wall_time_ms = wall_time_ms;
    r.pheromone_bytes = pheromone_bytes;
    return r;
}

RunRecord run(const DistanceMatrix& d, std::string_view instance_name, const AcoParams& params,
              const IterationObserver& observer) {
    params.validate();
    if (d.n < 3) bad_arg("engine needs n >= 3, got " + std::to_string(d.n));

    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(params.seed);
    PheromoneMatrix tau(d.n, params.tau0, d.symmetric);

    // eta^beta cached once per run; construct_impl reads it instead of
    // recomputing so both paths share pow_weight exactly.
    Matrix eta_beta(d.n, d.n);
    for (int i = 0; i < d.n; ++i)
        for (int j = 0; j < d.n; ++j)
            eta_beta(i, j) = pow_weight(heuristic_value(d.values(i, j)), params.beta);

    RunRecord rec;
    rec.instance = std::string(instance_name);
    rec.variant = params.variant;
    rec.seed = params.seed;
    rec.best_length_per_iteration.reserve(static_cast<size_t>(params.iterations));

    Tour global_best;
    global_best.length = std::numeric_limits<double>::infinity();
    double tau_min = 0.0;
    double tau_max = std::numeric_limits<double>::infinity();
    std::vector<Tour> tours(static_cast<size_t>(params.num_ants));

    for (int iter = 0; iter < params.iterations; ++iter) {
        for (int k = 0; k < params.num_ants; ++k) {
            int start = rng.next_int(d.n);
            tours[static_cast<size_t>(k)] = construct_impl(start, params, tau, d, rng, &eta_beta);
        }
        size_t best_k = 0;
        for (size_t k = 1; k < tours.size(); ++k)
            if (tours[k].length < tours[best_k].length) best_k = k;

        if (tours[best_k].length < global_best.length) {
            global_best = tours[best_k];
            if (params.variant == Variant::MMAS)
                std::tie(tau_min, tau_max) =
                    mmas_trail_limits(global_best.length, params.rho, d.n);
        }

        switch (params.variant) {
        case Variant::AS:
            as_update(tau, tours, params.rho, params.deposit_q);
            break;
        case Variant::ASRank: {
            std::vector<Tour> ranked = tours;
            std::stable_sort(ranked.begin(), ranked.end(),
                             [](const Tour& a, const Tour& b) { return a.length < b.length; });
            asrank_update(tau, ranked, params.rank_cutoff, params.rho, params.deposit_q);
            if (params.elitist_gb)
                deposit_edges(tau, global_best.order,
                              static_cast<double>(params.rank_cutoff) * params.deposit_q /
                                  global_best.length);
            break;
        }
        case Variant::MMAS:
            mmas_update(tau,
                        params.mmas_best == MmasBest::IterationBest ? tours[best_k] : global_best,
                        params.rho, params.deposit_q, tau_min, tau_max);
            break;
        case Variant::ACS:
            acs_global_update(tau, global_best, params.rho, params.deposit_q);
            break;
        }

        rec.best_length_per_iteration.push_back(global_best.length);
        if (observer) observer({iter, global_best.length, tau_min, tau_max}, tau);
    }

    rec.best_tour = std::move(global_best);
    rec.pheromone_bytes = static_cast<std::int64_t>(d.n) * static_cast<std::int64_t>(d.n) * 8;
    rec.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

RunRecord run(const TspInstance& inst, const AcoParams& params, const IterationObserver& observer) {
    DistanceMatrix d = build_distance_matrix(inst);
    return run(d, inst.name, params, observer);
}

} // namespace aco
