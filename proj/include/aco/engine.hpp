#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aco/tsplib.hpp"
#include "aco/types.hpp"

namespace aco {

enum class Variant { AS, ASRank, MMAS, ACS };

inline constexpr std::array<Variant, 4> kAllVariants = {
    Variant::AS, Variant::ASRank, Variant::MMAS, Variant::ACS};

constexpr const char* variant_name(Variant v) noexcept {
    switch (v) {
    case Variant::AS: return "AS";
    case Variant::ASRank: return "ASRank";
    case Variant::MMAS: return "MMAS";
    case Variant::ACS: return "ACS";
    }
    return "UNKNOWN";
}

/// Case-insensitive lookup; also accepts the aliases "rank" and "maxmin".
std::optional<Variant> variant_from_name(std::string_view name);

enum class MmasBest { IterationBest, GlobalBest };

/// Deterministic RNG with a pinned sequence: std::mt19937_64 under the hood,
/// doubles built from the top 53 bits. Every selection routine documents how
/// many draws it consumes so replay stays exact across refactors.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1). Consumes one engine step.
    double next_double() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [0, bound). Consumes exactly one engine step.
    int next_int(int bound) {
        return static_cast<int>(next_double() * static_cast<double>(bound));
    }

private:
    std::mt19937_64 gen_;
};

struct AcoParams {
    Variant variant = Variant::AS;
    int iterations = 100;
    int num_ants = 50;
    double alpha = 1.0;
    double beta = 1.0;
    double rho = 0.5;
    double tau0 = 0.1;
    double xi = 0.1;          // ACS local evaporation
    double q0 = 0.9;          // ACS exploitation probability
    int rank_cutoff = 6;      // ASRank w
    bool elitist_gb = false;  // ASRank optional global-best deposit
    MmasBest mmas_best = MmasBest::IterationBest;
    double deposit_q = 1.0;   // Q in Q / L deposits
    std::uint64_t seed = 0;

    /// Throws Error{InvalidArgument} when a bound is violated.
    void validate() const;
};

/// Per-variant defaults: shared iterations/ants/alpha/beta/tau0, rho 0.5 for
/// AS and ASRank, 0.1 for MMAS and ACS.
AcoParams default_params(Variant v);

struct PheromoneMatrix {
    int n = 0;
    bool symmetric = true;
    Matrix tau;

    PheromoneMatrix() = default;
    PheromoneMatrix(int n_, double tau0, bool symmetric_);

    /// Assigns tau(i,j), mirroring to (j,i) on symmetric instances so the
    /// matrix stays bitwise symmetric under repeated updates.
    void set(int i, int j, double value) {
        tau(i, j) = value;
        if (symmetric) tau(j, i) = value;
    }

    void deposit(int i, int j, double delta) {
        tau(i, j) += delta;
        if (symmetric) tau(j, i) = tau(i, j);
    }
};

/// 1/d for d > 0; 1/eps with eps = 1e-10 for d = 0.
inline double heuristic_value(double d) {
    return d > 0.0 ? 1.0 / d : 1e10;
}

/// pow with exact fast paths for exponents 0 and 1. Every weight computation
/// in the engine goes through this one function so cached and direct paths
/// produce bit-identical doubles.
inline double pow_weight(double base, double exponent) {
    if (exponent == 0.0) return 1.0;
    if (exponent == 1.0) return base;
    return std::pow(base, exponent);
}

/// Unnormalized weights tau^alpha * eta^beta, one per feasible city, in the
/// order given by `feasible`.
std::vector<double> transition_weights(int current, std::span<const int> feasible,
                                       const PheromoneMatrix& tau, const DistanceMatrix& d,
                                       double alpha, double beta);

/// Roulette selection over `weights`; returns an index into the span.
/// Consumes exactly one rng draw. Throws Error{Precondition} when empty or
/// when a weight is negative; a non-finite or zero total falls back to
/// index 0 so replay stays deterministic.
int select_next_proportional(std::span<const double> weights, Rng& rng);

/// ACS pseudo-random-proportional rule; returns a city from `feasible`.
/// Draws q first (one draw); q < q0 picks the argmax weight (ties resolve to
/// the lowest city index), otherwise one more draw runs the roulette.
int select_next_acs(int current, std::span<const int> feasible, const PheromoneMatrix& tau,
                    const DistanceMatrix& d, double alpha, double beta, double q0, Rng& rng);

/// Builds one complete tour from `start` under params.variant. ACS applies
/// its local update to every traversed edge, closing edge included, which is
/// why tau is mutable here.
Tour construct_tour(int start, const AcoParams& params, PheromoneMatrix& tau,
                    const DistanceMatrix& d, Rng& rng);

/// tau <- (1 - rho) tau, then every tour deposits q / length on each of its
/// edges. An empty span is pure evaporation.
void as_update(PheromoneMatrix& tau, std::span<const Tour> tours, double rho, double q);

/// Rank-based update: evaporation, then rank r (1-based, ascending length)
/// deposits (w - r) * q / length for r < w. Requires `ranked` sorted
/// ascending by length; throws Error{Precondition} otherwise.
void asrank_update(PheromoneMatrix& tau, std::span<const Tour> ranked, int rank_cutoff,
                   double rho, double q);

/// tau_max = 1 / (rho * best_length), tau_min = tau_max / (2n).
std::pair<double, double> mmas_trail_limits(double best_length, double rho, int n);

/// Evaporates everything, deposits q / length on the best tour's edges, then
/// clamps every entry (diagonal included) into [tau_min, tau_max].
void mmas_update(PheromoneMatrix& tau, const Tour& best, double rho, double q,
                 double tau_min, double tau_max);

/// One-edge ACS local rule: (1 - xi) tau_ij + xi tau0.
double acs_local_update(double tau_ij, double xi, double tau0);

/// ACS global rule on the best tour's edges only: tau <- (1 - rho) tau +
/// rho * q / length. Entries off the tour are not touched at all.
void acs_global_update(PheromoneMatrix& tau, const Tour& best, double rho, double q);

struct IterationStats {
    int iteration = 0;
    double best_length = 0.0;  // global best after this iteration
    double tau_min = 0.0;      // MMAS limits in force (0 / +inf otherwise)
    double tau_max = 0.0;
};

using IterationObserver = std::function<void(const IterationStats&, const PheromoneMatrix&)>;

struct RunRecord {
    std::string instance;
    Variant variant = Variant::AS;
    std::uint64_t seed = 0;
    int run_index = 0;
    Tour best_tour;
    std::vector<double> best_length_per_iteration;  // nonincreasing
    double wall_time_ms = 0.0;
    std::int64_t pheromone_bytes = 0;

    RunRow to_row() const;
};

/// Full optimization loop: one Rng seeded from params.seed, pheromone at
/// tau0, per iteration num_ants tours from uniform random starts (one draw
/// each), the variant's update, and the running global best appended to the
/// series. The observer, when given, fires after every iteration's update.
RunRecord run(const DistanceMatrix& d, std::string_view instance_name, const AcoParams& params,
              const IterationObserver& observer = {});
RunRecord run(const TspInstance& inst, const AcoParams& params,
              const IterationObserver& observer = {});

} // namespace aco
