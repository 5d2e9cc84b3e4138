#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

#include "aco/errors.hpp"

namespace aco {

using Matrix = Eigen::MatrixXd;

enum class WeightKind { Euc2d, Ceil2d, Att, Geo, Explicit };
enum class RoundingMode { TsplibInteger, UnroundedReal };

constexpr const char* weight_kind_name(WeightKind kind) noexcept {
    switch (kind) {
    case WeightKind::Euc2d: return "EUC_2D";
    case WeightKind::Ceil2d: return "CEIL_2D";
    case WeightKind::Att: return "ATT";
    case WeightKind::Geo: return "GEO";
    case WeightKind::Explicit: return "EXPLICIT";
    }
    return "UNKNOWN";
}

constexpr const char* rounding_mode_name(RoundingMode mode) noexcept {
    return mode == RoundingMode::TsplibInteger ? "tsplib" : "real";
}

/// A parsed TSP instance. Coordinate kinds fill `nodes` (0-based, file label k
/// lands at index k-1); Explicit fills `explicit_weights` as a full n-by-n
/// matrix regardless of the on-disk triangular layout.
struct TspInstance {
    std::string name;
    int dimension = 0;
    std::vector<Eigen::Vector2d> nodes;
    Matrix explicit_weights;
    WeightKind weight_kind = WeightKind::Euc2d;
    RoundingMode rounding_mode = RoundingMode::UnroundedReal;

    bool has_nodes() const noexcept { return weight_kind != WeightKind::Explicit; }

    /// Throws Error{InvalidArgument} when a structural invariant is broken.
    void validate() const;
};

struct DistanceMatrix {
    int n = 0;
    Matrix values;
    bool symmetric = true;
};

struct Tour {
    std::vector<int> order;
    double length = 0.0;
};

/// Sum of the n cycle edges of `order` (closing edge included). Requires a
/// permutation of 0..n-1 with n == d.n; throws Error{InvalidArgument} otherwise.
double tour_length(std::span<const int> order, const DistanceMatrix& d);

/// Expands an instance into its distance matrix under inst.rounding_mode.
/// Explicit instances copy their weights through unchanged (diagonal zeroed).
DistanceMatrix build_distance_matrix(const TspInstance& inst);

/// Greedy nearest-neighbor tour from `start`; ties go to the lowest city index.
Tour nearest_neighbor_tour(const DistanceMatrix& d, int start);

} // namespace aco
