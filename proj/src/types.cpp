#include "aco/types.hpp"

#include <cmath>
#include <limits>

#include "aco/tsplib.hpp"

namespace aco {

void TspInstance::validate() const {
    if (dimension < 3)
        throw Error(ErrorKind::InvalidArgument,
                    "instance dimension must be at least 3, got " + std::to_string(dimension));
    if (has_nodes()) {
        if (static_cast<int>(nodes.size()) != dimension)
            throw Error(ErrorKind::InvalidArgument,
                        "node count " + std::to_string(nodes.size()) +
                            " does not match dimension " + std::to_string(dimension));
        for (const auto& p : nodes)
            if (!std::isfinite(p.x()) || !std::isfinite(p.y()))
                throw Error(ErrorKind::InvalidArgument, "non-finite node coordinate");
    } else {
        if (explicit_weights.rows() != dimension || explicit_weights.cols() != dimension)
            throw Error(ErrorKind::InvalidArgument,
                        "explicit weight matrix must be " + std::to_string(dimension) + "x" +
                            std::to_string(dimension));
        for (int i = 0; i < dimension; ++i)
            for (int j = 0; j < dimension; ++j) {
                double w = explicit_weights(i, j);
                if (!std::isfinite(w) || w < 0.0)
                    throw Error(ErrorKind::InvalidArgument,
                                "explicit weights must be finite and nonnegative");
            }
    }
}

double tour_length(std::span<const int> order, const DistanceMatrix& d) {
    const int n = d.n;
    if (static_cast<int>(order.size()) != n)
        throw Error(ErrorKind::InvalidArgument,
                    "tour has " + std::to_string(order.size()) + " cities, expected " +
                        std::to_string(n));
    std::vector<char> seen(static_cast<size_t>(n), 0);
    for (int city : order) {
        if (city < 0 || city >= n)
            throw Error(ErrorKind::InvalidArgument,
                        "tour city " + std::to_string(city) + " out of range");
        if (seen[static_cast<size_t>(city)])
            throw Error(ErrorKind::InvalidArgument,
                        "tour visits city " + std::to_string(city) + " twice");
        seen[static_cast<size_t>(city)] = 1;
    }
    double length = 0.0;
    for (int k = 0; k + 1 < n; ++k) length += d.values(order[k], order[k + 1]);
    length += d.values(order[n - 1], order[0]);
    return length;
}

DistanceMatrix build_distance_matrix(const TspInstance& inst) {
    inst.validate();
    const int n = inst.dimension;
    DistanceMatrix d;
    d.n = n;
    if (inst.weight_kind == WeightKind::Explicit) {
        d.values = inst.explicit_weights;
        for (int i = 0; i < n; ++i) d.values(i, i) = 0.0;
        d.symmetric = d.values == d.values.transpose();
        return d;
    }
    d.values = Matrix::Zero(n, n);
    d.symmetric = true;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double v = 0.0;
            switch (inst.weight_kind) {
            case WeightKind::Euc2d:
                v = euc2d_distance(inst.nodes[i], inst.nodes[j], inst.rounding_mode);
                break;
            case WeightKind::Ceil2d:
                v = ceil2d_distance(inst.nodes[i], inst.nodes[j]);
                break;
            case WeightKind::Att:
                v = att_distance(inst.nodes[i], inst.nodes[j], inst.rounding_mode);
                break;
            case WeightKind::Geo:
                v = geo_distance(inst.nodes[i], inst.nodes[j]);
                break;
            case WeightKind::Explicit:
                break;  // unreachable
            }
            d.values(i, j) = v;
            d.values(j, i) = v;
        }
    }
    return d;
}

Tour nearest_neighbor_tour(const DistanceMatrix& d, int start) {
    const int n = d.n;
    if (start < 0 || start >= n)
        throw Error(ErrorKind::InvalidArgument,
                    "start city " + std::to_string(start) + " out of range for n = " +
                        std::to_string(n));
    std::vector<char> visited(static_cast<size_t>(n), 0);
    Tour tour;
    tour.order.reserve(static_cast<size_t>(n));
    int current = start;
    visited[static_cast<size_t>(start)] = 1;
    tour.order.push_back(start);
    for (int step = 1; step < n; ++step) {
        int next = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (visited[static_cast<size_t>(j)]) continue;
            double dist = d.values(current, j);
            if (dist < best) {  // strict: ties keep the lowest index
                best = dist;
                next = j;
            }
        }
        visited[static_cast<size_t>(next)] = 1;
        tour.order.push_back(next);
        tour.length += d.values(current, next);
        current = next;
    }
    tour.length += d.values(current, start);
    return tour;
}

} // namespace aco
