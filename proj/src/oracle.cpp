#include "aco/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>

namespace aco {

OracleResult brute_force_optimum(const DistanceMatrix& d) {
    const int n = d.n;
    if (n < 3)
        throw Error(ErrorKind::InvalidArgument, "oracle needs n >= 3, got " + std::to_string(n));
    if (n > 10)
        throw Error(ErrorKind::SizeLimit,
                    "brute force supports n <= 10, got n = " + std::to_string(n));

    std::vector<int> perm(static_cast<size_t>(n - 1));
    std::iota(perm.begin(), perm.end(), 1);
    std::vector<int> best_perm;
    double best = std::numeric_limits<double>::infinity();
    do {
        // Symmetric cycles appear once per direction; keep one representative.
        if (d.symmetric && perm.front() > perm.back()) continue;
        double len = d.values(0, perm.front());
        for (size_t k = 0; k + 1 < perm.size(); ++k) len += d.values(perm[k], perm[k + 1]);
        len += d.values(perm.back(), 0);
        if (len < best) {
            best = len;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    OracleResult res;
    res.method = OracleMethod::Enumeration;
    res.optimal_length = best;
    res.optimal_order.reserve(static_cast<size_t>(n));
    res.optimal_order.push_back(0);
    res.optimal_order.insert(res.optimal_order.end(), best_perm.begin(), best_perm.end());
    return res;
}

OracleResult held_karp_optimum(const DistanceMatrix& d) {
    const int n = d.n;
    if (n < 3)
        throw Error(ErrorKind::InvalidArgument, "oracle needs n >= 3, got " + std::to_string(n));
    if (n > 20)
        throw Error(ErrorKind::SizeLimit,
                    "Held-Karp supports n <= 20, got n = " + std::to_string(n));

    const int m = n - 1;  // cities 1..n-1, bit j <-> city j+1
    const size_t states = size_t{1} << m;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(states * static_cast<size_t>(m), inf);
    std::vector<std::int8_t> parent(states * static_cast<size_t>(m), -1);

    for (int j = 0; j < m; ++j)
        dp[(size_t{1} << j) * static_cast<size_t>(m) + static_cast<size_t>(j)] =
            d.values(0, j + 1);

    for (size_t mask = 1; mask < states; ++mask) {
        for (int last = 0; last < m; ++last) {
            if (!((mask >> last) & 1)) continue;
            double cur = dp[mask * static_cast<size_t>(m) + static_cast<size_t>(last)];
            if (cur == inf) continue;
            for (int next = 0; next < m; ++next) {
                if ((mask >> next) & 1) continue;
                size_t nmask = mask | (size_t{1} << next);
                double cand = cur + d.values(last + 1, next + 1);
                double& slot = dp[nmask * static_cast<size_t>(m) + static_cast<size_t>(next)];
                if (cand < slot) {
                    slot = cand;
                    parent[nmask * static_cast<size_t>(m) + static_cast<size_t>(next)] =
                        static_cast<std::int8_t>(last);
                }
            }
        }
    }

    const size_t full = states - 1;
    double best = inf;
    int best_last = 0;
    for (int last = 0; last < m; ++last) {
        double cand = dp[full * static_cast<size_t>(m) + static_cast<size_t>(last)] +
                      d.values(last + 1, 0);
        if (cand < best) {
            best = cand;
            best_last = last;
        }
    }

    std::vector<int> rev;
    size_t mask = full;
    int last = best_last;
    while (last != -1) {
        rev.push_back(last + 1);
        int p = parent[mask * static_cast<size_t>(m) + static_cast<size_t>(last)];
        mask &= ~(size_t{1} << last);
        last = p;
    }

    OracleResult res;
    res.method = OracleMethod::HeldKarp;
    res.optimal_order.reserve(static_cast<size_t>(n));
    res.optimal_order.push_back(0);
    res.optimal_order.insert(res.optimal_order.end(), rev.rbegin(), rev.rend());
    // Resummed in tour order so both oracles accumulate identically.
    res.optimal_length = tour_length(res.optimal_order, d);
    return res;
}

} // namespace aco
