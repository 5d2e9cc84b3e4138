#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "aco/types.hpp"

namespace aco {

/// Round half away from zero (TSPLIB "nint").
double nint(double x);

/// Euclidean distance; TsplibInteger applies nint to the result.
double euc2d_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& q, RoundingMode mode);

/// Ceiling of the Euclidean distance. No rounding-mode variant exists.
double ceil2d_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& q);

/// Pseudo-Euclidean distance: r = sqrt((dx^2 + dy^2) / 10); TsplibInteger
/// rounds r up to the next integer whenever nint(r) falls short of r.
double att_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& q, RoundingMode mode);

/// Geographic distance on the TSPLIB reference sphere. Coordinates are
/// DDD.MMM (degrees and minutes); the degree part is the truncated integer
/// part. Always integral; identical coordinates give 0.
double geo_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& q);

/// Parses a TSPLIB document. Supported EDGE_WEIGHT_TYPEs: EUC_2D, CEIL_2D,
/// ATT, GEO, EXPLICIT (FULL_MATRIX and the four ROW triangular layouts).
/// Malformed input raises Error with a line-numbered message.
TspInstance parse_tsplib(std::istream& in, RoundingMode mode = RoundingMode::UnroundedReal);
TspInstance parse_tsplib_file(const std::string& path, RoundingMode mode = RoundingMode::UnroundedReal);

/// Serializes an instance back to TSPLIB text. parse_tsplib(write_tsplib(x))
/// reproduces x field-for-field (Explicit instances emit FULL_MATRIX).
std::string write_tsplib(const TspInstance& inst);

/// One benchmark run, flattened for CSV exchange.
struct RunRow {
    std::string instance;
    int dimension = 0;
    std::string algorithm;
    std::uint64_t seed = 0;
    int run_index = 0;
    double best_length = 0.0;
    int iterations = 0;
    double wall_time_ms = 0.0;
    std::int64_t pheromone_bytes = 0;

    friend bool operator==(const RunRow&, const RunRow&) = default;
};

inline constexpr const char* kRunCsvHeader =
    "instance,dimension,algorithm,seed,run_index,best_length,iterations,wall_time_ms,pheromone_bytes";

/// Writes the header plus one line per row. Doubles use shortest
/// round-trip formatting so read_run_csv recovers them bit-exactly.
/// Requires at least one row; throws Error{Precondition} on an empty span.
void write_run_csv(std::span<const RunRow> rows, std::ostream& out);
std::string run_csv_to_string(std::span<const RunRow> rows);

std::vector<RunRow> read_run_csv(std::istream& in);
std::vector<RunRow> read_run_csv_file(const std::string& path);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

} // namespace aco
