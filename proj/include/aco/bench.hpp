#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aco/engine.hpp"
#include "aco/tsplib.hpp"

namespace aco {

enum class SizeCategory { Small, Medium, Large };

constexpr const char* size_category_name(SizeCategory c) noexcept {
    switch (c) {
    case SizeCategory::Small: return "Small";
    case SizeCategory::Medium: return "Medium";
    case SizeCategory::Large: return "Large";
    }
    return "UNKNOWN";
}

/// Small: n < 100; Medium: 100 <= n < 1000; Large: n >= 1000.
SizeCategory size_category(int dimension);

/// Bytes held by one dense pheromone matrix: n * n * 8.
std::int64_t pheromone_footprint(int dimension);

std::uint64_t fnv1a64(std::string_view s);
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for one (instance, variant, repetition) cell:
/// splitmix64((base_seed + run_index) ^ fnv1a64(instance \x1f variant)).
std::uint64_t cell_seed(std::uint64_t base_seed, int run_index, std::string_view instance,
                        std::string_view variant);

struct BenchConfig {
    std::vector<std::string> instances;  // paths, resolved against the config file's directory
    std::vector<Variant> variants;
    int repetitions = 10;
    std::uint64_t base_seed = 1;
    RoundingMode rounding = RoundingMode::UnroundedReal;
    int jobs = 1;
    std::map<Variant, AcoParams> params;  // fully resolved per variant

    void validate() const;
};

/// Key = value lines, # comments, [VariantName] sections for per-variant
/// overrides. Relative instance paths resolve against base_dir.
BenchConfig parse_bench_config(std::istream& in, const std::string& base_dir);
BenchConfig parse_bench_config_file(const std::string& path);

struct ReportRow {
    std::string instance;
    int dimension = 0;
    double best_distance = 0.0;
    std::string best_algorithm;
    std::int64_t pheromone_bytes = 0;

    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct SkippedInstance {
    std::string path;
    std::string reason;

    friend bool operator==(const SkippedInstance&, const SkippedInstance&) = default;
};

struct BenchReport {
    std::vector<ReportRow> rows;  // instance first-appearance order
    // category name -> winner name -> percentage of that category's rows won
    std::map<std::string, std::map<std::string, double>> win_percentages;
    std::vector<SkippedInstance> skipped;

    friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

/// Per-category win percentages: 100 * wins / rows-in-category, keyed by the
/// winner names that actually appear. Every name in ensure_variants is also
/// forced into every nonempty category, at 0 when it won nothing, so
/// shut-out variants show up explicitly. Empty categories are absent.
std::map<std::string, std::map<std::string, double>> win_percentages(
    std::span<const ReportRow> rows, std::span<const std::string> ensure_variants);

/// Collapses raw rows into one ReportRow per instance (minimum best_length;
/// ties go to the lexicographically first algorithm name) plus the win
/// percentages. Deterministic in the row contents alone, so re-rendering
/// from a raw CSV reproduces the original report exactly.
BenchReport aggregate_report(std::span<const RunRow> raw);

struct SuiteResult {
    std::vector<RunRow> raw;
    BenchReport report;
};

/// Runs repetitions x variants x instances cells. Unparseable instance
/// files are recorded in report.skipped and do not abort the suite. Results
/// are identical for any config.jobs value; raw rows come out ordered by
/// (instance, variant, repetition).
SuiteResult run_suite_full(const BenchConfig& config);
BenchReport run_suite(const BenchConfig& config);

enum class ReportFormat { Markdown, Json, Csv };

std::string render_report(const BenchReport& report, ReportFormat format);

/// Inverse of render_report(report, Json): the parsed report compares equal
/// structurally, field for field.
BenchReport parse_report_json(const std::string& text);

} // namespace aco
