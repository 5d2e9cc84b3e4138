#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aco/bench.hpp"
#include "test_support.hpp"

using namespace aco;
namespace ts = testsupport;
namespace fs = std::filesystem;
using ts::throws_kind;

namespace {

BenchConfig tiny_config() {
    BenchConfig cfg;
    cfg.instances = {ts::data_file("burma14.tsp"), ts::data_file("gr17.tsp")};
    cfg.variants = {Variant::AS, Variant::ACS};
    cfg.repetitions = 3;
    cfg.base_seed = 5;
    cfg.rounding = RoundingMode::UnroundedReal;
    cfg.jobs = 1;
    for (Variant v : kAllVariants) {
        AcoParams p = default_params(v);
        p.iterations = 5;
        p.num_ants = 5;
        cfg.params.emplace(v, p);
    }
    return cfg;
}

std::vector<RunRow> wall_zeroed(std::vector<RunRow> rows) {
    for (RunRow& r : rows) r.wall_time_ms = 0.0;
    return rows;
}

struct TempFile {
    fs::path path;
    explicit TempFile(const std::string& text) {
        path = fs::temp_directory_path() /
               ("aco_bench_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) +
                ".conf");
        std::ofstream out(path);
        out << text;
    }
    ~TempFile() { std::remove(path.string().c_str()); }
};

} // namespace

TEST_CASE("size categories split at 100 and 1000 cities") {
    CHECK(size_category(14) == SizeCategory::Small);
    CHECK(size_category(52) == SizeCategory::Small);
    CHECK(size_category(99) == SizeCategory::Small);
    CHECK(size_category(100) == SizeCategory::Medium);
    CHECK(size_category(280) == SizeCategory::Medium);
    CHECK(size_category(999) == SizeCategory::Medium);
    CHECK(size_category(1000) == SizeCategory::Large);
    CHECK(size_category(1291) == SizeCategory::Large);
    CHECK(size_category(14051) == SizeCategory::Large);
    CHECK(std::string(size_category_name(SizeCategory::Small)) == "Small");
    CHECK(std::string(size_category_name(SizeCategory::Medium)) == "Medium");
    CHECK(std::string(size_category_name(SizeCategory::Large)) == "Large");
}

TEST_CASE("pheromone footprint is eight bytes per matrix entry") {
    CHECK(pheromone_footprint(100) == 80000);
    CHECK(pheromone_footprint(1000) == 8000000);
    CHECK(pheromone_footprint(52) == 21632);
    CHECK(pheromone_footprint(1) == 8);
    for (int n : {10, 100, 1000}) CHECK(pheromone_footprint(2 * n) == 4 * pheromone_footprint(n));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] { pheromone_footprint(0); }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] { pheromone_footprint(-5); }));
}

TEST_CASE("cell seeds are reproducible and spread out") {
    CHECK(cell_seed(1, 0, "berlin52", "ACS") == cell_seed(1, 0, "berlin52", "ACS"));
    // base + run_index fold together by design, so bases are spaced past the
    // repetition range to probe distinctness
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t base : {1ull, 1000ull})
        for (int rep = 0; rep < 3; ++rep)
            for (const char* inst : {"berlin52", "eil51"})
                for (const char* var : {"AS", "ACS"})
                    seeds.push_back(cell_seed(base, rep, inst, var));
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
    // equal sums alias on purpose: rerunning rep r with base b matches rep 0
    // with base b + r
    CHECK(cell_seed(1, 1, "berlin52", "ACS") == cell_seed(2, 0, "berlin52", "ACS"));
    // the separator keeps ("ab", "c") and ("a", "bc") apart
    CHECK(cell_seed(1, 0, "ab", "c") != cell_seed(1, 0, "a", "bc"));
}

TEST_CASE("win percentages split a category by winner") {
    std::vector<ReportRow> rows = {
        {"i1", 14, 1.0, "PACS", 1568},  {"i2", 16, 1.0, "ACS", 2048},
        {"i3", 17, 1.0, "ACS", 2312},   {"i4", 48, 1.0, "ACS", 18432},
        {"i5", 51, 1.0, "MMAS", 20808}, {"i6", 52, 1.0, "ACS", 21632},
    };
    std::vector<std::string> ensure = {"AS", "ASRank", "MMAS", "ACS"};
    auto pct = win_percentages(rows, ensure);
    REQUIRE(pct.count("Small") == 1);
    const auto& small = pct.at("Small");
    CHECK(small.at("ACS") == doctest::Approx(200.0 / 3.0).epsilon(1e-12));
    CHECK(small.at("MMAS") == doctest::Approx(100.0 / 6.0).epsilon(1e-12));
    CHECK(small.at("PACS") == doctest::Approx(100.0 / 6.0).epsilon(1e-12));
    CHECK(small.at("AS") == 0.0);
    CHECK(small.at("ASRank") == 0.0);
    double total = 0.0;
    for (const auto& [name, p] : small) total += p;
    CHECK(total == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(pct.count("Medium") == 0);
    CHECK(pct.count("Large") == 0);
}

TEST_CASE("win percentages across categories") {
    std::vector<ReportRow> rows = {
        {"s", 52, 1.0, "ACS", 0},
        {"m", 280, 1.0, "MMAS", 0},
        {"l", 1291, 1.0, "ACS", 0},
    };
    auto pct = win_percentages(rows, {});
    CHECK(pct.at("Small").at("ACS") == 100.0);
    CHECK(pct.at("Medium").at("MMAS") == 100.0);
    CHECK(pct.at("Large").at("ACS") == 100.0);
    CHECK(pct.at("Small").count("MMAS") == 0);  // nothing forced without ensure names
}

TEST_CASE("win percentages of nothing is nothing") {
    auto pct = win_percentages({}, {});
    CHECK(pct.empty());
    std::vector<std::string> ensure = {"AS"};
    CHECK(win_percentages({}, ensure).empty());
}

TEST_CASE("aggregate_report keeps the minimum and breaks ties by name") {
    std::vector<RunRow> raw = {
        {"a", 14, "MMAS", 1, 0, 50.0, 5, 1.0, 1568},
        {"a", 14, "ACS", 2, 0, 40.0, 5, 1.0, 1568},
        {"a", 14, "AS", 3, 0, 45.0, 5, 1.0, 1568},
        {"b", 16, "MMAS", 4, 0, 90.0, 5, 1.0, 2048},
        {"b", 16, "ACS", 5, 0, 90.0, 5, 1.0, 2048},
    };
    BenchReport rep = aggregate_report(raw);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].instance == "a");
    CHECK(rep.rows[0].best_distance == 40.0);
    CHECK(rep.rows[0].best_algorithm == "ACS");
    CHECK(rep.rows[1].instance == "b");
    CHECK(rep.rows[1].best_distance == 90.0);
    CHECK(rep.rows[1].best_algorithm == "ACS");  // tie with MMAS goes to ACS

    // the ensure set comes from the raw rows, so AS shows up at zero
    CHECK(rep.win_percentages.at("Small").at("AS") == 0.0);
    CHECK(rep.win_percentages.at("Small").at("ACS") == 100.0);

    SUBCASE("tie break is insertion-order independent") {
        std::vector<RunRow> flipped = {raw[4], raw[3]};
        BenchReport r2 = aggregate_report(flipped);
        CHECK(r2.rows[0].best_algorithm == "ACS");
    }

    SUBCASE("conflicting dimensions are rejected") {
        std::vector<RunRow> bad = {raw[0], {"a", 15, "ACS", 2, 0, 40.0, 5, 1.0, 1800}};
        CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { aggregate_report(bad); }));
    }
}

TEST_CASE("config files parse sections, comments, and overrides") {
    TempFile file(
        "# benchmark setup\n"
        "instance = data/a.tsp\n"
        "instance = /abs/b.tsp  # trailing comment\n"
        "variants = ACS, MMAS\n"
        "repetitions = 4\n"
        "base_seed = 7\n"
        "jobs = 2\n"
        "rounding = tsplib\n"
        "iterations = 33\n"
        "ants = 9\n"
        "alpha = 1.25\n"
        "beta = 2.5\n"
        "tau0 = 0.2\n"
        "q = 2\n"
        "\n"
        "[ACS]\n"
        "rho = 0.25\n"
        "q0 = 0.55\n"
        "xi = 0.2\n"
        "\n"
        "[MMAS]\n"
        "mmas_best = global\n");
    BenchConfig cfg = parse_bench_config_file(file.path.string());

    REQUIRE(cfg.instances.size() == 2);
    fs::path base = file.path.parent_path();
    CHECK(cfg.instances[0] == (base / "data/a.tsp").lexically_normal().string());
    CHECK(cfg.instances[1] == "/abs/b.tsp");
    CHECK(cfg.variants == std::vector<Variant>{Variant::ACS, Variant::MMAS});
    CHECK(cfg.repetitions == 4);
    CHECK(cfg.base_seed == 7);
    CHECK(cfg.jobs == 2);
    CHECK(cfg.rounding == RoundingMode::TsplibInteger);

    const AcoParams& acs = cfg.params.at(Variant::ACS);
    CHECK(acs.iterations == 33);
    CHECK(acs.num_ants == 9);
    CHECK(acs.alpha == 1.25);
    CHECK(acs.beta == 2.5);
    CHECK(acs.tau0 == 0.2);
    CHECK(acs.deposit_q == 2.0);
    CHECK(acs.rho == 0.25);
    CHECK(acs.q0 == 0.55);
    CHECK(acs.xi == 0.2);

    const AcoParams& mmas = cfg.params.at(Variant::MMAS);
    CHECK(mmas.rho == 0.1);  // per-variant default survives
    CHECK(mmas.mmas_best == MmasBest::GlobalBest);
    CHECK(mmas.iterations == 33);

    // variants not listed still get fully resolved params
    CHECK(cfg.params.at(Variant::AS).rho == 0.5);
    CHECK(cfg.params.at(Variant::AS).iterations == 33);
}

TEST_CASE("config defaults fill everything but instances") {
    std::istringstream in("instance = x.tsp\n");
    BenchConfig cfg = parse_bench_config(in, "");
    CHECK(cfg.instances == std::vector<std::string>{"x.tsp"});
    CHECK(cfg.variants.size() == 4);
    CHECK(cfg.repetitions == 10);
    CHECK(cfg.base_seed == 1);
    CHECK(cfg.jobs == 1);
    CHECK(cfg.rounding == RoundingMode::UnroundedReal);
    CHECK(cfg.params.at(Variant::AS).rho == 0.5);
    CHECK(cfg.params.at(Variant::ASRank).rho == 0.5);
    CHECK(cfg.params.at(Variant::MMAS).rho == 0.1);
    CHECK(cfg.params.at(Variant::ACS).rho == 0.1);
}

TEST_CASE("config rejects malformed input with line numbers") {
    auto parse_text = [](const std::string& text) {
        std::istringstream in(text);
        return parse_bench_config(in, "");
    };
    CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { parse_text("bogus = 1\n"); }));
    // rho is per-variant only; the shared scope rejects it
    CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { parse_text("rho = 0.3\n"); }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { parse_text("[PACS]\nrho = 0.3\n"); }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { parse_text("rounding = integer\n"); }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { parse_text("iterations = soon\n"); }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { parse_text("variants = AS, PACS\n"); }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { parse_text("variants = AS, AS\n"); }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { parse_text("repetitions = 0\n"); }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { parse_text("just a line\n"); }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { parse_text("[ACS\nrho = 0.2\n"); }));
    CHECK(throws_kind(ErrorKind::Io, [] { parse_bench_config_file("/nonexistent/x.conf"); }));

    try {
        std::istringstream in("iterations = soon\n");
        parse_bench_config(in, "");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
}

TEST_CASE("the shipped small config parses") {
    BenchConfig cfg = parse_bench_config_file(ts::config_file("small.conf"));
    CHECK(cfg.instances.size() == 6);
    CHECK(cfg.variants.size() == 4);
    CHECK(cfg.repetitions == 10);
    CHECK(cfg.base_seed == 1);
    CHECK(cfg.rounding == RoundingMode::UnroundedReal);
    for (const std::string& path : cfg.instances) CHECK(fs::exists(path));
}

TEST_CASE("run_suite_full produces ordered, seeded, complete raw rows") {
    BenchConfig cfg = tiny_config();
    SuiteResult full = run_suite_full(cfg);

    REQUIRE(full.raw.size() == 12);  // 2 instances x 2 variants x 3 reps
    const char* want[12][2] = {
        {"burma14", "AS"},  {"burma14", "AS"},  {"burma14", "AS"},
        {"burma14", "ACS"}, {"burma14", "ACS"}, {"burma14", "ACS"},
        {"gr17", "AS"},     {"gr17", "AS"},     {"gr17", "AS"},
        {"gr17", "ACS"},    {"gr17", "ACS"},    {"gr17", "ACS"},
    };
    for (size_t i = 0; i < 12; ++i) {
        const RunRow& r = full.raw[i];
        CHECK(r.instance == want[i][0]);
        CHECK(r.algorithm == want[i][1]);
        CHECK(r.run_index == static_cast<int>(i % 3));
        CHECK(r.seed == cell_seed(5, r.run_index, r.instance, r.algorithm));
        CHECK(r.iterations == 5);
        CHECK(r.best_length > 0.0);
        CHECK(r.pheromone_bytes == pheromone_footprint(r.dimension));
    }
    CHECK(full.raw[0].dimension == 14);
    CHECK(full.raw[6].dimension == 17);

    REQUIRE(full.report.rows.size() == 2);
    CHECK(full.report.rows[0].instance == "burma14");
    CHECK(full.report.rows[1].instance == "gr17");
    CHECK(full.report.skipped.empty());

    const auto& small = full.report.win_percentages.at("Small");
    double total = 0.0;
    for (const auto& [name, pct] : small) total += pct;
    CHECK(total == doctest::Approx(100.0).epsilon(1e-12));

    SUBCASE("a second run reproduces everything but wall time") {
        SuiteResult again = run_suite_full(cfg);
        CHECK(wall_zeroed(again.raw) == wall_zeroed(full.raw));
        CHECK(again.report == full.report);
    }

    SUBCASE("thread count does not change results") {
        BenchConfig parallel = cfg;
        parallel.jobs = 4;
        SuiteResult threaded = run_suite_full(parallel);
        CHECK(wall_zeroed(threaded.raw) == wall_zeroed(full.raw));
        CHECK(threaded.report == full.report);
    }

    SUBCASE("raw csv round-trips into the same report") {
        std::string csv = run_csv_to_string(full.raw);
        std::istringstream in(csv);
        std::vector<RunRow> parsed = read_run_csv(in);
        CHECK(wall_zeroed(parsed) == wall_zeroed(full.raw));
        BenchReport re = aggregate_report(parsed);
        CHECK(re.rows == full.report.rows);
        CHECK(re.win_percentages == full.report.win_percentages);
        CHECK(render_report(re, ReportFormat::Markdown) ==
              render_report(full.report, ReportFormat::Markdown));
    }
}

TEST_CASE("unreadable instances are skipped, not fatal") {
    BenchConfig cfg = tiny_config();
    cfg.instances = {ts::data_file("burma14.tsp"), "/nonexistent/zzz.tsp"};
    SuiteResult full = run_suite_full(cfg);
    CHECK(full.raw.size() == 6);  // 1 instance x 2 variants x 3 reps
    REQUIRE(full.report.skipped.size() == 1);
    CHECK(full.report.skipped[0].path == "/nonexistent/zzz.tsp");
    CHECK(full.report.skipped[0].reason.find("io") != std::string::npos);
    std::string md = render_report(full.report, ReportFormat::Markdown);
    CHECK(md.find("## Skipped instances") != std::string::npos);
    CHECK(md.find("/nonexistent/zzz.tsp") != std::string::npos);
}

TEST_CASE("markdown report lays out categories, tables, and percentages") {
    BenchReport rep;
    rep.rows.push_back({"small1", 52, 7542.5, "ACS", 21632});
    rep.rows.push_back({"med1", 280, 2579.0, "MMAS", 627200});
    std::vector<std::string> ensure = {"AS", "ACS", "MMAS"};
    rep.win_percentages = win_percentages(rep.rows, ensure);

    std::string md = render_report(rep, ReportFormat::Markdown);
    CHECK(md.find("# ACO benchmark report") == 0);
    CHECK(md.find("## Small instances (n < 100)") != std::string::npos);
    CHECK(md.find("## Medium instances (100 <= n < 1000)") != std::string::npos);
    CHECK(md.find("## Large") == std::string::npos);
    CHECK(md.find("| Dimensions | Best Distance | Best Algorithm | Pheromone Bytes |") !=
          std::string::npos);
    CHECK(md.find("| 52 | 7542.5 | ACS | 21632 |") != std::string::npos);
    CHECK(md.find("| 280 | 2579 | MMAS | 627200 |") != std::string::npos);
    CHECK(md.find("- ACS win percentage: 100.00000%") != std::string::npos);
    CHECK(md.find("- AS win percentage: 0.00000%") != std::string::npos);

    CHECK(render_report(BenchReport{}, ReportFormat::Markdown) ==
          "# ACO benchmark report\n\nNo runs.\n");
}

TEST_CASE("json report round-trips structurally") {
    BenchReport rep;
    rep.rows.push_back({"small1", 52, 7544.365901904087, "ACS", 21632});
    rep.rows.push_back({"big1", 1291, 50801.0, "MMAS", 13333448});
    std::vector<std::string> ensure = {"AS", "ASRank", "MMAS", "ACS"};
    rep.win_percentages = win_percentages(rep.rows, ensure);
    rep.skipped.push_back({"data/missing.tsp", "io: cannot open 'data/missing.tsp'"});

    std::string json = render_report(rep, ReportFormat::Json);
    BenchReport back = parse_report_json(json);
    CHECK(back == rep);

    CHECK(throws_kind(ErrorKind::MalformedHeader, [] { parse_report_json("{not json"); }));
    CHECK(throws_kind(ErrorKind::MalformedHeader, [] { parse_report_json("{\"rows\": 3}"); }));
}

TEST_CASE("csv report quotes fields and orders categories") {
    BenchReport rep;
    rep.rows.push_back({"weird, name", 52, 7542.0, "ACS", 21632});
    std::vector<std::string> ensure = {"ACS"};
    rep.win_percentages = win_percentages(rep.rows, ensure);
    rep.skipped.push_back({"/tmp/x.tsp", "io: cannot open"});

    std::string csv = render_report(rep, ReportFormat::Csv);
    std::string expected =
        "kind,category,instance,dimension,best_distance,best_algorithm,pheromone_bytes,"
        "variant,percentage\n"
        "row,Small,\"weird, name\",52,7542,ACS,21632,,\n"
        "percentage,Small,,,,,,ACS,100\n"
        "skipped,,/tmp/x.tsp,,,,,,io: cannot open\n";
    CHECK(csv == expected);
}
