#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "aco/bench.hpp"
#include "aco/engine.hpp"
#include "aco/oracle.hpp"
#include "aco/tsplib.hpp"

namespace {

namespace fs = std::filesystem;

int exit_code_for(aco::ErrorKind kind) {
    switch (kind) {
    case aco::ErrorKind::InvalidArgument:
    case aco::ErrorKind::Precondition:
        return 1;
    case aco::ErrorKind::MalformedHeader:
    case aco::ErrorKind::UnsupportedFormat:
    case aco::ErrorKind::TruncatedSection:
    case aco::ErrorKind::SizeLimit:
    case aco::ErrorKind::Io:
        return 2;
    case aco::ErrorKind::Internal:
        return 3;
    }
    return 3;
}

/// Writes via a sibling temp file plus rename so readers never see a torn file.
void write_file_atomic(const std::string& path, const std::string& content) {
    fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        if (ec) throw aco::Error(aco::ErrorKind::Io,
                                 "cannot create directory '" + target.parent_path().string() +
                                     "': " + ec.message());
    }
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw aco::Error(aco::ErrorKind::Io, "cannot open '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw aco::Error(aco::ErrorKind::Io, "write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec)
        throw aco::Error(aco::ErrorKind::Io,
                         "cannot move '" + tmp.string() + "' into place: " + ec.message());
}

aco::RoundingMode rounding_from(const std::string& s) {
    if (s == "tsplib") return aco::RoundingMode::TsplibInteger;
    if (s == "real") return aco::RoundingMode::UnroundedReal;
    throw aco::Error(aco::ErrorKind::InvalidArgument,
                     "rounding must be 'tsplib' or 'real', got '" + s + "'");
}

std::string one_based(const std::vector<int>& order) {
    std::ostringstream out;
    for (size_t k = 0; k < order.size(); ++k) {
        if (k) out << ' ';
        out << order[k] + 1;
    }
    return out.str();
}

struct SolveArgs {
    std::string instance;
    std::string variant = "as";
    std::string rounding = "real";
    std::string mmas_best = "iteration";
    std::string output;
    std::uint64_t seed = 0;
    int iterations = 0;
    int ants = 0;
    int rank_cutoff = 0;
    double alpha = 0, beta = 0, rho = 0, tau0 = 0, xi = 0, q0 = 0, q = 0;
    bool elitist_gb = false;
};

int run_solve(const SolveArgs& a, const CLI::App& sub) {
    auto variant = aco::variant_from_name(a.variant);
    if (!variant)
        throw aco::Error(aco::ErrorKind::InvalidArgument, "unknown variant '" + a.variant + "'");

    aco::AcoParams p = aco::default_params(*variant);
    if (sub.count("--iterations")) p.iterations = a.iterations;
    if (sub.count("--ants")) p.num_ants = a.ants;
    if (sub.count("--alpha")) p.alpha = a.alpha;
    if (sub.count("--beta")) p.beta = a.beta;
    if (sub.count("--rho")) p.rho = a.rho;
    if (sub.count("--tau0")) p.tau0 = a.tau0;
    if (sub.count("--xi")) p.xi = a.xi;
    if (sub.count("--q0")) p.q0 = a.q0;
    if (sub.count("--q")) p.deposit_q = a.q;
    if (sub.count("--rank-cutoff")) p.rank_cutoff = a.rank_cutoff;
    if (sub.count("--elitist-gb")) p.elitist_gb = a.elitist_gb;
    if (sub.count("--mmas-best")) {
        if (a.mmas_best == "iteration") p.mmas_best = aco::MmasBest::IterationBest;
        else if (a.mmas_best == "global") p.mmas_best = aco::MmasBest::GlobalBest;
        else
            throw aco::Error(aco::ErrorKind::InvalidArgument,
                             "mmas-best must be 'iteration' or 'global'");
    }
    p.seed = a.seed;
    p.validate();

    aco::RoundingMode mode = rounding_from(a.rounding);
    aco::TspInstance inst = aco::parse_tsplib_file(a.instance, mode);
    aco::DistanceMatrix d = aco::build_distance_matrix(inst);
    std::string name = inst.name.empty() ? fs::path(a.instance).stem().string() : inst.name;

    aco::RunRecord rec = aco::run(d, name, p);

    std::cout << "instance: " << name << " (n=" << d.n << ")\n";
    std::cout << "variant: " << aco::variant_name(*variant) << "\n";
    std::cout << "params: alpha=" << aco::format_double(p.alpha)
              << " beta=" << aco::format_double(p.beta) << " rho=" << aco::format_double(p.rho)
              << " tau0=" << aco::format_double(p.tau0) << " xi=" << aco::format_double(p.xi)
              << " q0=" << aco::format_double(p.q0) << " q=" << aco::format_double(p.deposit_q)
              << " rank_cutoff=" << p.rank_cutoff
              << " elitist_gb=" << (p.elitist_gb ? "true" : "false")
              << " mmas_best=" << (p.mmas_best == aco::MmasBest::IterationBest ? "iteration" : "global")
              << " iterations=" << p.iterations << " ants=" << p.num_ants << " seed=" << p.seed
              << " rounding=" << aco::rounding_mode_name(mode) << "\n";
    std::cout << "best_length: " << aco::format_double(rec.best_tour.length) << "\n";
    std::cout << "tour: " << one_based(rec.best_tour.order) << "\n";

    if (!a.output.empty()) {
        aco::RunRow row = rec.to_row();
        write_file_atomic(a.output, aco::run_csv_to_string({&row, 1}));
    }
    return 0;
}

int run_oracle(const std::string& instance_path, const std::string& rounding,
               const std::string& method) {
    aco::RoundingMode mode = rounding_from(rounding);
    aco::TspInstance inst = aco::parse_tsplib_file(instance_path, mode);
    aco::DistanceMatrix d = aco::build_distance_matrix(inst);
    std::string name = inst.name.empty() ? fs::path(instance_path).stem().string() : inst.name;

    aco::OracleResult res;
    if (method == "enumeration") res = aco::brute_force_optimum(d);
    else res = aco::held_karp_optimum(d);

    std::cout << "instance: " << name << " (n=" << d.n << ")\n";
    std::cout << "method: "
              << (res.method == aco::OracleMethod::Enumeration ? "enumeration" : "held-karp")
              << "\n";
    std::cout << "optimal_length: " << aco::format_double(res.optimal_length) << "\n";
    std::cout << "order: " << one_based(res.optimal_order) << "\n";
    return 0;
}

int run_bench(const std::string& config_path, const std::string& out_dir, int jobs_override,
              bool jobs_given) {
    aco::BenchConfig cfg = aco::parse_bench_config_file(config_path);
    if (jobs_given) cfg.jobs = jobs_override;
    cfg.validate();

    aco::SuiteResult result = aco::run_suite_full(cfg);
    for (const auto& s : result.report.skipped)
        std::cerr << "warning: skipped " << s.path << ": " << s.reason << "\n";
    if (result.raw.empty())
        throw aco::Error(aco::ErrorKind::Io, "no instances could be loaded from '" + config_path + "'");

    fs::path dir(out_dir);
    std::string raw_path = (dir / "raw.csv").string();
    std::string json_path = (dir / "report.json").string();
    std::string md_path = (dir / "report.md").string();
    write_file_atomic(raw_path, aco::run_csv_to_string(result.raw));
    write_file_atomic(json_path, aco::render_report(result.report, aco::ReportFormat::Json));
    write_file_atomic(md_path, aco::render_report(result.report, aco::ReportFormat::Markdown));

    std::cout << "instances: " << result.report.rows.size() << " ("
              << result.report.skipped.size() << " skipped)\n";
    std::cout << "runs: " << result.raw.size() << "\n";
    std::cout << "raw: " << raw_path << "\n";
    std::cout << "report: " << json_path << " " << md_path << "\n";
    return 0;
}

int run_report(const std::string& raw_path, const std::string& format, const std::string& out) {
    std::vector<aco::RunRow> rows = aco::read_run_csv_file(raw_path);
    aco::BenchReport report = aco::aggregate_report(rows);
    aco::ReportFormat fmt = aco::ReportFormat::Markdown;
    if (format == "json") fmt = aco::ReportFormat::Json;
    else if (format == "csv") fmt = aco::ReportFormat::Csv;
    else if (format != "md")
        throw aco::Error(aco::ErrorKind::InvalidArgument,
                         "format must be md, json, or csv, got '" + format + "'");
    std::string text = aco::render_report(report, fmt);
    if (out.empty()) std::cout << text;
    else write_file_atomic(out, text);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ant colony optimization toolkit for TSPLIB instances"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand("solve", "Run one ACO variant on one instance");
    solve->add_option("instance", solve_args.instance, "TSPLIB instance file")->required();
    solve->add_option("--variant", solve_args.variant, "as | asrank | mmas | acs");
    solve->add_option("--seed", solve_args.seed, "RNG seed");
    solve->add_option("--iterations", solve_args.iterations, "iteration count");
    solve->add_option("--ants", solve_args.ants, "ants per iteration");
    solve->add_option("--alpha", solve_args.alpha, "pheromone exponent");
    solve->add_option("--beta", solve_args.beta, "heuristic exponent");
    solve->add_option("--rho", solve_args.rho, "evaporation rate");
    solve->add_option("--tau0", solve_args.tau0, "initial pheromone");
    solve->add_option("--xi", solve_args.xi, "ACS local evaporation");
    solve->add_option("--q0", solve_args.q0, "ACS exploitation probability");
    solve->add_option("--q", solve_args.q, "deposit numerator Q");
    solve->add_option("--rank-cutoff", solve_args.rank_cutoff, "ASRank w");
    solve->add_flag("--elitist-gb", solve_args.elitist_gb, "ASRank global-best deposit");
    solve->add_option("--mmas-best", solve_args.mmas_best, "iteration | global");
    solve->add_option("--rounding", solve_args.rounding, "tsplib | real");
    solve->add_option("--output", solve_args.output, "write a one-row run CSV here");

    std::string oracle_instance, oracle_rounding = "real", oracle_method = "auto";
    CLI::App* oracle = app.add_subcommand("oracle", "Exact optimum for a small instance");
    oracle->add_option("instance", oracle_instance, "TSPLIB instance file")->required();
    oracle->add_option("--rounding", oracle_rounding, "tsplib | real");
    oracle->add_option("--method", oracle_method, "auto | enumeration | held-karp")
        ->check(CLI::IsMember({"auto", "enumeration", "held-karp"}));

    std::string bench_config, bench_out;
    int bench_jobs = 1;
    CLI::App* bench = app.add_subcommand("bench", "Run a benchmark suite from a config file");
    bench->add_option("config", bench_config, "suite config file")->required();
    bench->add_option("--out", bench_out, "output directory")->required();
    bench->add_option("--jobs", bench_jobs, "parallel runs");

    std::string report_raw, report_format = "md", report_out;
    CLI::App* report = app.add_subcommand("report", "Re-render a report from a raw run CSV");
    report->add_option("raw", report_raw, "raw run CSV")->required();
    report->add_option("--format", report_format, "md | json | csv")
        ->check(CLI::IsMember({"md", "json", "csv"}));
    report->add_option("--out", report_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve->parsed()) return run_solve(solve_args, *solve);
        if (oracle->parsed()) return run_oracle(oracle_instance, oracle_rounding, oracle_method);
        if (bench->parsed())
            return run_bench(bench_config, bench_out, bench_jobs, bench->count("--jobs") > 0);
        if (report->parsed()) return run_report(report_raw, report_format, report_out);
    } catch (const aco::Error& e) {
        std::cerr << "error: " << aco::error_kind_name(e.kind()) << ": " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
