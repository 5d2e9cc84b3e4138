#include "aco/bench.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

namespace aco {

namespace {

std::string trim(std::string_view s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

[[noreturn]] void fail_line(int line, const std::string& msg) {
    throw Error(ErrorKind::InvalidArgument, msg + " (line " + std::to_string(line) + ")");
}

double parse_double_or_fail(const std::string& value, int line, const std::string& key) {
    double v = 0.0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size())
        fail_line(line, "key '" + key + "' needs a number, got '" + value + "'");
    return v;
}

long long parse_int_or_fail(const std::string& value, int line, const std::string& key) {
    long long v = 0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size())
        fail_line(line, "key '" + key + "' needs an integer, got '" + value + "'");
    return v;
}

bool parse_bool_or_fail(const std::string& value, int line, const std::string& key) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    fail_line(line, "key '" + key + "' needs true or false, got '" + value + "'");
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string pct_display(double p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.5f", p);
    return buf;
}

const char* category_bounds(const std::string& name) {
    if (name == "Small") return "n < 100";
    if (name == "Medium") return "100 <= n < 1000";
    return "n >= 1000";
}

} // namespace

SizeCategory size_category(int dimension) {
    if (dimension < 100) return SizeCategory::Small;
    if (dimension < 1000) return SizeCategory::Medium;
    return SizeCategory::Large;
}

std::int64_t pheromone_footprint(int dimension) {
    if (dimension < 1)
        throw Error(ErrorKind::InvalidArgument,
                    "dimension must be >= 1, got " + std::to_string(dimension));
    return static_cast<std::int64_t>(dimension) * static_cast<std::int64_t>(dimension) * 8;
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t cell_seed(std::uint64_t base_seed, int run_index, std::string_view instance,
                        std::string_view variant) {
    std::string key;
    key.reserve(instance.size() + variant.size() + 1);
    key.append(instance);
    key.push_back('\x1f');
    key.append(variant);
    return splitmix64((base_seed + static_cast<std::uint64_t>(run_index)) ^ fnv1a64(key));
}

void BenchConfig::validate() const {
    if (repetitions < 1)
        throw Error(ErrorKind::InvalidArgument,
                    "repetitions must be >= 1, got " + std::to_string(repetitions));
    if (variants.empty())
        throw Error(ErrorKind::InvalidArgument, "config needs at least one variant");
    if (jobs < 1)
        throw Error(ErrorKind::InvalidArgument, "jobs must be >= 1, got " + std::to_string(jobs));
    std::set<Variant> seen;
    for (Variant v : variants) {
        if (!seen.insert(v).second)
            throw Error(ErrorKind::InvalidArgument,
                        std::string("duplicate variant '") + variant_name(v) + "'");
        auto it = params.find(v);
        if (it == params.end())
            throw Error(ErrorKind::InvalidArgument,
                        std::string("missing params for variant '") + variant_name(v) + "'");
        it->second.validate();
    }
}

BenchConfig parse_bench_config(std::istream& in, const std::string& base_dir) {
    BenchConfig cfg;
    struct Entry {
        int line;
        std::string key;
        std::string value;
    };
    std::vector<Entry> global;
    std::vector<std::pair<Variant, Entry>> overrides;
    std::optional<Variant> section;

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail_line(line_no, "unterminated section header");
            std::string name = trim(line.substr(1, line.size() - 2));
            auto v = variant_from_name(name);
            if (!v) fail_line(line_no, "unknown variant section '" + name + "'");
            section = *v;
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) fail_line(line_no, "expected key = value, got '" + line + "'");
        Entry e{line_no, trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
        if (e.key.empty()) fail_line(line_no, "empty key");
        if (section) overrides.emplace_back(*section, std::move(e));
        else global.push_back(std::move(e));
    }

    // Globals first, then per-variant sections, so sections win.
    std::vector<Entry> shared_params;
    for (const Entry& e : global) {
        if (e.key == "instance") {
            std::filesystem::path p(e.value);
            if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
            cfg.instances.push_back(p.lexically_normal().string());
        } else if (e.key == "variants") {
            cfg.variants.clear();
            std::stringstream ss(e.value);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                std::string name = trim(tok);
                if (name.empty()) continue;
                auto v = variant_from_name(name);
                if (!v) fail_line(e.line, "unknown variant '" + name + "'");
                cfg.variants.push_back(*v);
            }
            if (cfg.variants.empty()) fail_line(e.line, "variants list is empty");
        } else if (e.key == "repetitions") {
            cfg.repetitions = static_cast<int>(parse_int_or_fail(e.value, e.line, e.key));
        } else if (e.key == "base_seed") {
            cfg.base_seed = static_cast<std::uint64_t>(parse_int_or_fail(e.value, e.line, e.key));
        } else if (e.key == "jobs") {
            cfg.jobs = static_cast<int>(parse_int_or_fail(e.value, e.line, e.key));
        } else if (e.key == "rounding") {
            if (e.value == "tsplib") cfg.rounding = RoundingMode::TsplibInteger;
            else if (e.value == "real") cfg.rounding = RoundingMode::UnroundedReal;
            else fail_line(e.line, "rounding must be 'tsplib' or 'real', got '" + e.value + "'");
        } else if (e.key == "iterations" || e.key == "ants" || e.key == "alpha" ||
                   e.key == "beta" || e.key == "tau0" || e.key == "q") {
            shared_params.push_back(e);
        } else {
            fail_line(e.line, "unknown key '" + e.key + "'");
        }
    }

    if (cfg.variants.empty())
        cfg.variants = {kAllVariants.begin(), kAllVariants.end()};

    auto apply = [](AcoParams& p, const Entry& e) {
        if (e.key == "iterations")
            p.iterations = static_cast<int>(parse_int_or_fail(e.value, e.line, e.key));
        else if (e.key == "ants")
            p.num_ants = static_cast<int>(parse_int_or_fail(e.value, e.line, e.key));
        else if (e.key == "alpha") p.alpha = parse_double_or_fail(e.value, e.line, e.key);
        else if (e.key == "beta") p.beta = parse_double_or_fail(e.value, e.line, e.key);
        else if (e.key == "rho") p.rho = parse_double_or_fail(e.value, e.line, e.key);
        else if (e.key == "tau0") p.tau0 = parse_double_or_fail(e.value, e.line, e.key);
        else if (e.key == "xi") p.xi = parse_double_or_fail(e.value, e.line, e.key);
        else if (e.key == "q0") p.q0 = parse_double_or_fail(e.value, e.line, e.key);
        else if (e.key == "q") p.deposit_q = parse_double_or_fail(e.value, e.line, e.key);
        else if (e.key == "rank_cutoff")
            p.rank_cutoff = static_cast<int>(parse_int_or_fail(e.value, e.line, e.key));
        else if (e.key == "elitist_gb") p.elitist_gb = parse_bool_or_fail(e.value, e.line, e.key);
        else if (e.key == "mmas_best") {
            if (e.value == "iteration") p.mmas_best = MmasBest::IterationBest;
            else if (e.value == "global") p.mmas_best = MmasBest::GlobalBest;
            else fail_line(e.line, "mmas_best must be 'iteration' or 'global', got '" + e.value + "'");
        } else {
            fail_line(e.line, "unknown key '" + e.key + "'");
        }
    };

    for (Variant v : kAllVariants) {
        AcoParams p = default_params(v);
        for (const Entry& e : shared_params) apply(p, e);
        for (const auto& [sv, e] : overrides)
            if (sv == v) apply(p, e);
        cfg.params.emplace(v, p);
    }

    cfg.validate();
    return cfg;
}

BenchConfig parse_bench_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    std::string base_dir = std::filesystem::path(path).parent_path().string();
    try {
        return parse_bench_config(in, base_dir);
    } catch (const Error& e) {
        throw Error(e.kind(), path + ": " + e.what());
    }
}

std::map<std::string, std::map<std::string, double>> win_percentages(
    std::span<const ReportRow> rows, std::span<const std::string> ensure_variants) {
    std::map<std::string, std::pair<int, std::map<std::string, int>>> tally;
    for (const ReportRow& row : rows) {
        auto& entry = tally[size_category_name(size_category(row.dimension))];
        entry.first += 1;
        entry.second[row.best_algorithm] += 1;
    }
    std::map<std::string, std::map<std::string, double>> out;
    for (const auto& [cname, entry] : tally) {
        auto& m = out[cname];
        for (const auto& [name, wins] : entry.second)
            m[name] = 100.0 * static_cast<double>(wins) / static_cast<double>(entry.first);
        for (const auto& name : ensure_variants) m.try_emplace(name, 0.0);
    }
    return out;
}

BenchReport aggregate_report(std::span<const RunRow> raw) {
    BenchReport report;
    std::map<std::string, size_t> index;
    for (const RunRow& r : raw) {
        auto [it, inserted] = index.try_emplace(r.instance, report.rows.size());
        if (inserted) {
            report.rows.push_back(
                {r.instance, r.dimension, r.best_length, r.algorithm, r.pheromone_bytes});
            continue;
        }
        ReportRow& row = report.rows[it->second];
        if (r.dimension != row.dimension)
            throw Error(ErrorKind::InvalidArgument,
                        "conflicting dimensions for instance '" + r.instance + "'");
        // Ties go to the lexicographically first algorithm name.
        if (r.best_length < row.best_distance ||
            (r.best_length == row.best_distance && r.algorithm < row.best_algorithm)) {
            row.best_distance = r.best_length;
            row.best_algorithm = r.algorithm;
        }
    }
    std::set<std::string> names;
    for (const RunRow& r : raw) names.insert(r.algorithm);
    std::vector<std::string> ensure(names.begin(), names.end());
    report.win_percentages = win_percentages(report.rows, ensure);
    return report;
}

SuiteResult run_suite_full(const BenchConfig& config) {
    config.validate();
    SuiteResult out;

    struct Loaded {
        std::string name;
        DistanceMatrix d;
    };
    std::vector<Loaded> loaded;
    for (const std::string& path : config.instances) {
        try {
            TspInstance inst = parse_tsplib_file(path, config.rounding);
            std::string name = inst.name.empty()
                                   ? std::filesystem::path(path).stem().string()
                                   : inst.name;
            loaded.push_back({std::move(name), build_distance_matrix(inst)});
        } catch (const Error& e) {
            out.report.skipped.push_back(
                {path, std::string(error_kind_name(e.kind())) + ": " + e.what()});
        }
    }

    struct Cell {
        const Loaded* inst;
        Variant v;
        int rep;
    };
    std::vector<Cell> cells;
    cells.reserve(loaded.size() * config.variants.size() * static_cast<size_t>(config.repetitions));
    for (const Loaded& l : loaded)
        for (Variant v : config.variants)
            for (int rep = 0; rep < config.repetitions; ++rep) cells.push_back({&l, v, rep});

    out.raw.resize(cells.size());
    std::atomic<size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr first_error;

    auto worker = [&]() {
        while (true) {
            size_t idx = next.fetch_add(1);
            if (idx >= cells.size()) return;
            const Cell& c = cells[idx];
            try {
                AcoParams p = config.params.at(c.v);
                p.seed = cell_seed(config.base_seed, c.rep, c.inst->name, variant_name(c.v));
                RunRecord rec = run(c.inst->d, c.inst->name, p);
                rec.run_index = c.rep;
                out.raw[idx] = rec.to_row();
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    const int jobs = std::max(1, std::min<int>(config.jobs, static_cast<int>(cells.size())));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(jobs));
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    BenchReport agg = aggregate_report(out.raw);
    out.report.rows = std::move(agg.rows);
    out.report.win_percentages = std::move(agg.win_percentages);
    return out;
}

BenchReport run_suite(const BenchConfig& config) { return run_suite_full(config).report; }

std::string render_report(const BenchReport& report, ReportFormat format) {
    static constexpr const char* kCategoryOrder[] = {"Small", "Medium", "Large"};

    if (format == ReportFormat::Json) {
        nlohmann::json j;
        j["rows"] = nlohmann::json::array();
        for (const ReportRow& row : report.rows) {
            j["rows"].push_back({{"instance", row.instance},
                                 {"dimension", row.dimension},
                                 {"best_distance", row.best_distance},
                                 {"best_algorithm", row.best_algorithm},
                                 {"pheromone_bytes", row.pheromone_bytes},
                                 {"category", size_category_name(size_category(row.dimension))}});
        }
        j["win_percentages"] = nlohmann::json::object();
        for (const auto& [cat, m] : report.win_percentages) {
            nlohmann::json jm = nlohmann::json::object();
            for (const auto& [name, pct] : m) jm[name] = pct;
            j["win_percentages"][cat] = jm;
        }
        j["skipped"] = nlohmann::json::array();
        for (const SkippedInstance& s : report.skipped)
            j["skipped"].push_back({{"path", s.path}, {"reason", s.reason}});
        return j.dump(2) + "\n";
    }

    if (format == ReportFormat::Csv) {
        std::ostringstream out;
        out << "kind,category,instance,dimension,best_distance,best_algorithm,pheromone_bytes,"
               "variant,percentage\n";
        for (const char* cat : kCategoryOrder) {
            for (const ReportRow& row : report.rows) {
                if (std::string(size_category_name(size_category(row.dimension))) != cat) continue;
                out << "row," << cat << ',' << csv_quote(row.instance) << ',' << row.dimension
                    << ',' << format_double(row.best_distance) << ',' << row.best_algorithm << ','
                    << row.pheromone_bytes << ",,\n";
            }
            auto it = report.win_percentages.find(cat);
            if (it == report.win_percentages.end()) continue;
            for (const auto& [name, pct] : it->second)
                out << "percentage," << cat << ",,,,,," << name << ',' << format_double(pct)
                    << '\n';
        }
        for (const SkippedInstance& s : report.skipped)
            out << "skipped,," << csv_quote(s.path) << ",,,,,," << csv_quote(s.reason) << '\n';
        return out.str();
    }

    std::ostringstream out;
    out << "# ACO benchmark report\n";
    if (report.rows.empty()) out << "\nNo runs.\n";
    for (const char* cat : kCategoryOrder) {
        bool any = false;
        for (const ReportRow& row : report.rows)
            if (std::string(size_category_name(size_category(row.dimension))) == cat) any = true;
        if (!any) continue;
        out << "\n## " << cat << " instances (" << category_bounds(cat) << ")\n\n";
        out << "| Dimensions | Best Distance | Best Algorithm | Pheromone Bytes |\n";
        out << "| ---: | ---: | :--- | ---: |\n";
        for (const ReportRow& row : report.rows) {
            if (std::string(size_category_name(size_category(row.dimension))) != cat) continue;
            out << "| " << row.dimension << " | " << format_double(row.best_distance) << " | "
                << row.best_algorithm << " | " << row.pheromone_bytes << " |\n";
        }
        auto it = report.win_percentages.find(cat);
        if (it != report.win_percentages.end()) {
            out << '\n';
            for (const auto& [name, pct] : it->second)
                out << "- " << name << " win percentage: " << pct_display(pct) << "%\n";
        }
    }
    if (!report.skipped.empty()) {
        out << "\n## Skipped instances\n\n";
        for (const SkippedInstance& s : report.skipped)
            out << "- " << s.path << ": " << s.reason << '\n';
    }
    return out.str();
}

BenchReport parse_report_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw Error(ErrorKind::MalformedHeader, std::string("report JSON: ") + e.what());
    }
    BenchReport r;
    try {
        for (const auto& row : j.at("rows")) {
            ReportRow rr;
            rr.instance = row.at("instance").get<std::string>();
            rr.dimension = row.at("dimension").get<int>();
            rr.best_distance = row.at("best_distance").get<double>();
            rr.best_algorithm = row.at("best_algorithm").get<std::string>();
            rr.pheromone_bytes = row.at("pheromone_bytes").get<std::int64_t>();
            r.rows.push_back(std::move(rr));
        }
        for (const auto& [cat, m] : j.at("win_percentages").items())
            for (const auto& [name, pct] : m.items())
                r.win_percentages[cat][name] = pct.get<double>();
        for (const auto& s : j.at("skipped"))
            r.skipped.push_back(
                {s.at("path").get<std::string>(), s.at("reason").get<std::string>()});
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorKind::MalformedHeader, std::string("report JSON: ") + e.what());
    }
    return r;
}

} // namespace aco
