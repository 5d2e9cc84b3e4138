#include "aco/tsplib.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <system_error>

namespace aco {

namespace {

std::string trim(std::string_view s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string to_upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

[[noreturn]] void fail(ErrorKind kind, int line, const std::string& msg) {
    throw Error(kind, msg + " (line " + std::to_string(line) + ")");
}

bool parse_double(std::string_view token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

bool parse_int(std::string_view token, long long& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    return tokens;
}

enum class ExplicitFormat { FullMatrix, UpperRow, LowerRow, UpperDiagRow, LowerDiagRow };

size_t expected_weight_count(ExplicitFormat fmt, int n) {
    const size_t un = static_cast<size_t>(n);
    switch (fmt) {
    case ExplicitFormat::FullMatrix: return un * un;
    case ExplicitFormat::UpperRow:
    case ExplicitFormat::LowerRow: return un * (un - 1) / 2;
    case ExplicitFormat::UpperDiagRow:
    case ExplicitFormat::LowerDiagRow: return un * (un + 1) / 2;
    }
    return 0;
}

Matrix expand_weights(const std::vector<double>& w, int n, ExplicitFormat fmt) {
    Matrix m = Matrix::Zero(n, n);
    size_t idx = 0;
    switch (fmt) {
    case ExplicitFormat::FullMatrix:
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = w[idx++];
        break;
    case ExplicitFormat::UpperRow:
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                m(i, j) = w[idx];
                m(j, i) = w[idx];
                ++idx;
            }
        break;
    case ExplicitFormat::LowerRow:
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) {
                m(i, j) = w[idx];
                m(j, i) = w[idx];
                ++idx;
            }
        break;
    case ExplicitFormat::UpperDiagRow:
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                m(i, j) = w[idx];
                m(j, i) = w[idx];
                ++idx;
            }
        break;
    case ExplicitFormat::LowerDiagRow:
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                m(i, j) = w[idx];
                m(j, i) = w[idx];
                ++idx;
            }
        break;
    }
    return m;
}

struct LineReader {
    std::istream& in;
    int line_no = 0;

    bool next(std::string& out) {
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_no;
            out = trim(raw);
            if (!out.empty()) return true;
        }
        return false;
    }
};

constexpr double kGeoPi = 3.141592;
constexpr double kGeoRadius = 6378.388;

/// DDD.MMM to radians; the degree part is the truncated integer part.
double geo_radians(double coord) {
    double deg = std::trunc(coord);
    double min = coord - deg;
    return kGeoPi * (deg + 5.0 * min / 3.0) / 180.0;
}

} // namespace

double nint(double x) { return std::round(x); }

double euc2d_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& q, RoundingMode mode) {
    double dist = (p - q).norm();
    return mode == RoundingMode::TsplibInteger ? nint(dist) : dist;
}

double ceil2d_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
    return std::ceil((p - q).norm());
}

double att_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& q, RoundingMode mode) {
    double dx = p.x() - q.x();
    double dy = p.y() - q.y();
    double r = std::sqrt((dx * dx + dy * dy) / 10.0);
    if (mode == RoundingMode::UnroundedReal) return r;
    double t = nint(r);
    return t < r ? t + 1.0 : t;
}

double geo_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
    if (p.x() == q.x() && p.y() == q.y()) return 0.0;
    double lat_p = geo_radians(p.x());
    double lon_p = geo_radians(p.y());
    double lat_q = geo_radians(q.x());
    double lon_q = geo_radians(q.y());
    double q1 = std::cos(lon_p - lon_q);
    double q2 = std::cos(lat_p - lat_q);
    double q3 = std::cos(lat_p + lat_q);
    double arg = 0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3);
    arg = std::clamp(arg, -1.0, 1.0);
    return std::floor(kGeoRadius * std::acos(arg) + 1.0);
}

TspInstance parse_tsplib(std::istream& in, RoundingMode mode) {
    LineReader reader{in};
    std::map<std::string, std::string> header;
    std::vector<std::array<double, 3>> coord_rows;
    std::vector<double> weights;
    bool saw_coord_section = false;
    bool saw_weight_section = false;

    auto header_int = [&](const std::string& key, int line) -> long long {
        auto it = header.find(key);
        if (it == header.end()) fail(ErrorKind::MalformedHeader, line, "missing " + key);
        long long v = 0;
        if (!parse_int(trim(it->second), v))
            fail(ErrorKind::MalformedHeader, line, key + " is not an integer: '" + it->second + "'");
        return v;
    };

    auto dimension_at = [&](int line) -> int {
        long long v = header_int("DIMENSION", line);
        if (v < 3)
            fail(ErrorKind::MalformedHeader, line,
                 "DIMENSION must be at least 3, got " + std::to_string(v));
        if (v > std::numeric_limits<int>::max())
            fail(ErrorKind::SizeLimit, line, "DIMENSION too large: " + std::to_string(v));
        return static_cast<int>(v);
    };

    auto explicit_format_at = [&](int line) -> ExplicitFormat {
        auto it = header.find("EDGE_WEIGHT_FORMAT");
        if (it == header.end())
            fail(ErrorKind::MalformedHeader, line, "missing EDGE_WEIGHT_FORMAT");
        std::string fmt = to_upper(trim(it->second));
        if (fmt == "FULL_MATRIX") return ExplicitFormat::FullMatrix;
        if (fmt == "UPPER_ROW") return ExplicitFormat::UpperRow;
        if (fmt == "LOWER_ROW") return ExplicitFormat::LowerRow;
        if (fmt == "UPPER_DIAG_ROW") return ExplicitFormat::UpperDiagRow;
        if (fmt == "LOWER_DIAG_ROW") return ExplicitFormat::LowerDiagRow;
        fail(ErrorKind::UnsupportedFormat, line, "unsupported EDGE_WEIGHT_FORMAT '" + fmt + "'");
    };

    std::string line;
    while (reader.next(line)) {
        std::string token = to_upper(line);
        if (token == "EOF") break;

        if (token == "NODE_COORD_SECTION") {
            const int n = dimension_at(reader.line_no);
            saw_coord_section = true;
            for (int row = 0; row < n; ++row) {
                std::string coord_line;
                if (!reader.next(coord_line))
                    fail(ErrorKind::TruncatedSection, reader.line_no,
                         "NODE_COORD_SECTION ended after " + std::to_string(row) + " of " +
                             std::to_string(n) + " rows");
                auto tokens = split_ws(coord_line);
                if (tokens.size() != 3)
                    fail(ErrorKind::TruncatedSection, reader.line_no,
                         "node row needs 3 fields (label x y), got " +
                             std::to_string(tokens.size()));
                std::array<double, 3> vals{};
                for (int k = 0; k < 3; ++k)
                    if (!parse_double(tokens[k], vals[k]))
                        fail(ErrorKind::TruncatedSection, reader.line_no,
                             "bad numeric field '" + tokens[k] + "' in node row");
                coord_rows.push_back(vals);
            }
            continue;
        }

        if (token == "EDGE_WEIGHT_SECTION") {
            const int n = dimension_at(reader.line_no);
            const ExplicitFormat fmt = explicit_format_at(reader.line_no);
            const size_t expected = expected_weight_count(fmt, n);
            saw_weight_section = true;
            weights.reserve(expected);
            while (weights.size() < expected) {
                std::string weight_line;
                if (!reader.next(weight_line))
                    fail(ErrorKind::TruncatedSection, reader.line_no,
                         "EDGE_WEIGHT_SECTION ended after " + std::to_string(weights.size()) +
                             " of " + std::to_string(expected) + " values");
                for (const auto& tok : split_ws(weight_line)) {
                    double v = 0.0;
                    if (!parse_double(tok, v))
                        fail(ErrorKind::TruncatedSection, reader.line_no,
                             "bad weight token '" + tok + "'");
                    if (!std::isfinite(v) || v < 0.0)
                        fail(ErrorKind::MalformedHeader, reader.line_no,
                             "edge weights must be finite and nonnegative, got '" + tok + "'");
                    if (weights.size() == expected)
                        fail(ErrorKind::TruncatedSection, reader.line_no,
                             "EDGE_WEIGHT_SECTION holds more than " + std::to_string(expected) +
                                 " values");
                    weights.push_back(v);
                }
            }
            continue;
        }

        if (token == "DISPLAY_DATA_SECTION") {
            const int n = dimension_at(reader.line_no);
            for (int row = 0; row < n; ++row) {
                std::string skip_line;
                if (!reader.next(skip_line))
                    fail(ErrorKind::TruncatedSection, reader.line_no,
                         "DISPLAY_DATA_SECTION ended after " + std::to_string(row) + " of " +
                             std::to_string(n) + " rows");
            }
            continue;
        }

        auto colon = line.find(':');
        if (colon != std::string::npos) {
            std::string key = to_upper(trim(line.substr(0, colon)));
            std::string value = trim(line.substr(colon + 1));
            if (key.empty())
                fail(ErrorKind::MalformedHeader, reader.line_no, "empty header key");
            header[key] = value;
            continue;
        }

        if (token.size() >= 8 && token.substr(token.size() - 8) == "_SECTION")
            fail(ErrorKind::UnsupportedFormat, reader.line_no,
                 "unsupported section '" + token + "'");
        fail(ErrorKind::MalformedHeader, reader.line_no, "unrecognized line '" + line + "'");
    }

    if (auto it = header.find("TYPE"); it != header.end()) {
        std::string type = to_upper(trim(it->second));
        if (type != "TSP" && type != "ATSP")
            throw Error(ErrorKind::UnsupportedFormat, "unsupported TYPE '" + type + "'");
    }

    TspInstance inst;
    inst.rounding_mode = mode;
    if (auto it = header.find("NAME"); it != header.end()) inst.name = it->second;
    inst.dimension = dimension_at(reader.line_no);

    auto ew_it = header.find("EDGE_WEIGHT_TYPE");
    if (ew_it == header.end())
        throw Error(ErrorKind::MalformedHeader, "missing EDGE_WEIGHT_TYPE");
    std::string ew = to_upper(trim(ew_it->second));
    if (ew == "EUC_2D") inst.weight_kind = WeightKind::Euc2d;
    else if (ew == "CEIL_2D") inst.weight_kind = WeightKind::Ceil2d;
    else if (ew == "ATT") inst.weight_kind = WeightKind::Att;
    else if (ew == "GEO") inst.weight_kind = WeightKind::Geo;
    else if (ew == "EXPLICIT") inst.weight_kind = WeightKind::Explicit;
    else throw Error(ErrorKind::UnsupportedFormat, "unsupported EDGE_WEIGHT_TYPE '" + ew + "'");

    if (inst.weight_kind == WeightKind::Explicit) {
        if (!saw_weight_section)
            throw Error(ErrorKind::MalformedHeader, "missing EDGE_WEIGHT_SECTION");
        inst.explicit_weights =
            expand_weights(weights, inst.dimension, explicit_format_at(reader.line_no));
    } else {
        if (!saw_coord_section)
            throw Error(ErrorKind::MalformedHeader, "missing NODE_COORD_SECTION");
        inst.nodes.assign(static_cast<size_t>(inst.dimension), Eigen::Vector2d::Zero());
        std::vector<char> seen(static_cast<size_t>(inst.dimension), 0);
        for (const auto& row : coord_rows) {
            double label_raw = row[0];
            long long label = static_cast<long long>(label_raw);
            if (static_cast<double>(label) != label_raw || label < 1 || label > inst.dimension)
                throw Error(ErrorKind::MalformedHeader,
                            "node label out of range 1.." + std::to_string(inst.dimension));
            size_t idx = static_cast<size_t>(label - 1);
            if (seen[idx])
                throw Error(ErrorKind::MalformedHeader,
                            "duplicate node label " + std::to_string(label));
            seen[idx] = 1;
            if (!std::isfinite(row[1]) || !std::isfinite(row[2]))
                throw Error(ErrorKind::MalformedHeader, "non-finite node coordinate");
            inst.nodes[idx] = Eigen::Vector2d(row[1], row[2]);
        }
    }
    return inst;
}

TspInstance parse_tsplib_file(const std::string& path, RoundingMode mode) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    try {
        return parse_tsplib(in, mode);
    } catch (const Error& e) {
        throw Error(e.kind(), path + ": " + e.what());
    }
}

std::string write_tsplib(const TspInstance& inst) {
    std::ostringstream out;
    out << "NAME: " << inst.name << "\n";
    out << "TYPE: TSP\n";
    out << "DIMENSION: " << inst.dimension << "\n";
    out << "EDGE_WEIGHT_TYPE: " << weight_kind_name(inst.weight_kind) << "\n";
    if (inst.weight_kind == WeightKind::Explicit) {
        out << "EDGE_WEIGHT_FORMAT: FULL_MATRIX\n";
        out << "EDGE_WEIGHT_SECTION\n";
        for (int i = 0; i < inst.dimension; ++i) {
            for (int j = 0; j < inst.dimension; ++j) {
                if (j) out << ' ';
                out << format_double(inst.explicit_weights(i, j));
            }
            out << '\n';
        }
    } else {
        out << "NODE_COORD_SECTION\n";
        for (int i = 0; i < inst.dimension; ++i) {
            out << (i + 1) << ' ' << format_double(inst.nodes[i].x()) << ' '
                << format_double(inst.nodes[i].y()) << '\n';
        }
    }
    out << "EOF\n";
    return out.str();
}

std::string format_double(double x) {
    std::array<char, 64> buf;
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

void write_run_csv(std::span<const RunRow> rows, std::ostream& out) {
    if (rows.empty())
        throw Error(ErrorKind::Precondition, "run CSV requires at least one row");
    out << kRunCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.instance << ',' << r.dimension << ',' << r.algorithm << ',' << r.seed << ','
            << r.run_index << ',' << format_double(r.best_length) << ',' << r.iterations << ','
            << format_double(r.wall_time_ms) << ',' << r.pheromone_bytes << '\n';
    }
}

std::string run_csv_to_string(std::span<const RunRow> rows) {
    std::ostringstream out;
    write_run_csv(rows, out);
    return out.str();
}

std::vector<RunRow> read_run_csv(std::istream& in) {
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line))
        throw Error(ErrorKind::MalformedHeader, "empty run CSV");
    ++line_no;
    if (trim(line) != kRunCsvHeader)
        throw Error(ErrorKind::MalformedHeader, "run CSV header mismatch: '" + line + "'");

    std::vector<RunRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        std::vector<std::string> fields;
        size_t start = 0;
        while (true) {
            size_t comma = trimmed.find(',', start);
            if (comma == std::string::npos) {
                fields.push_back(trimmed.substr(start));
                break;
            }
            fields.push_back(trimmed.substr(start, comma - start));
            start = comma + 1;
        }
        if (fields.size() != 9)
            fail(ErrorKind::TruncatedSection, line_no,
                 "run CSV row needs 9 fields, got " + std::to_string(fields.size()));
        RunRow r;
        r.instance = fields[0];
        r.algorithm = fields[2];
        long long dim = 0, run_index = 0, iterations = 0, bytes = 0;
        unsigned long long seed = 0;
        double best = 0.0, wall = 0.0;
        auto want_int = [&](const std::string& f, long long& v, const char* what) {
            if (!parse_int(f, v))
                fail(ErrorKind::MalformedHeader, line_no,
                     std::string("bad ") + what + " '" + f + "'");
        };
        want_int(fields[1], dim, "dimension");
        {
            const char* first = fields[3].data();
            const char* last = first + fields[3].size();
            auto res = std::from_chars(first, last, seed);
            if (res.ec != std::errc() || res.ptr != last)
                fail(ErrorKind::MalformedHeader, line_no, "bad seed '" + fields[3] + "'");
        }
        want_int(fields[4], run_index, "run_index");
        if (!parse_double(fields[5], best))
            fail(ErrorKind::MalformedHeader, line_no, "bad best_length '" + fields[5] + "'");
        want_int(fields[6], iterations, "iterations");
        if (!parse_double(fields[7], wall))
            fail(ErrorKind::MalformedHeader, line_no, "bad wall_time_ms '" + fields[7] + "'");
        want_int(fields[8], bytes, "pheromone_bytes");
        r.dimension = static_cast<int>(dim);
        r.seed = seed;
        r.run_index = static_cast<int>(run_index);
        r.best_length = best;
        r.iterations = static_cast<int>(iterations);
        r.wall_time_ms = wall;
        r.pheromone_bytes = bytes;
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<RunRow> read_run_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    return read_run_csv(in);
}

} // namespace aco
