#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "obliq/errors.hpp"
#include "obliq/estimators.hpp"
#include "obliq/measurement_error.hpp"
#include "obliq/simulation.hpp"
#include "obliq/summary_stats.hpp"
#include "obliq/tables.hpp"

// File formats of the command-line surface: `x,y` CSV ingestion, the flat
// key = value simulation config, and CSV / Markdown / JSON-lines report
// rendering. All numeric text is locale-independent ('.' decimal separator);
// machine formats use shortest round-trip formatting so a written report
// re-parses to the same doubles.

namespace obliq::io {

struct CsvError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

enum class Format { Csv, Markdown, JsonLines };

inline Format parse_format(std::string_view name) {
    if (name == "csv") return Format::Csv;
    if (name == "md" || name == "markdown") return Format::Markdown;
    if (name == "jsonl") return Format::JsonLines;
    throw ConfigError("unknown format: " + std::string(name));
}

inline const char* format_extension(Format f) {
    switch (f) {
        case Format::Csv: return "csv";
        case Format::Markdown: return "md";
        case Format::JsonLines: return "jsonl";
    }
    return "txt";
}

namespace detail {

inline std::string_view trim(std::string_view sv) {
    while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t' || sv.front() == '\r')) {
        sv.remove_prefix(1);
    }
    while (!sv.empty() && (sv.back() == ' ' || sv.back() == '\t' || sv.back() == '\r')) {
        sv.remove_suffix(1);
    }
    return sv;
}

inline bool parse_double(std::string_view token, double& out) {
    token = trim(token);
    if (token.empty()) return false;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

inline bool parse_u64(std::string_view token, std::uint64_t& out) {
    token = trim(token);
    if (token.empty()) return false;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

inline std::vector<std::string_view> split(std::string_view sv, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = sv.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(sv.substr(start));
            break;
        }
        parts.push_back(sv.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

}  // namespace detail

/// Shortest representation that round-trips through from_chars exactly.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

/// Fixed-decimal display rendering for the Markdown format.
inline std::string format_display(double v, int decimals = 4) {
    if (std::isnan(v)) return "NA";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
    if (ec != std::errc()) return format_double(v);
    return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// CSV sample ingestion: header `x,y`, two numeric columns, '#' comments and
// blank lines skipped. Errors name the offending 1-based line.

inline PairedSample read_xy_csv(std::istream& in) {
    PairedSample sample;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view sv = detail::trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        if (!header_seen) {
            const auto fields = detail::split(sv, ',');
            if (fields.size() != 2 || detail::trim(fields[0]) != "x" ||
                detail::trim(fields[1]) != "y") {
                throw CsvError("row " + std::to_string(line_no) + ": expected header \"x,y\"");
            }
            header_seen = true;
            continue;
        }
        const auto fields = detail::split(sv, ',');
        if (fields.size() != 2) {
            throw CsvError("row " + std::to_string(line_no) + ": expected 2 fields, got " +
                           std::to_string(fields.size()));
        }
        double x, y;
        if (!detail::parse_double(fields[0], x) || !std::isfinite(x)) {
            throw CsvError("row " + std::to_string(line_no) + ": non-numeric x value");
        }
        if (!detail::parse_double(fields[1], y) || !std::isfinite(y)) {
            throw CsvError("row " + std::to_string(line_no) + ": non-numeric y value");
        }
        sample.xs.push_back(x);
        sample.ys.push_back(y);
    }
    if (!header_seen) throw CsvError("empty input: missing \"x,y\" header");
    if (sample.size() < 3) {
        throw CsvError("need at least 3 data rows, got " + std::to_string(sample.size()));
    }
    return sample;
}

inline PairedSample read_xy_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open input file: " + path);
    return read_xy_csv(in);
}

// ---------------------------------------------------------------------------
// Simulation config: flat `key = value` lines.
//
// Keys: distribution (exponential|normal), mu_x, sd_x (normal only), beta0,
// beta1, sigma_delta, sigma_tau, n, replications, seed, assumed_kappas
// (comma list), estimators (comma list of method names, or "all").

inline Method parse_method(std::string_view name) {
    for (Method m : {Method::VER, Method::HOR, Method::GM, Method::PER, Method::MLE,
                     Method::COPAS, Method::MOM_RAW, Method::MOM, Method::MD}) {
        if (name == method_name(m)) return m;
    }
    throw ConfigError("unknown estimator name: " + std::string(name));
}

inline SimulationConfig parse_config(std::istream& in) {
    SimulationConfig config;
    bool seed_set = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view sv = detail::trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        const std::size_t eq = sv.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key{detail::trim(sv.substr(0, eq))};
        const std::string_view value = detail::trim(sv.substr(eq + 1));
        const auto bad_value = [&]() -> ConfigError {
            return ConfigError("invalid value for key \"" + key + "\": " + std::string(value));
        };
        const auto as_double = [&] {
            double v;
            if (!detail::parse_double(value, v) || !std::isfinite(v)) throw bad_value();
            return v;
        };
        const auto as_u64 = [&] {
            std::uint64_t v;
            if (!detail::parse_u64(value, v)) throw bad_value();
            return v;
        };

        if (key == "distribution") {
            if (value == "exponential") {
                config.x_distribution = XDistribution::Exponential;
            } else if (value == "normal") {
                config.x_distribution = XDistribution::Normal;
            } else {
                throw bad_value();
            }
        } else if (key == "mu_x") {
            config.mu_x = as_double();
        } else if (key == "sd_x") {
            config.sd_x = as_double();
        } else if (key == "beta0") {
            config.beta0 = as_double();
        } else if (key == "beta1") {
            config.beta1 = as_double();
        } else if (key == "sigma_delta") {
            config.sigma_delta = as_double();
        } else if (key == "sigma_tau") {
            config.sigma_tau = as_double();
        } else if (key == "n") {
            config.n = static_cast<std::size_t>(as_u64());
        } else if (key == "replications") {
            config.replications = static_cast<std::size_t>(as_u64());
        } else if (key == "seed") {
            config.seed = as_u64();
            seed_set = true;
        } else if (key == "assumed_kappas") {
            config.assumed_kappas.clear();
            for (std::string_view part : detail::split(value, ',')) {
                double v;
                if (!detail::parse_double(part, v) || !(v > 0.0)) throw bad_value();
                config.assumed_kappas.push_back(v);
            }
        } else if (key == "estimators") {
            config.estimators.clear();
            if (value == "all") {
                config.estimators = default_study_estimators();
                config.estimators.push_back(Method::MLE);
            } else {
                for (std::string_view part : detail::split(value, ',')) {
                    config.estimators.push_back(parse_method(detail::trim(part)));
                }
            }
        } else {
            throw ConfigError("unknown key \"" + key + "\"");
        }
    }
    if (!seed_set) {
        // OBLIQ_SEED is the fallback when the file does not pin one.
        if (const char* env = std::getenv("OBLIQ_SEED")) {
            std::uint64_t v;
            if (!detail::parse_u64(env, v)) {
                throw ConfigError("invalid value for OBLIQ_SEED: " + std::string(env));
            }
            config.seed = v;
        }
    }
    return config;
}

inline SimulationConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

// ---------------------------------------------------------------------------
// Report documents: a header, typed cells, and leading metadata lines.

struct Cell {
    enum class Kind { Text, Number };
    Kind kind = Kind::Text;
    std::string text;
    double value = 0.0;

    static Cell str(std::string s) { return Cell{Kind::Text, std::move(s), 0.0}; }
    static Cell num(double v) { return Cell{Kind::Number, {}, v}; }
    static Cell num(std::optional<double> v) {
        return v ? num(*v) : Cell{Kind::Number, {}, std::numeric_limits<double>::quiet_NaN()};
    }
};

struct Document {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

inline std::string render(const Document& doc, Format format) {
    std::ostringstream out;
    switch (format) {
        case Format::Csv: {
            for (const auto& [k, v] : doc.metadata) out << "# " << k << " = " << v << '\n';
            for (std::size_t i = 0; i < doc.header.size(); ++i) {
                out << (i ? "," : "") << doc.header[i];
            }
            out << '\n';
            for (const auto& row : doc.rows) {
                for (std::size_t i = 0; i < row.size(); ++i) {
                    if (i) out << ',';
                    out << (row[i].kind == Cell::Kind::Text ? row[i].text
                                                            : format_double(row[i].value));
                }
                out << '\n';
            }
            break;
        }
        case Format::Markdown: {
            for (const auto& [k, v] : doc.metadata) out << "- " << k << ": " << v << '\n';
            if (!doc.metadata.empty()) out << '\n';
            out << '|';
            for (const auto& h : doc.header) out << ' ' << h << " |";
            out << "\n|";
            for (std::size_t i = 0; i < doc.header.size(); ++i) out << "---|";
            out << '\n';
            for (const auto& row : doc.rows) {
                out << '|';
                for (const auto& cell : row) {
                    out << ' '
                        << (cell.kind == Cell::Kind::Text ? cell.text : format_display(cell.value))
                        << " |";
                }
                out << '\n';
            }
            break;
        }
        case Format::JsonLines: {
            if (!doc.metadata.empty()) {
                nlohmann::json meta;
                for (const auto& [k, v] : doc.metadata) meta[k] = v;
                out << nlohmann::json{{"meta", meta}}.dump() << '\n';
            }
            for (const auto& row : doc.rows) {
                nlohmann::json obj;
                for (std::size_t i = 0; i < row.size() && i < doc.header.size(); ++i) {
                    if (row[i].kind == Cell::Kind::Text) {
                        obj[doc.header[i]] = row[i].text;
                    } else if (std::isfinite(row[i].value)) {
                        obj[doc.header[i]] = row[i].value;
                    } else {
                        obj[doc.header[i]] = format_double(row[i].value);
                    }
                }
                out << obj.dump() << '\n';
            }
            break;
        }
    }
    return out.str();
}

/// Re-parse a CSV document produced by render(). Used by the round-trip
/// checks; skips '#' metadata lines.
inline Document parse_csv_document(std::istream& in) {
    Document doc;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        const std::string_view sv = detail::trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        const auto fields = detail::split(sv, ',');
        if (!header_seen) {
            for (const auto& f : fields) doc.header.emplace_back(detail::trim(f));
            header_seen = true;
            continue;
        }
        std::vector<Cell> row;
        for (const auto& f : fields) {
            double v;
            if (detail::parse_double(f, v)) {
                row.push_back(Cell::num(v));
            } else {
                row.push_back(Cell::str(std::string(detail::trim(f))));
            }
        }
        doc.rows.push_back(std::move(row));
    }
    return doc;
}

// ---------------------------------------------------------------------------
// Report builders.

inline Document build_fit_document(const SummaryStats& stats,
                                   const std::vector<SlopeFit>& fits) {
    Document doc;
    doc.metadata = {{"n", std::to_string(stats.n)},
                    {"x_bar", format_double(stats.x_bar)},
                    {"y_bar", format_double(stats.y_bar)},
                    {"sxx", format_double(stats.sxx)},
                    {"syy", format_double(stats.syy)},
                    {"sxy", format_double(stats.sxy)},
                    {"rho", format_double(stats.rho)}};
    doc.header = {"method",         "slope",        "intercept",   "lambda", "theta_deg",
                  "sigma_delta_sq", "sigma_tau_sq", "kappa_tilde", "notes"};
    for (const SlopeFit& fit : fits) {
        std::vector<Cell> row;
        row.push_back(Cell::str(method_name(fit.method)));
        if (!fit.ok) {
            for (int i = 0; i < 7; ++i) row.push_back(Cell::str(""));
            row.push_back(Cell::str(fit.notes));
            doc.rows.push_back(std::move(row));
            continue;
        }
        row.push_back(Cell::num(fit.beta1));
        row.push_back(Cell::num(fit.beta0));
        row.push_back(Cell::num(fit.lambda));
        row.push_back(Cell::num(fit.theta_deg));
        if (fit.beta1 != 0.0 && std::isfinite(fit.beta1)) {
            const ErrorVarianceEstimates e = madansky_variances(fit.beta1, stats);
            row.push_back(Cell::num(e.sigma_delta_sq));
            row.push_back(Cell::num(e.sigma_tau_sq));
            row.push_back(Cell::num(e.admissible ? e.kappa_tilde
                                                 : std::numeric_limits<double>::quiet_NaN()));
        } else {
            for (int i = 0; i < 3; ++i) row.push_back(Cell::str(""));
        }
        row.push_back(Cell::str(fit.notes));
        doc.rows.push_back(std::move(row));
    }
    return doc;
}

inline Document build_simulation_document(const SimulationReport& report) {
    const SimulationConfig& c = report.config;
    Document doc;
    doc.metadata = {
        {"distribution",
         c.x_distribution == XDistribution::Exponential ? "exponential" : "normal"},
        {"mu_x", format_double(c.mu_x)},
        {"beta0", format_double(c.beta0)},
        {"beta1", format_double(c.beta1)},
        {"sigma_delta", format_double(c.sigma_delta)},
        {"sigma_tau", format_double(c.sigma_tau)},
        {"n", std::to_string(c.n)},
        {"replications", std::to_string(c.replications)},
        {"seed", std::to_string(c.seed)},
        {"mom_radicand_negative", std::to_string(report.mom_radicand_negative)},
        {"mom_clamped", std::to_string(report.mom_clamped)},
        {"copas_ties", std::to_string(report.copas_ties)},
        {"failed_fits", std::to_string(report.failed_fits)},
    };
    doc.header = {"estimator", "mean_slope", "percent_bias", "mse",
                  "mse_x1e3",  "lambda",     "theta_deg",    "valid_count"};
    const auto find_row = [&](Method m) -> const EstimatorAggregate* {
        for (const auto& row : report.rows) {
            if (row.method == m) return &row;
        }
        return nullptr;
    };
    const auto push_row = [&](const EstimatorAggregate& row) {
        doc.rows.push_back({Cell::str(method_name(row.method)), Cell::num(row.mean_slope),
                            Cell::num(row.percent_bias), Cell::num(row.mse),
                            Cell::num(row.mse_scaled), Cell::num(row.mean_lambda),
                            Cell::num(row.mean_theta_deg),
                            Cell::num(static_cast<double>(row.valid_count))});
    };
    // Canonical row order with the OLS* synthetic row after the vertical fit;
    // estimators outside the canonical list keep their configured order.
    const Method canonical[] = {Method::VER,   Method::HOR, Method::PER,
                                Method::GM,    Method::MLE, Method::MOM_RAW,
                                Method::MOM,   Method::COPAS, Method::MD};
    std::vector<const EstimatorAggregate*> emitted;
    if (const auto* ver = find_row(Method::VER)) {
        push_row(*ver);
        emitted.push_back(ver);
        if (report.ols_star) {
            doc.rows.push_back({Cell::str("ols*"), Cell::str(""),
                                Cell::num(report.ols_star->mean_abs_percent_bias),
                                Cell::num(report.ols_star->mse),
                                Cell::num(report.ols_star->mse_scaled), Cell::str(""),
                                Cell::str(""), Cell::str("")});
        }
    }
    for (Method m : canonical) {
        if (m == Method::VER) continue;
        if (const auto* row = find_row(m)) {
            push_row(*row);
            emitted.push_back(row);
        }
    }
    for (const auto& row : report.rows) {
        bool seen = false;
        for (const auto* e : emitted) seen = seen || (e == &row);
        if (!seen) push_row(row);
    }
    return doc;
}

inline Document build_kappa_document(const KappaBiasMatrix& matrix, std::uint64_t seed) {
    Document doc;
    doc.metadata = {{"seed", std::to_string(seed)}};
    doc.header = {"kappa_assumed", "sigma_delta_sq", "sigma_tau_sq", "kappa_true",
                  "percent_bias"};
    for (std::size_t r = 0; r < matrix.assumed_kappas.size(); ++r) {
        for (std::size_t c = 0; c < matrix.variance_pairs.size(); ++c) {
            const auto& [delta_sq, tau_sq] = matrix.variance_pairs[c];
            doc.rows.push_back({Cell::num(matrix.assumed_kappas[r]), Cell::num(delta_sq),
                                Cell::num(tau_sq), Cell::num(tau_sq / delta_sq),
                                Cell::num(matrix.percent_bias[r][c])});
        }
    }
    return doc;
}

inline Document build_comparison_document(const tables::ComparisonTable& table) {
    Document doc;
    doc.metadata = {{"table", table.name}, {"title", table.title}};
    doc.header = table.key_columns;
    doc.header.insert(doc.header.end(), {"computed", "published", "abs_diff"});
    for (const auto& entry : table.entries) {
        std::vector<Cell> row;
        for (const auto& k : entry.key) row.push_back(Cell::str(k));
        row.push_back(Cell::num(entry.computed));
        row.push_back(Cell::num(entry.published));
        double diff = std::abs(entry.computed - entry.published);
        if (std::isinf(entry.computed) && std::isinf(entry.published) &&
            entry.computed == entry.published) {
            diff = 0.0;  // matching infinities count as exact
        }
        row.push_back(Cell::num(diff));
        doc.rows.push_back(std::move(row));
    }
    return doc;
}

}  // namespace obliq::io
