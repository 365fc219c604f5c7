// obliq: fit measurement-error slope estimators to CSV data, run seeded
// Monte Carlo studies, and regenerate the built-in validation tables.
//
// Exit codes: 0 success, 2 malformed input, 3 degenerate data, 1 internal.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "obliq/obliq.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitDegenerate = 3;

void write_report(const obliq::io::Document& doc, obliq::io::Format format,
                  const std::filesystem::path& out_dir, const std::string& stem) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path path =
        out_dir / (stem + "." + obliq::io::format_extension(format));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw obliq::Error("cannot write " + path.string());
    out << obliq::io::render(doc, format);
    std::cout << "wrote " << path.string() << '\n';
}

int cmd_fit(const std::string& data_path, std::optional<double> kappa,
            const std::string& out_dir, obliq::io::Format format) {
    const obliq::PairedSample sample = obliq::io::read_xy_csv_file(data_path);
    const obliq::SummaryStats stats = obliq::summarize(sample);
    const obliq::DiagnosticsFlags flags = obliq::validate(stats);
    if (flags.degenerate()) {
        std::cerr << "degenerate data:";
        if (flags.horizontal_undefined) std::cerr << " Sxy=0";
        if (flags.no_x_variation) std::cerr << " Sxx=0";
        if (flags.no_y_variation) std::cerr << " Syy=0";
        std::cerr << '\n';
        return kExitDegenerate;
    }
    if (flags.collinear) {
        std::cerr << "note: data are exactly collinear; all estimators coincide\n";
    }
    const auto fits = obliq::estimate_all(stats, kappa);
    write_report(obliq::io::build_fit_document(stats, fits), format, out_dir, "fit_report");
    return kExitOk;
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed_override,
                 const std::string& out_dir, obliq::io::Format format) {
    obliq::SimulationConfig config = obliq::io::parse_config_file(config_path);
    if (seed_override) {
        config.seed = *seed_override;
    }
    try {
        config.check();
    } catch (const obliq::Error& e) {
        throw obliq::io::ConfigError(e.what());
    }
    const obliq::SimulationReport report = obliq::run_study(config);
    write_report(obliq::io::build_simulation_document(report), format, out_dir,
                 "simulation_report");
    if (!config.assumed_kappas.empty()) {
        const obliq::KappaBiasMatrix matrix = obliq::run_kappa_misspecification(config);
        write_report(obliq::io::build_kappa_document(matrix, config.seed), format, out_dir,
                     "kappa_bias");
    }
    return kExitOk;
}

int cmd_tables(const std::vector<int>& ids, const std::string& out_dir,
               obliq::io::Format format) {
    for (int id : ids) {
        if (id < 1 || id > 8) {
            std::cerr << "unknown table id: " << id << '\n';
            return kExitBadInput;
        }
    }
    for (int id : ids) {
        const obliq::tables::ComparisonTable table = obliq::tables::build_table(id);
        write_report(obliq::io::build_comparison_document(table), format, out_dir, table.name);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slope estimators for the linear measurement-error model"};
    app.require_subcommand(1);

    std::string data_path, config_path, out_dir = ".", format_name = "csv";
    std::optional<double> kappa;
    std::optional<std::uint64_t> seed_flag;
    std::vector<int> table_ids;

    CLI::App* fit = app.add_subcommand("fit", "fit all estimators to x,y CSV data");
    fit->add_option("data", data_path, "input CSV file with header x,y")->required();
    fit->add_option("--kappa", kappa, "assumed error-variance ratio for the MLE row");
    fit->add_option("--out", out_dir, "output directory");
    fit->add_option("--format", format_name, "csv|md|jsonl");

    CLI::App* simulate = app.add_subcommand("simulate", "run a Monte Carlo study from a config");
    simulate->add_option("config", config_path, "key = value config file")->required();
    simulate->add_option("--seed", seed_flag, "seed override");
    simulate->add_option("--out", out_dir, "output directory");
    simulate->add_option("--format", format_name, "csv|md|jsonl");

    CLI::App* tables = app.add_subcommand("tables", "regenerate built-in validation tables");
    tables->add_option("ids", table_ids, "table ids (1-8)")->required();
    tables->add_option("--out", out_dir, "output directory");
    tables->add_option("--format", format_name, "csv|md|jsonl");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        const obliq::io::Format format = obliq::io::parse_format(format_name);
        if (fit->parsed()) {
            return cmd_fit(data_path, kappa, out_dir, format);
        }
        if (simulate->parsed()) {
            // Seed precedence: --seed, then the config file, then OBLIQ_SEED
            // (both handled inside parse_config), then the built-in default.
            return cmd_simulate(config_path, seed_flag, out_dir, format);
        }
        if (tables->parsed()) {
            return cmd_tables(table_ids, out_dir, format);
        }
        return kExitInternal;
    } catch (const obliq::io::CsvError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const obliq::io::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const obliq::DegenerateSample& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const obliq::DegenerateStats& e) {
        std::cerr << "degenerate data: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}
