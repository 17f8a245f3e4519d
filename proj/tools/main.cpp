#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "multimin/errors.hpp"
#include "multimin/harness.hpp"
#include "multimin/objectives.hpp"
#include "multimin/random.hpp"

namespace {

std::string domain_display(const multimin::BoxDomain& d) {
    std::ostringstream out;
    bool uniform = true;
    for (int j = 1; j < d.p(); ++j)
        if (d.lower[j] != d.lower[0] || d.upper[j] != d.upper[0]) uniform = false;
    if (uniform) {
        out << "[" << d.lower[0] << ", " << d.upper[0] << "]^" << d.p();
    } else {
        for (int j = 0; j < d.p(); ++j) {
            if (j) out << " x ";
            out << "[" << d.lower[j] << ", " << d.upper[j] << "]";
        }
    }
    return out.str();
}

int cmd_list_functions() {
    std::cout << "name          dim  minima  domain\n";
    for (const auto& entry : multimin::registry()) {
        std::cout << entry.fn.name;
        for (std::size_t i = entry.fn.name.size(); i < 14; ++i) std::cout << ' ';
        std::string dim = std::to_string(entry.fn.dim);
        std::cout << dim;
        for (std::size_t i = dim.size(); i < 5; ++i) std::cout << ' ';
        std::string count = std::to_string(entry.known.count());
        std::cout << count;
        for (std::size_t i = count.size(); i < 8; ++i) std::cout << ' ';
        std::cout << domain_display(entry.fn.domain) << '\n';
    }
    return 0;
}

int cmd_dump_minima(const std::string& name, int dim) {
    multimin::lookup(name, dim);  // unknown pair -> error
    const std::string& csv = multimin::known_minima_csv();
    std::istringstream in(csv);
    std::string line;
    bool header = true;
    const std::string prefix = name + "," + std::to_string(dim) + ",";
    while (std::getline(in, line)) {
        if (header) {
            std::cout << line << '\n';
            header = false;
            continue;
        }
        if (line.rfind(prefix, 0) == 0) std::cout << line << '\n';
    }
    return 0;
}

int cmd_verify_oracle(const std::string& name, int dim, double tol, int n_override) {
    const multimin::OracleReport report =
        multimin::verify_oracle(name, dim, tol, n_override);
    std::cout << report.function << " dim=" << report.dim
              << ": clusters=" << report.clusters << " expected=" << report.h
              << " skipped_boundary=" << report.skipped_boundary
              << " non_converged=" << report.non_converged
              << " worst_match=" << report.worst_match << " -> "
              << (report.pass ? "PASS" : "FAIL") << '\n';
    return report.pass ? 0 : 1;
}

int cmd_run(const std::string& name, int dim, const std::string& algo, int n_init,
            int n_seq, std::uint64_t seed, const std::string& out_path, bool force,
            bool timings) {
    if (algo == "lhs" && n_seq != 0)
        throw multimin::ConfigError("the lhs baseline takes --n-seq 0");
    multimin::ExperimentConfig params = multimin::ExperimentConfig::defaults();
    params.timings = timings;
    const multimin::CellSpec cell{name, dim, algo, n_init, n_seq};
    namespace fs = std::filesystem;
    if (!force && fs::exists(out_path))
        throw multimin::RefusalError("output exists: " + out_path +
                                     " (use --force to overwrite)");
    const multimin::RunRecord rec = multimin::run_cell(
        cell, params, 0, multimin::derive_seed(seed, multimin::cell_hash(cell), 0));
    const std::string tmp = out_path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw multimin::Error("cannot open output path: " + tmp);
        out << multimin::kCsvHeader << '\n'
            << multimin::format_record(rec, timings) << '\n';
        out.flush();
        if (!out) throw multimin::Error("write failed: " + tmp);
    }
    fs::rename(tmp, out_path);
    std::cout << (rec.failed ? "1 row written (run failed: surrogate fit)"
                             : "1 row written")
              << " -> " << out_path << '\n';
    return rec.failed ? 1 : 0;
}

int cmd_grid(const std::string& config_path, const std::string& out_path, int workers,
             bool force, bool dry_run, bool timings) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw multimin::ConfigError("cannot read config: " + config_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    multimin::ExperimentConfig cfg = multimin::ExperimentConfig::from_json_text(buf.str());
    if (workers > 0) cfg.workers = workers;
    cfg.timings = timings;
    const multimin::GridSummary summary =
        multimin::run_grid(cfg, out_path, force, dry_run);
    std::cout << "cells:";
    for (const auto& [algorithm, cells] : summary.cells_per_algorithm)
        std::cout << ' ' << algorithm << '=' << cells;
    std::cout << "\nrows: " << summary.total_rows << '\n';
    if (!summary.executed) {
        std::cout << "dry run: nothing executed\n";
        return 0;
    }
    std::cout << "failures: " << summary.failures << "\nwrote " << out_path << '\n';
    return summary.failures > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "multimin: locate all local minima of expensive box-constrained functions "
        "via Kriging-based sequential optimization"};
    app.require_subcommand(1);

    app.add_subcommand("list-functions", "List the benchmark registry");

    auto* dump = app.add_subcommand("dump-minima", "Emit the tabulated minima CSV slice");
    std::string dump_fn;
    int dump_dim = 0;
    dump->add_option("--function", dump_fn, "Function name")->required();
    dump->add_option("--dim", dump_dim, "Dimension")->required();

    auto* verify = app.add_subcommand(
        "verify-oracle", "Recover a function's minima by multistart descent");
    std::string verify_fn;
    int verify_dim = 0;
    double verify_tol = 1e-2;
    int verify_n = 0;
    verify->add_option("--function", verify_fn, "Function name")->required();
    verify->add_option("--dim", verify_dim, "Dimension")->required();
    verify->add_option("--tol", verify_tol, "Chebyshev match tolerance (default 1e-2)");
    verify->add_option("--n", verify_n,
                       "Multistart count override (default: the p-dependent formula)");

    auto* run = app.add_subcommand("run", "Execute a single experiment cell");
    std::string run_fn, run_algo, run_out;
    int run_dim = 0, run_n_init = 0, run_n_seq = 0;
    std::uint64_t run_seed = 0;
    bool run_force = false, run_timings = false;
    run->add_option("--function", run_fn, "Function name")->required();
    run->add_option("--dim", run_dim, "Dimension")->required();
    run->add_option("--algo", run_algo, "ei|geilm|lcb|se|lhs")
        ->required()
        ->check(CLI::IsMember({"ei", "geilm", "lcb", "se", "lhs"}));
    run->add_option("--n-init", run_n_init, "Initial design size (lhs: design size)")
        ->required()
        ->check(CLI::PositiveNumber);
    run->add_option("--n-seq", run_n_seq, "Sequential evaluations (0 for lhs)")
        ->required()
        ->check(CLI::NonNegativeNumber);
    run->add_option("--seed", run_seed, "Base seed")->required();
    run->add_option("--out", run_out, "Output CSV path")->required();
    run->add_flag("--force", run_force, "Overwrite an existing output file");
    run->add_flag("--timings", run_timings,
                  "Record real wall_seconds (breaks byte-determinism)");

    auto* grid = app.add_subcommand("grid", "Execute an experiment grid from JSON config");
    std::string grid_config, grid_out;
    int grid_workers = 0;
    bool grid_force = false, grid_dry = false, grid_timings = false;
    grid->add_option("--config", grid_config, "JSON config path")->required();
    grid->add_option("--out", grid_out, "Output CSV path")->required();
    grid->add_option("--workers", grid_workers, "Worker threads")
        ->check(CLI::PositiveNumber);
    grid->add_flag("--force", grid_force, "Overwrite an existing output file");
    grid->add_flag("--dry-run", grid_dry, "Report cell/row counts without executing");
    grid->add_flag("--timings", grid_timings,
                   "Record real wall_seconds (breaks byte-determinism)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("list-functions")) return cmd_list_functions();
        if (app.got_subcommand(dump)) return cmd_dump_minima(dump_fn, dump_dim);
        if (app.got_subcommand(verify))
            return cmd_verify_oracle(verify_fn, verify_dim, verify_tol, verify_n);
        if (app.got_subcommand(run))
            return cmd_run(run_fn, run_dim, run_algo, run_n_init, run_n_seq, run_seed,
                           run_out, run_force, run_timings);
        if (app.got_subcommand(grid))
            return cmd_grid(grid_config, grid_out, grid_workers, grid_force, grid_dry,
                            grid_timings);
    } catch (const multimin::RefusalError& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return 3;
    } catch (const multimin::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
