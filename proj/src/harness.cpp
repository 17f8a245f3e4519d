#include "multimin/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>
#include <utility>

#include "json.hpp"

#include "multimin/errors.hpp"
#include "multimin/infill.hpp"
#include "multimin/mbo.hpp"
#include "multimin/metrics.hpp"
#include "multimin/random.hpp"
#include "multimin/surrogate.hpp"

namespace multimin {

namespace {

const std::vector<std::string> kAlgorithms = {"ei", "geilm", "lcb", "se", "lhs"};

bool known_algorithm(const std::string& a) {
    return std::find(kAlgorithms.begin(), kAlgorithms.end(), a) != kAlgorithms.end();
}

std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

char interval_letter(double pr) {
    if (pr <= 5.0) return 'A';
    if (pr <= 50.0) return 'B';
    if (pr <= 500.0) return 'C';
    if (pr <= 1500.0) return 'D';
    return 'E';
}

CriterionKind kind_for(const std::string& algorithm, const ExperimentConfig& params) {
    CriterionKind kind;
    if (algorithm == "ei") kind.variant = Criterion::ei;
    else if (algorithm == "lcb") kind.variant = Criterion::lcb;
    else if (algorithm == "se") kind.variant = Criterion::se;
    else if (algorithm == "geilm") kind.variant = Criterion::geilm;
    else throw ConfigError("not an infill algorithm: " + algorithm);
    kind.lambda_g = params.lambda_g;
    kind.p_q = params.p_q;
    return kind;
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults() {
    ExperimentConfig cfg;
    for (const auto& entry : registry())
        cfg.functions.emplace_back(entry.fn.name, entry.fn.dim);
    cfg.algorithms = {"ei", "geilm", "lhs"};
    for (int k = 3; k <= 8; ++k) cfg.n_init.push_back(k * k);     // 9..64
    for (int k = 3; k <= 12; ++k) cfg.n_seq.push_back(k * k);     // 9..144
    for (int k = 4; k <= 15; ++k) cfg.n_lhs.push_back(k * k);     // 16..225
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    static const std::vector<std::string> kKeys = {
        "functions", "algorithms", "n_init", "n_seq", "n_lhs", "replications",
        "base_seed", "delta", "r", "lambda_g", "p_q", "workers"};
    for (const auto& item : j.items()) {
        if (std::find(kKeys.begin(), kKeys.end(), item.key()) == kKeys.end())
            throw ConfigError("unknown config key: " + item.key());
    }

    ExperimentConfig cfg = defaults();

    auto int_list = [](const nlohmann::json& arr, const char* key, int lo) {
        if (!arr.is_array()) throw ConfigError(std::string(key) + " must be an array");
        std::vector<int> out;
        for (const auto& v : arr) {
            if (!v.is_number_integer())
                throw ConfigError(std::string(key) + " entries must be integers");
            const int n = v.get<int>();
            if (n < lo)
                throw ConfigError(std::string(key) + " entries must be >= " + std::to_string(lo));
            out.push_back(n);
        }
        return out;
    };

    if (j.contains("functions")) {
        const auto& arr = j["functions"];
        if (!arr.is_array()) throw ConfigError("functions must be an array");
        cfg.functions.clear();
        for (const auto& f : arr) {
            if (!f.is_object() || f.size() != 2 || !f.contains("name") || !f.contains("dim"))
                throw ConfigError("functions entries must be {\"name\": ..., \"dim\": ...}");
            if (!f["name"].is_string() || !f["dim"].is_number_integer())
                throw ConfigError("functions entries need a string name and integer dim");
            const std::string name = f["name"].get<std::string>();
            const int dim = f["dim"].get<int>();
            lookup(name, dim);  // rejects unknown pairs
            cfg.functions.emplace_back(name, dim);
        }
    }
    if (j.contains("algorithms")) {
        const auto& arr = j["algorithms"];
        if (!arr.is_array()) throw ConfigError("algorithms must be an array");
        cfg.algorithms.clear();
        for (const auto& a : arr) {
            if (!a.is_string()) throw ConfigError("algorithms entries must be strings");
            const std::string name = a.get<std::string>();
            if (!known_algorithm(name)) throw ConfigError("unknown algorithm: " + name);
            if (std::find(cfg.algorithms.begin(), cfg.algorithms.end(), name) !=
                cfg.algorithms.end())
                throw ConfigError("duplicate algorithm: " + name);
            cfg.algorithms.push_back(name);
        }
    }
    if (j.contains("n_init")) cfg.n_init = int_list(j["n_init"], "n_init", 2);
    if (j.contains("n_seq")) cfg.n_seq = int_list(j["n_seq"], "n_seq", 0);
    if (j.contains("n_lhs")) cfg.n_lhs = int_list(j["n_lhs"], "n_lhs", 2);
    if (j.contains("replications")) {
        if (!j["replications"].is_number_integer() || j["replications"].get<int>() < 1)
            throw ConfigError("replications must be a positive integer");
        cfg.replications = j["replications"].get<int>();
    }
    if (j.contains("base_seed")) {
        const auto& v = j["base_seed"];
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                       v.get<long long>() < 0))
            throw ConfigError("base_seed must be a non-negative integer");
        cfg.base_seed = v.get<std::uint64_t>();
    }
    auto positive_real = [&](const char* key, double* dst) {
        if (!j.contains(key)) return;
        if (!j[key].is_number() || j[key].get<double>() <= 0.0)
            throw ConfigError(std::string(key) + " must be a positive number");
        *dst = j[key].get<double>();
    };
    positive_real("delta", &cfg.delta);
    positive_real("lambda_g", &cfg.lambda_g);
    if (j.contains("r")) {
        if (!j["r"].is_number() || j["r"].get<double>() < 1.0)
            throw ConfigError("r must be a number >= 1");
        cfg.r = j["r"].get<double>();
    }
    if (j.contains("p_q")) {
        if (!j["p_q"].is_number()) throw ConfigError("p_q must be a number");
        cfg.p_q = j["p_q"].get<double>();
        if (!(cfg.p_q > 0.0 && cfg.p_q < 0.5))
            throw ConfigError("p_q must lie in (0, 0.5)");
    }
    if (j.contains("workers")) {
        if (!j["workers"].is_number_integer() || j["workers"].get<int>() < 1)
            throw ConfigError("workers must be a positive integer");
        cfg.workers = j["workers"].get<int>();
    }
    return cfg;
}

std::uint64_t cell_hash(const CellSpec& cell) {
    const std::string key = cell.function + "|" + std::to_string(cell.dim) + "|" +
                            cell.algorithm + "|" + std::to_string(cell.n_init) + "|" +
                            std::to_string(cell.n_seq);
    return fnv1a64(key);
}

const char* const kCsvHeader =
    "function,dim,algorithm,n_init,n_seq,n_total,replication,seed,pr,ahd,l,h,"
    "interval,skipped_boundary,fit_failures,wall_seconds";

std::string format_record(const RunRecord& rec, bool timings) {
    std::string row;
    row.reserve(160);
    row += rec.cell.function;
    row += ',';
    row += std::to_string(rec.cell.dim);
    row += ',';
    row += rec.cell.algorithm;
    row += ',';
    row += std::to_string(rec.cell.n_init);
    row += ',';
    row += std::to_string(rec.cell.n_seq);
    row += ',';
    row += std::to_string(rec.n_total);
    row += ',';
    row += std::to_string(rec.replication);
    row += ',';
    row += std::to_string(rec.seed);
    row += ',';
    if (rec.pr) row += fmt(*rec.pr);
    row += ',';
    if (rec.ahd) row += fmt(*rec.ahd);
    row += ',';
    if (rec.l) row += std::to_string(*rec.l);
    row += ',';
    row += std::to_string(rec.h);
    row += ',';
    if (rec.interval) row += *rec.interval;
    row += ',';
    row += std::to_string(rec.skipped_boundary);
    row += ',';
    row += std::to_string(rec.fit_failures);
    row += ',';
    row += timings ? fmt(rec.wall_seconds) : std::string("0");
    return row;
}

RunRecord run_cell(const CellSpec& cell, const ExperimentConfig& params,
                   int replication, std::uint64_t seed) {
    const RegistryEntry& entry = lookup(cell.function, cell.dim);
    RunRecord rec;
    rec.cell = cell;
    rec.n_total = cell.n_init + cell.n_seq;
    rec.replication = replication;
    rec.seed = seed;
    rec.h = entry.known.count();

    const auto t0 = std::chrono::steady_clock::now();
    try {
        std::optional<KrigingModel> model;
        if (cell.algorithm == "lhs") {
            RandomStream stream(seed);
            Design design = lhs_sample(entry.fn.domain, cell.n_init, stream);
            Vec responses(design.n());
            for (int i = 0; i < design.n(); ++i)
                responses[i] = evaluate(entry.fn, design.points[i]);
            EvaluatedDesign evaluated(std::move(design), std::move(responses));
            model = fit(entry.fn.domain, evaluated, KrigingConfig{}, stream);
        } else {
            const MboConfig mc{entry.fn,
                               cell.n_init,
                               cell.n_seq,
                               kind_for(cell.algorithm, params),
                               KrigingConfig{},
                               seed};
            model = run(mc).model;
        }

        // Search the surrogate mean for its local minima and compare against
        // the tabulated ones. A dedicated sub-seed keeps the record a pure
        // function of (base seed, cell, replication).
        RandomStream extract_stream(derive_seed(seed, fnv1a64("extract"), 0));
        const ValueGrad field = [&model](const Vec& x, Vec& grad) {
            grad = model->mean_gradient(x);
            return model->predict_mean(x);
        };
        ExtractResult raw = extract(field, entry.fn.domain, sample_size(cell.dim),
                                    extract_stream);
        MinimaSet found = agglomerate(raw.kept, params.delta);
        rec.skipped_boundary = raw.skipped_boundary;

        const int l = static_cast<int>(found.clusters.size());
        rec.l = l;
        rec.pr = peak_ratio(l, rec.h);
        rec.interval = interval_letter(*rec.pr);
        if (l > 0) {
            std::vector<Vec> U, S;
            U.reserve(l);
            for (const auto& c : found.clusters) U.push_back(c.representative);
            S.reserve(entry.known.entries.size());
            for (const auto& e : entry.known.entries) S.push_back(e.first);
            rec.ahd = ahd(U, S, params.r);
        }
    } catch (const MboAbortError&) {
        rec.fit_failures = 1;
        rec.failed = true;
    } catch (const FitFailureError&) {
        rec.fit_failures = 1;
        rec.failed = true;
    }
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

GridSummary run_grid(const ExperimentConfig& config, const std::string& out_path,
                     bool force, bool dry_run) {
    struct Task {
        CellSpec cell;
        int replication;
        std::uint64_t seed;
    };

    // Deterministic task order: cells in config enumeration order (function,
    // algorithm, then design sizes ascending as configured), replications
    // innermost. Output row i belongs to task i whatever the worker count.
    std::vector<Task> tasks;
    GridSummary summary;
    for (const auto& [name, dim] : config.functions) {
        for (const auto& algorithm : config.algorithms) {
            std::vector<CellSpec> cells;
            if (algorithm == "lhs") {
                for (int n : config.n_lhs) cells.push_back({name, dim, algorithm, n, 0});
            } else {
                for (int ni : config.n_init)
                    for (int ns : config.n_seq)
                        cells.push_back({name, dim, algorithm, ni, ns});
            }
            summary.cells_per_algorithm[algorithm] +=
                static_cast<int>(cells.size());
            for (const auto& cell : cells) {
                const std::uint64_t h = cell_hash(cell);
                for (int rep = 0; rep < config.replications; ++rep)
                    tasks.push_back({cell, rep, derive_seed(config.base_seed, h, rep)});
            }
        }
    }
    summary.total_rows = static_cast<long long>(tasks.size());
    if (dry_run) return summary;

    namespace fs = std::filesystem;
    if (!force && fs::exists(out_path))
        throw RefusalError("output exists: " + out_path + " (use --force to overwrite)");

    int workers = config.workers;
    if (const char* env = std::getenv("MULTIMIN_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw ConfigError("MULTIMIN_WORKERS must be a positive integer");
        workers = static_cast<int>(v);
    }
    const int max_useful = static_cast<int>(std::max<std::size_t>(tasks.size(), 1));
    workers = std::max(1, std::min(workers, max_useful));

    std::vector<std::string> rows(tasks.size());
    std::atomic<long long> failures{0};
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                const Task& t = tasks[i];
                RunRecord rec = run_cell(t.cell, config, t.replication, t.seed);
                if (rec.failed) failures.fetch_add(1);
                rows[i] = format_record(rec, config.timings);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    const std::string tmp_path = out_path + ".tmp";
    {
        std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open output path: " + tmp_path);
        out << kCsvHeader << '\n';
        for (const auto& row : rows) out << row << '\n';
        out.flush();
        if (!out) throw Error("write failed: " + tmp_path);
    }
    fs::rename(tmp_path, out_path);

    summary.failures = failures.load();
    summary.executed = true;
    return summary;
}

Vec clamped_numerical_gradient(const ObjectiveFunction& fn, const Vec& x, double h) {
    Vec grad(fn.dim);
    Vec probe = x;
    for (int j = 0; j < fn.dim; ++j) {
        const double step = h * fn.domain.width(j);
        const double hi = std::min(x[j] + step, fn.domain.upper[j]);
        const double lo = std::max(x[j] - step, fn.domain.lower[j]);
        probe[j] = hi;
        const double f_hi = fn.evaluator(probe);
        probe[j] = lo;
        const double f_lo = fn.evaluator(probe);
        probe[j] = x[j];
        grad[j] = (f_hi - f_lo) / (hi - lo);
    }
    return grad;
}

OracleReport verify_oracle(const std::string& name, int dim, double tolerance,
                           int n_override) {
    const RegistryEntry& entry = lookup(name, dim);
    OracleReport report;
    report.function = name;
    report.dim = dim;
    report.h = entry.known.count();

    const int n = n_override > 0 ? n_override : sample_size(dim);
    const CellSpec cell{name, dim, "oracle", n, 0};
    RandomStream stream(derive_seed(1729, cell_hash(cell), 0));

    const ValueGrad field = [&entry](const Vec& x, Vec& grad) {
        grad = clamped_numerical_gradient(entry.fn, x);
        return entry.fn.evaluator(x);
    };
    ExtractResult raw = extract(field, entry.fn.domain, n, stream);
    MinimaSet found = agglomerate(raw.kept, 0.001);

    report.clusters = static_cast<int>(found.clusters.size());
    report.skipped_boundary = raw.skipped_boundary;
    report.non_converged = raw.non_converged;

    for (const auto& [point, value] : entry.known.entries) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : found.clusters)
            best = std::min(best, chebyshev(point, c.representative));
        report.match_distance.push_back(best);
        report.worst_match = std::max(report.worst_match, best);
    }
    report.pass = (report.clusters == report.h);
    for (double d : report.match_distance)
        if (!(d <= tolerance)) report.pass = false;
    return report;
}

}  // namespace multimin
