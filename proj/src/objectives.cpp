#include "multimin/objectives.hpp"

#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "multimin/errors.hpp"

// Generated at configure time from data/known_minima.csv.
#include "known_minima_data.hpp"

namespace multimin {

namespace {

constexpr double kPi = 3.14159265358979323846;

double alpine02(const Vec& x) {
    double prod = 1.0;
    for (int j = 0; j < x.size(); ++j) prod *= std::sqrt(x[j]) * std::sin(x[j]);
    return -prod;
}

double branin(const Vec& x) {
    const double b = 5.1 / (4.0 * kPi * kPi);
    const double c = 5.0 / kPi;
    const double t = 1.0 / (8.0 * kPi);
    const double u = x[1] - b * x[0] * x[0] + c * x[0] - 6.0;
    return u * u + 10.0 * (1.0 - t) * std::cos(x[0]) + 10.0;
}

double cosine_mix(const Vec& x) {
    double s = 0.0;
    for (int j = 0; j < x.size(); ++j) {
        s += x[j] * x[j] - 0.1 * std::cos(5.0 * kPi * x[j]);
    }
    return s;
}

template <int P, int M>
double hartmann(const Vec& x, const std::array<std::array<double, P>, M>& A,
                const std::array<std::array<double, P>, M>& Pm) {
    static constexpr std::array<double, 4> alpha = {1.0, 1.2, 3.0, 3.2};
    double s = 0.0;
    for (int i = 0; i < M; ++i) {
        double e = 0.0;
        for (int j = 0; j < P; ++j) {
            const double d = x[j] - Pm[i][j];
            e += A[i][j] * d * d;
        }
        s += alpha[i] * std::exp(-e);
    }
    return -s;
}

double hartmann3(const Vec& x) {
    static constexpr std::array<std::array<double, 3>, 4> A = {
        {{3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}, {3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}}};
    static constexpr std::array<std::array<double, 3>, 4> P = {
        {{0.3689, 0.1170, 0.2673},
         {0.4699, 0.4387, 0.7470},
         {0.1091, 0.8732, 0.5547},
         {0.0381, 0.5743, 0.8828}}};
    return hartmann<3, 4>(x, A, P);
}

double hartmann6(const Vec& x) {
    static constexpr std::array<std::array<double, 6>, 4> A = {
        {{10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
         {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
         {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
         {17.0, 8.0, 0.05, 10.0, 0.1, 14.0}}};
    static constexpr std::array<std::array<double, 6>, 4> P = {
        {{0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
         {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
         {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
         {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}}};
    return hartmann<6, 4>(x, A, P);
}

double himmelblau(const Vec& x) {
    const double a = x[0] * x[0] + x[1] - 11.0;
    const double b = x[0] + x[1] * x[1] - 7.0;
    return a * a + b * b;
}

// Modified Rastrigin: separable, per-coordinate frequency kⱼ controls the
// number of basins along that axis (product over j matches the tabulated
// minima count).
double mod_rastrigin(const Vec& x, const std::vector<double>& k) {
    double s = 0.0;
    for (int j = 0; j < x.size(); ++j) {
        s += 2.0 * k[j] * x[j] * x[j] + 10.0 * std::cos(2.0 * kPi * k[j] * x[j]) + 10.0;
    }
    return s;
}

// Shekel coordinate matrix (one column per basin). Rows for x2/x4 carry the
// (…,9,3,…) variant pinned by the tabulated minimum near (5,3,5,3).
constexpr std::array<std::array<double, 10>, 4> kShekelC = {
    {{4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0},
     {4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6},
     {4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0},
     {4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6}}};
constexpr std::array<double, 10> kShekelB = {0.1, 0.2, 0.2, 0.4, 0.4,
                                             0.6, 0.3, 0.7, 0.5, 0.5};

double shekel(const Vec& x, int m) {
    double s = 0.0;
    for (int j = 0; j < m; ++j) {
        double d = kShekelB[j];
        for (int i = 0; i < 4; ++i) {
            const double t = x[i] - kShekelC[i][j];
            d += t * t;
        }
        s -= 1.0 / d;
    }
    return s;
}

BoxDomain cube(int p, double lo, double hi) {
    return BoxDomain(Vec::Constant(p, lo), Vec::Constant(p, hi));
}

std::vector<RegistryEntry> build_registry() {
    std::vector<RegistryEntry> reg;
    auto add = [&reg](std::string name, int p, BoxDomain dom,
                      std::function<double(const Vec&)> f) {
        reg.push_back({ObjectiveFunction{std::move(name), p, std::move(dom), std::move(f)},
                       KnownMinima{}});
    };

    for (int p : {1, 2, 3}) add("Alpine02", p, cube(p, 0.0, 10.0), alpine02);
    {
        Vec lo(2), hi(2);
        lo << -5.0, 0.0;
        hi << 10.0, 15.0;
        add("Branin", 2, BoxDomain(lo, hi), branin);
    }
    for (int p : {1, 2, 3}) add("CosineMix", p, cube(p, -1.0, 1.0), cosine_mix);
    add("Hartmann", 3, cube(3, 0.0, 1.0), hartmann3);
    add("Hartmann", 6, cube(6, 0.0, 1.0), hartmann6);
    add("Himmelblau", 2, cube(2, -5.0, 5.0), himmelblau);
    add("modRastrigin", 4, cube(4, 0.0, 1.0),
        [](const Vec& x) { return mod_rastrigin(x, {2, 2, 3, 4}); });
    add("modRastrigin", 8, cube(8, 0.0, 1.0),
        [](const Vec& x) { return mod_rastrigin(x, {1, 2, 1, 2, 1, 3, 1, 4}); });
    add("Shekel5", 4, cube(4, 0.0, 10.0), [](const Vec& x) { return shekel(x, 5); });
    add("Shekel7", 4, cube(4, 0.0, 10.0), [](const Vec& x) { return shekel(x, 7); });
    add("Shekel10", 4, cube(4, 0.0, 10.0), [](const Vec& x) { return shekel(x, 10); });

    // Attach the tabulated minima from the embedded CSV.
    std::map<std::pair<std::string, int>, KnownMinima*> index;
    for (auto& e : reg) index[{e.fn.name, e.fn.dim}] = &e.known;

    std::istringstream csv(known_minima_csv());
    std::string line;
    std::getline(csv, line);  // header
    int prev_index = 0;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::getline(row, field, ',');
        const std::string name = field;
        std::getline(row, field, ',');
        const int dim = std::stoi(field);
        std::getline(row, field, ',');
        const int idx = std::stoi(field);
        Vec x(dim);
        for (int j = 0; j < 8; ++j) {
            std::getline(row, field, ',');
            if (j < dim) x[j] = std::stod(field);
        }
        std::getline(row, field, ',');
        const double y = std::stod(field);

        auto it = index.find({name, dim});
        if (it == index.end()) throw Error("known minima table: unknown function " + name);
        auto& entries = it->second->entries;
        prev_index = (idx == 1) ? 0 : prev_index;
        if (idx != prev_index + 1) throw Error("known minima table: index gap in " + name);
        prev_index = idx;
        if (!entries.empty() && y < entries.back().second) {
            throw Error("known minima table: values not ascending in " + name);
        }
        entries.emplace_back(std::move(x), y);
    }

    const std::map<std::pair<std::string, int>, int> expected = {
        {{"Alpine02", 1}, 2},     {{"Alpine02", 2}, 5},     {{"Alpine02", 3}, 14},
        {{"Branin", 2}, 3},       {{"CosineMix", 1}, 5},    {{"CosineMix", 2}, 25},
        {{"CosineMix", 3}, 125},  {{"Hartmann", 3}, 3},     {{"Hartmann", 6}, 2},
        {{"Himmelblau", 2}, 4},   {{"modRastrigin", 4}, 48}, {{"modRastrigin", 8}, 48},
        {{"Shekel5", 4}, 5},      {{"Shekel7", 4}, 7},      {{"Shekel10", 4}, 10}};
    for (const auto& e : reg) {
        if (e.known.count() != expected.at({e.fn.name, e.fn.dim})) {
            throw Error("known minima table: wrong count for " + e.fn.name);
        }
    }
    return reg;
}

}  // namespace

const std::string& known_minima_csv() {
    static const std::string csv = kKnownMinimaCsv;
    return csv;
}

const std::vector<RegistryEntry>& registry() {
    static const std::vector<RegistryEntry> reg = build_registry();
    return reg;
}

const RegistryEntry& lookup(const std::string& name, int dim) {
    for (const auto& e : registry()) {
        if (e.fn.name == name && e.fn.dim == dim) return e;
    }
    throw ConfigError("unknown function: " + name + " dim " + std::to_string(dim));
}

double evaluate(const ObjectiveFunction& fn, const Vec& x) {
    if (!fn.domain.contains(x)) {
        throw DomainError("evaluate: point outside domain of " + fn.name);
    }
    return fn.evaluator(x);
}

Vec numerical_gradient(const ObjectiveFunction& fn, const Vec& x, double h) {
    const auto& dom = fn.domain;
    Vec g(dom.p());
    Vec xp = x, xm = x;
    for (int j = 0; j < dom.p(); ++j) {
        const double step = h * dom.width(j);
        if (x[j] - step <= dom.lower[j] || x[j] + step >= dom.upper[j]) {
            throw BoundaryStepError("numerical_gradient: stencil leaves the domain");
        }
        xp[j] = x[j] + step;
        xm[j] = x[j] - step;
        g[j] = (fn.evaluator(xp) - fn.evaluator(xm)) / (2.0 * step);
        xp[j] = x[j];
        xm[j] = x[j];
    }
    return g;
}

}  // namespace multimin
