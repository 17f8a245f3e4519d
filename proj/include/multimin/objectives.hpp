#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "multimin/core.hpp"

namespace multimin {

// A deterministic benchmark objective on a box domain.
struct ObjectiveFunction {
    std::string name;
    int dim;
    BoxDomain domain;
    std::function<double(const Vec&)> evaluator;
};

// All tabulated local minima of one objective, sorted ascending by value
// (global minimum first). Coordinates and values carry the printed
// 3-decimal precision of the reference tables.
struct KnownMinima {
    std::vector<std::pair<Vec, double>> entries;

    int count() const { return static_cast<int>(entries.size()); }
};

struct RegistryEntry {
    ObjectiveFunction fn;
    KnownMinima known;
};

// The 15 benchmark functions: Alpine02 (p=1,2,3), Branin (2), CosineMix
// (1,2,3), Hartmann (3,6), Himmelblau (2), modRastrigin (4,8), and the three
// Shekel variants Shekel5/Shekel7/Shekel10 (all p=4, named by their number
// of basins since they share a dimension).
const std::vector<RegistryEntry>& registry();

// Lookup by (name, dim); throws ConfigError for unknown pairs.
const RegistryEntry& lookup(const std::string& name, int dim);

// Evaluates fn at x; throws DomainError outside the domain.
double evaluate(const ObjectiveFunction& fn, const Vec& x);

// Central finite differences with per-coordinate step h·(upper[j]−lower[j]).
// Requires x at distance > step from every bound; throws BoundaryStepError
// otherwise.
Vec numerical_gradient(const ObjectiveFunction& fn, const Vec& x, double h = 1e-6);

// The raw embedded minima table (CSV text, columns
// function,dim,index,x1..x8,y) for dump/audit purposes.
const std::string& known_minima_csv();

}  // namespace multimin
