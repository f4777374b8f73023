#pragma once

#include "wmn/interference_metrics.hpp"
#include "wmn/netsim.hpp"

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace wmn {

enum class Cppm { tid, cdal, cxls };
enum class Npm { throughput, dfc, pdr, eed };

inline constexpr std::array<Cppm, 3> kCppms = {Cppm::tid, Cppm::cdal, Cppm::cxls};
inline constexpr std::array<Npm, 4> kNpms = {Npm::throughput, Npm::dfc, Npm::pdr, Npm::eed};

std::string_view cppm_name(Cppm c); // TID, CDAL, CXLS
std::string_view npm_name(Npm n);   // Throughput, DFC, PDR, EED

enum class Better { higher, lower };
enum class Relationship { a_better, b_better, tie };

// Throughput and PDR: higher is better. DFC and EED: lower is better.
Better orientation(Npm n);
// Every prediction metric estimates interference: lower is better.
inline constexpr Better kCppmOrientation = Better::lower;

double cppm_value(const CppmValues& v, Cppm c);
double npm_value(const NpmSummary& s, Npm n);

Relationship performance_relationship(double a, double b, Better better, double eps);

// Number of CA pairs whose metric-predicted relationship differs from the
// observed one. A tie on exactly one side is a wrong prediction.
std::size_t prediction_error(const std::map<std::string, double>& cppm, const std::map<std::string, double>& npm,
                             Better npm_better, double cppm_eps, double npm_eps);

std::size_t pair_count(std::size_t n_cas);

// (1 - pe / C(n, 2)) * 100, rounded to 2 decimals.
double degree_of_confidence(std::size_t pe, std::size_t n_cas);

struct CorrelationPoint {
    double metric = 0.0;
    double npm = 0.0;
    std::string scheme;
};

struct EvalOptions {
    double cppm_eps = 0.0;
    // NPM tie threshold as a fraction of the largest |value| observed for that NPM.
    double npm_eps_fraction = 0.005;
};

template <typename T>
using Grid = std::array<std::array<T, kNpms.size()>, kCppms.size()>; // [cppm][npm]

struct EvaluationReport {
    std::vector<std::string> schemes;
    Grid<std::size_t> pe{};
    Grid<double> doc{};
    Grid<std::vector<CorrelationPoint>> series;
};

EvaluationReport build_report(const std::map<std::string, CppmValues>& metrics,
                              const std::map<std::string, NpmSummary>& npms, const EvalOptions& opts = {});

Grid<double> doc_grid(const Grid<std::size_t>& pe, std::size_t n_cas);

// Spearman rank correlation with average ranks for ties; NaN when either side
// has no variance.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

} // namespace wmn
