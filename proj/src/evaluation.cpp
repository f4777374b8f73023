#include "wmn/evaluation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wmn {

std::string_view cppm_name(Cppm c)
{
    switch (c) {
    case Cppm::tid: return "TID";
    case Cppm::cdal: return "CDAL";
    case Cppm::cxls: return "CXLS";
    }
    return "?";
}

std::string_view npm_name(Npm n)
{
    switch (n) {
    case Npm::throughput: return "Throughput";
    case Npm::dfc: return "DFC";
    case Npm::pdr: return "PDR";
    case Npm::eed: return "EED";
    }
    return "?";
}

Better orientation(Npm n)
{
    return n == Npm::throughput || n == Npm::pdr ? Better::higher : Better::lower;
}

double cppm_value(const CppmValues& v, Cppm c)
{
    switch (c) {
    case Cppm::tid: return v.tid;
    case Cppm::cdal: return v.cdal;
    case Cppm::cxls: return v.cxls;
    }
    return 0.0;
}

double npm_value(const NpmSummary& s, Npm n)
{
    switch (n) {
    case Npm::throughput: return s.throughput_mbps;
    case Npm::dfc: return s.dfc;
    case Npm::pdr: return s.pdr_pct;
    case Npm::eed: return s.eed_us;
    }
    return 0.0;
}

Relationship performance_relationship(double a, double b, Better better, double eps)
{
    if (std::abs(a - b) <= eps)
        return Relationship::tie;
    const bool a_larger = a > b;
    return a_larger == (better == Better::higher) ? Relationship::a_better : Relationship::b_better;
}

std::size_t pair_count(std::size_t n)
{
    return n * (n - (n > 0 ? 1 : 0)) / 2;
}

std::size_t prediction_error(const std::map<std::string, double>& cppm, const std::map<std::string, double>& npm,
                             Better npm_better, double cppm_eps, double npm_eps)
{
    if (cppm.size() != npm.size()
        || !std::equal(cppm.begin(), cppm.end(), npm.begin(),
                       [](const auto& x, const auto& y) { return x.first == y.first; }))
        throw Error("[evaluation] prediction metric and network metric cover different CA sets");
    if (cppm.size() < 2)
        throw Error("[evaluation] prediction error needs at least 2 CAs");

    std::vector<double> c;
    std::vector<double> o;
    for (const auto& [k, v] : cppm)
        c.push_back(v);
    for (const auto& [k, v] : npm)
        o.push_back(v);

    std::size_t pe = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j)
            if (performance_relationship(c[i], c[j], kCppmOrientation, cppm_eps)
                != performance_relationship(o[i], o[j], npm_better, npm_eps))
                ++pe;
    return pe;
}

double degree_of_confidence(std::size_t pe, std::size_t n_cas)
{
    if (n_cas < 2)
        throw Error("[evaluation] degree of confidence needs at least 2 CAs");
    const std::size_t pairs = pair_count(n_cas);
    if (pe > pairs)
        throw Error(fmt::format("[evaluation] prediction error {} exceeds the {} CA pairs", pe, pairs));
    const double doc = (1.0 - static_cast<double>(pe) / static_cast<double>(pairs)) * 100.0;
    return std::round(doc * 100.0) / 100.0;
}

Grid<double> doc_grid(const Grid<std::size_t>& pe, std::size_t n_cas)
{
    Grid<double> g{};
    for (std::size_t c = 0; c < kCppms.size(); ++c)
        for (std::size_t n = 0; n < kNpms.size(); ++n)
            g[c][n] = degree_of_confidence(pe[c][n], n_cas);
    return g;
}

EvaluationReport build_report(const std::map<std::string, CppmValues>& metrics,
                              const std::map<std::string, NpmSummary>& npms, const EvalOptions& opts)
{
    if (metrics.size() < 2)
        throw Error("[evaluation] a report needs at least 2 CAs");
    for (const auto& [scheme, v] : metrics)
        if (!npms.contains(scheme))
            throw Error(fmt::format("[evaluation] no network metrics for CA `{}`", scheme));
    for (const auto& [scheme, v] : npms)
        if (!metrics.contains(scheme))
            throw Error(fmt::format("[evaluation] no prediction metrics for CA `{}`", scheme));

    EvaluationReport r;
    for (const auto& [scheme, v] : metrics)
        r.schemes.push_back(scheme);

    for (std::size_t ci = 0; ci < kCppms.size(); ++ci) {
        const Cppm c = kCppms[ci];
        std::map<std::string, double> cv;
        for (const auto& [scheme, v] : metrics)
            cv[scheme] = cppm_value(v, c);
        for (std::size_t ni = 0; ni < kNpms.size(); ++ni) {
            const Npm n = kNpms[ni];
            std::map<std::string, double> nv;
            double scale = 0.0;
            for (const auto& [scheme, s] : npms) {
                nv[scheme] = npm_value(s, n);
                scale = std::max(scale, std::abs(nv[scheme]));
            }
            r.pe[ci][ni] = prediction_error(cv, nv, orientation(n), opts.cppm_eps, opts.npm_eps_fraction * scale);
            r.doc[ci][ni] = degree_of_confidence(r.pe[ci][ni], metrics.size());

            auto& series = r.series[ci][ni];
            for (const auto& scheme : r.schemes)
                series.push_back({cv[scheme], nv[scheme], scheme});
            std::sort(series.begin(), series.end(), [](const CorrelationPoint& a, const CorrelationPoint& b) {
                return std::tie(a.metric, a.scheme) < std::tie(b.metric, b.scheme);
            });
        }
    }
    return r;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v)
{
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]])
            ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            rank[idx[k]] = avg;
        i = j + 1;
    }
    return rank;
}

} // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw Error("[evaluation] spearman needs two equally sized samples of at least 2 values");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    return sxy / std::sqrt(sxx * syy);
}

} // namespace wmn
