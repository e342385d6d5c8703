#include "dynrbn/stats.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace dynrbn {

namespace {

struct Moments
{
    double mean;
    double var;
};

Moments moments(std::span<const double> xs)
{
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs)
        ss += (x - mean) * (x - mean);
    return {mean, xs.size() > 1 ? ss / (n - 1.0) : 0.0};
}

} // namespace

Summary summarize(std::span<const double> xs)
{
    Summary s;
    s.count = xs.size();
    if (xs.empty())
        return s;
    const auto m = moments(xs);
    s.mean = m.mean;
    s.sd = std::sqrt(m.var);
    auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    s.min = *lo;
    s.max = *hi;
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    s.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    // Guard against rounding pushing the mean outside [min, max].
    s.mean = std::clamp(s.mean, s.min, s.max);
    return s;
}

std::optional<WelchResult> welch_t_test(std::span<const double> a, std::span<const double> b)
{
    if (a.size() < 2 || b.size() < 2)
        return std::nullopt;
    const auto ma = moments(a);
    const auto mb = moments(b);
    const double va = ma.var / static_cast<double>(a.size());
    const double vb = mb.var / static_cast<double>(b.size());
    const double se2 = va + vb;
    if (se2 == 0.0)
        return std::nullopt;

    WelchResult r;
    r.t = (ma.mean - mb.mean) / std::sqrt(se2);
    r.df = se2 * se2 /
           (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
    boost::math::students_t dist(r.df);
    r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
    r.p = std::min(r.p, 1.0);
    return r;
}

double welch_p_or_degenerate(std::span<const double> a, std::span<const double> b)
{
    if (auto r = welch_t_test(a, b))
        return r->p;
    if (a.empty() || b.empty())
        return std::numeric_limits<double>::quiet_NaN();
    return moments(a).mean == moments(b).mean ? 1.0 : 0.0;
}

} // namespace dynrbn
