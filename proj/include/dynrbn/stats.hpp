#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace dynrbn {

struct Summary
{
    std::size_t count = 0;
    double mean = 0.0;
    double sd = 0.0; // sample standard deviation (n-1)
    double min = 0.0;
    double max = 0.0;
    double median = 0.0;
};

Summary summarize(std::span<const double> xs);

struct WelchResult
{
    double t = 0.0;
    double df = 0.0;
    double p = 1.0; // two-sided
};

/// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
/// freedom. Undefined (nullopt) when either sample has fewer than two
/// values or both samples have zero variance.
std::optional<WelchResult> welch_t_test(std::span<const double> a, std::span<const double> b);

/// Two-sided p for reporting: undefined tests count as p = 1 when the means
/// agree and p = 0 when two constant samples differ.
double welch_p_or_degenerate(std::span<const double> a, std::span<const double> b);

} // namespace dynrbn
