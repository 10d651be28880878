#pragma once

#include <span>
#include <vector>

namespace patchlab {

double mean(std::span<const double> values);
/// Linear-interpolation quantile (type 7), p in [0,1].
double quantile(std::span<const double> values, double p);
double median(std::span<const double> values);

/// 1-based ranks, ties receive their average rank.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation; 0 when either input has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);
/// Pearson correlation of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace patchlab
