#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace patchlab {

/// q(s) = b1 + (b2 - b1) / (1 + exp(-(s - b3) / b4))
struct LogisticFit {
  std::array<double, 4> beta{0.0, 0.0, 0.0, 1.0};
  double residual_sse = 0.0;
  /// Constant scores: the fit is the flat line at the mean quality.
  bool degenerate = false;

  double predict(double score) const;
  std::vector<double> predict(std::span<const double> scores) const;
};

/// Least-squares fit by Nelder-Mead over (b3, log b4) from 16 fixed starts,
/// with b1 and b2 solved in closed form at every step. Scores and qualities
/// are standardised internally, so the fitted curve is equivariant under
/// affine changes of the score axis.
LogisticFit fit_logistic(std::span<const double> scores, std::span<const double> qualities);

struct CorrelationReport {
  double cc = 0.0;    // Pearson(prediction, quality)
  double sse = 0.0;
  double rmse = 0.0;  // sqrt(sse / N)
};

CorrelationReport correlation_report(const LogisticFit& fit, std::span<const double> scores,
                                     std::span<const double> qualities);

struct MetricReport {
  std::string metric;
  CorrelationReport report;
};

/// Metric rows with CC, SSE and RMSE columns.
void write_table4_csv(std::ostream& out, const std::vector<MetricReport>& rows);

}  // namespace patchlab
