#include "patchlab/iqa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "patchlab/errors.hpp"
#include "patchlab/labstats.hpp"
#include "patchlab/statistics.hpp"

namespace patchlab {

// The logistic is evaluated through tanh: g = (1 + tanh(z/2)) / 2 keeps full
// precision when b4 is large and the curve is almost linear.
double LogisticFit::predict(double score) const {
  const auto& [b1, b2, b3, b4] = beta;
  return 0.5 * (b1 + b2) + 0.5 * (b2 - b1) * std::tanh((score - b3) / (2.0 * b4));
}

std::vector<double> LogisticFit::predict(std::span<const double> scores) const {
  std::vector<double> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(predict(s));
  return out;
}

namespace {

double population_sd(std::span<const double> v, double m) {
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

// Standardised problem: y ~ a + c (h - mean h), h = tanh((x - b3) / (2 b4)).
struct Profile {
  std::span<const double> x;
  std::span<const double> y;
  double y_mean = 0.0;

  struct Linear {
    double sse, a, c, h_mean;
  };

  Linear solve(double b3, double log_b4) const {
    const double b4 = std::exp(std::clamp(log_b4, -30.0, 30.0));
    std::vector<double> h(x.size());
    double h_mean = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      h[i] = std::tanh((x[i] - b3) / (2.0 * b4));
      h_mean += h[i];
    }
    h_mean /= static_cast<double>(x.size());
    double shh = 0.0, shy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      shh += (h[i] - h_mean) * (h[i] - h_mean);
      shy += (h[i] - h_mean) * (y[i] - y_mean);
    }
    const double c = shh > 0.0 ? shy / shh : 0.0;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - y_mean - c * (h[i] - h_mean);
      sse += r * r;
    }
    return {sse, y_mean, c, h_mean};
  }
};

struct Point {
  double p[2];
  double f;
};

Point nelder_mead(const Profile& prof, double b3, double t) {
  auto eval = [&](double u, double v) { return Point{{u, v}, prof.solve(u, v).sse}; };
  Point s[3] = {eval(b3, t), eval(b3 + 0.5, t), eval(b3, t + 0.5)};
  auto order = [&] {
    std::sort(std::begin(s), std::end(s), [](const Point& a, const Point& b) { return a.f < b.f; });
  };
  for (int iter = 0; iter < 2000; ++iter) {
    order();
    const double size = std::max(std::abs(s[1].p[0] - s[0].p[0]) + std::abs(s[1].p[1] - s[0].p[1]),
                                 std::abs(s[2].p[0] - s[0].p[0]) + std::abs(s[2].p[1] - s[0].p[1]));
    if (size < 1e-10 || s[2].f - s[0].f <= 1e-16 * (1.0 + s[0].f)) break;
    const double c0 = 0.5 * (s[0].p[0] + s[1].p[0]);
    const double c1 = 0.5 * (s[0].p[1] + s[1].p[1]);
    auto along = [&](double k) { return eval(c0 + k * (s[2].p[0] - c0), c1 + k * (s[2].p[1] - c1)); };
    const Point r = along(-1.0);
    if (r.f < s[0].f) {
      const Point e = along(-2.0);
      s[2] = e.f < r.f ? e : r;
    } else if (r.f < s[1].f) {
      s[2] = r;
    } else {
      const Point k = r.f < s[2].f ? along(-0.5) : along(0.5);
      if (k.f < std::min(r.f, s[2].f)) {
        s[2] = k;
      } else {
        for (int j = 1; j < 3; ++j) s[j] = eval(0.5 * (s[0].p[0] + s[j].p[0]), 0.5 * (s[0].p[1] + s[j].p[1]));
      }
    }
  }
  order();
  return s[0];
}

}  // namespace

LogisticFit fit_logistic(std::span<const double> scores, std::span<const double> qualities) {
  require(scores.size() == qualities.size(), "fit_logistic: length mismatch");
  require(scores.size() >= 5, "fit_logistic: need at least 5 samples");
  const double ms = mean(scores);
  const double ss = population_sd(scores, ms);
  const double mq = mean(qualities);
  const double sq = population_sd(qualities, mq);

  LogisticFit fit;
  if (!(ss > 0.0)) {
    fit.degenerate = true;
    fit.beta = {mq, mq, ms, 1.0};
  } else {
    std::vector<double> x(scores.size()), y(scores.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = (scores[i] - ms) / ss;
      y[i] = sq > 0.0 ? (qualities[i] - mq) / sq : 0.0;
    }
    const Profile prof{x, y, mean(y)};
    Point best{{0.0, 0.0}, std::numeric_limits<double>::infinity()};
    for (double p : {0.2, 0.4, 0.6, 0.8})
      for (double scale : {0.1, 0.3, 1.0, 3.0}) {
        const Point cand = nelder_mead(prof, quantile(x, p), std::log(scale));
        if (cand.f < best.f) best = cand;
      }
    const auto lin = prof.solve(best.p[0], best.p[1]);
    // a + c (h - h_mean) with h = 2g - 1 gives b1 = a - c (1 + h_mean), b2 - b1 = 2c.
    const double b1 = lin.a - lin.c * (1.0 + lin.h_mean);
    const double b2 = b1 + 2.0 * lin.c;
    const double b4 = std::exp(std::clamp(best.p[1], -30.0, 30.0));
    fit.beta = {mq + sq * b1, mq + sq * b2, ms + ss * best.p[0], ss * b4};
  }
  double sse = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double r = fit.predict(scores[i]) - qualities[i];
    sse += r * r;
  }
  fit.residual_sse = sse;
  return fit;
}

CorrelationReport correlation_report(const LogisticFit& fit, std::span<const double> scores,
                                     std::span<const double> qualities) {
  require(scores.size() == qualities.size(), "correlation_report: length mismatch");
  require(scores.size() >= 2, "correlation_report: need at least 2 samples");
  const auto pred = fit.predict(scores);
  CorrelationReport rep;
  rep.cc = pearson(pred, qualities);
  for (std::size_t i = 0; i < pred.size(); ++i) rep.sse += (pred[i] - qualities[i]) * (pred[i] - qualities[i]);
  rep.rmse = std::sqrt(rep.sse / static_cast<double>(pred.size()));
  return rep;
}

void write_table4_csv(std::ostream& out, const std::vector<MetricReport>& rows) {
  out << "# table4 schema: metric,CC,SSE,RMSE\nmetric,CC,SSE,RMSE\n";
  for (const auto& r : rows)
    out << r.metric << ',' << format_number(r.report.cc) << ',' << format_number(r.report.sse)
        << ',' << format_number(r.report.rmse) << '\n';
}

}  // namespace patchlab
