#include "trustcons/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "trustcons/format.hpp"

namespace trustcons::bounds {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxIterations = 100;
constexpr double kRelativeStep = 1e-14;

// exp(-2·start·x^2) / (1 - exp(-2x^2)): the tail sum of per-step Hoeffding terms.
double geometric_tail(double start, double x) {
  return std::exp(-2.0 * start * x * x) / -std::expm1(-2.0 * x * x);
}

// |L|^2·tail(start, d) + |L||M|·tail(start, c).
double not_ideal_sum(const BoundParams& p, double start) {
  const double n_l = static_cast<double>(p.n_legit);
  const double n_m = static_cast<double>(p.n_malicious);
  double sum = n_l * n_l * geometric_tail(start, p.d);
  if (p.n_malicious > 0) sum += n_l * n_m * geometric_tail(start, p.c);
  return sum;
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

bool converged(double step, double value) {
  return std::abs(step) <= kRelativeStep * std::abs(value) || std::abs(step) < 1e-300;
}

// Per-step log factor of the variance-refined bound for drift `gap` > 0 and variance `sigma2`
// on a sum of variables bounded by 1.
double refined_log_factor(double gap, double sigma2) {
  const double a = 1.0 / sigma2 + 1.0 / gap - 1.0;
  const double b = 1.0 / gap - 1.0;
  const double lambda = a - lambert_w0_exp(a + std::log(b));
  return -gap * lambda + std::log1p(sigma2 * (std::expm1(lambda) - lambda));
}

}  // namespace

BoundParams make_params(const TrustParams& trust, std::size_t n_legit, std::size_t n_malicious, double eta,
                        double kappa, double delta, long T0) {
  BoundParams p;
  p.c = trust.c();
  p.d = trust.d();
  p.sigma2_legit = trust.variance(EdgeClass::legit);
  p.sigma2_malicious = trust.variance(EdgeClass::malicious);
  p.eta = eta;
  p.kappa = kappa;
  p.n_legit = n_legit;
  p.n_malicious = n_malicious;
  p.delta = delta;
  p.T0 = T0;
  return p;
}

double hoeffding_misclass(long t, EdgeClass cls, const BoundParams& p) {
  const double gap = cls == EdgeClass::legit ? p.d : p.c;
  const bool uninformative = cls == EdgeClass::legit ? p.d < 0.0 : p.c > 0.0;
  const double tail = std::exp(-2.0 * static_cast<double>(t + 1) * gap * gap);
  return std::max(tail, uninformative ? 1.0 : 0.0);
}

double prob_not_ideal(const BoundParams& p) {
  if (p.T0 < 1) throw std::invalid_argument("prob_not_ideal requires T0 >= 1");
  return not_ideal_sum(p, static_cast<double>(p.T0));
}

double g_legit(const BoundParams& p, GLegitVariant variant) {
  check_delta(p.delta);
  const double coeff = (variant == GLegitVariant::inline_definition ? 2.0 : 1.0) * p.eta / p.delta;
  const double n_l = static_cast<double>(p.n_legit);
  const double n_m = static_cast<double>(p.n_malicious);
  const double T0 = static_cast<double>(p.T0);
  double g = coeff * n_l * n_l * geometric_tail(T0, p.d);
  if (p.n_malicious > 0) g += coeff * n_l * n_m * geometric_tail(T0, p.c);
  return g;
}

double g_malicious(const BoundParams& p) {
  check_delta(p.delta);
  if (p.n_malicious == 0) return 0.0;
  if (!(p.kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  const double n_l = static_cast<double>(p.n_legit);
  const double n_m = static_cast<double>(p.n_malicious);
  return p.eta * n_l * n_m / (p.delta * p.kappa) * geometric_tail(static_cast<double>(p.T0), p.c);
}

double delta_max(const BoundParams& p) {
  return 2.0 * (g_legit(p, GLegitVariant::deviation_theorem) + g_malicious(p));
}

RateBound rate_bound(long t, long m, const BoundParams& p, double rho2) {
  if (m < p.T0 - 1 || m > t) {
    throw std::invalid_argument("rate_bound requires T0-1 <= m <= t (m=" + std::to_string(m) + ")");
  }
  RateBound r;
  r.deviation = 2.0 * static_cast<double>(m - p.T0 + 1) * std::pow(rho2, static_cast<double>(t - m)) * p.eta;
  r.probability_floor = 1.0 - not_ideal_sum(p, static_cast<double>(m + 1));
  return r;
}

double expected_rate_bound(long t, const BoundParams& p, double rho2) {
  if (t < p.T0) throw std::invalid_argument("expected_rate_bound requires t >= T0");
  double best = std::numeric_limits<double>::infinity();
  for (long m = p.T0 - 1; m <= t - 1; ++m) {
    const double contraction =
        2.0 * static_cast<double>(m - p.T0 + 1) * std::pow(rho2, static_cast<double>(t - m)) * p.eta;
    const double misclassified = 2.0 * p.eta * not_ideal_sum(p, static_cast<double>(m + 1));
    best = std::min(best, contraction + misclassified);
  }
  return best;
}

double lambert_w0(double z) {
  if (!(z >= 0.0)) throw std::invalid_argument("lambert_w0 requires z >= 0");
  if (z == 0.0) return 0.0;
  if (z > 1e12) return lambert_w0_exp(std::log(z));

  double w;
  if (z < std::exp(1.0)) {
    w = std::log1p(z);
  } else {
    const double l1 = std::log(z);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  for (int it = 0; it < kMaxIterations; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    const double fp = ew * (w + 1.0);
    const double step = f / (fp - (w + 2.0) * f / (2.0 * w + 2.0));
    w -= step;
    if (converged(step, w)) return w;
  }
  throw std::runtime_error("lambert_w0 did not converge for z=" + std::to_string(z));
}

double lambert_w0_exp(double log_z) {
  if (log_z < 20.0) return lambert_w0(std::exp(log_z));
  // Solve w + ln w = log_z.
  double w = log_z - std::log(log_z);
  for (int it = 0; it < kMaxIterations; ++it) {
    const double g = w + std::log(w) - log_z;
    const double step = g / (1.0 + 1.0 / w);
    w -= step;
    if (converged(step, w)) return w;
  }
  throw std::runtime_error("lambert_w0_exp did not converge for log_z=" + std::to_string(log_z));
}

double bernstein(double b, std::span<const double> variances, double m_abs) {
  if (b < 0.0) throw std::invalid_argument("bernstein requires b >= 0");
  if (!(m_abs > 0.0)) throw std::invalid_argument("bernstein requires M > 0");
  if (b == 0.0) return 1.0;
  const double total = std::accumulate(variances.begin(), variances.end(), 0.0);
  return std::exp(-(0.5 * b * b) / (total + m_abs * b / 3.0));
}

double bennett(double b, double sigma2_mean, double m_abs, std::size_t n) {
  const double n_d = static_cast<double>(n);
  if (!(m_abs > 0.0) || !(sigma2_mean > 0.0) || n == 0) {
    throw std::invalid_argument("bennett requires M > 0, sigma^2 > 0 and n > 0");
  }
  if (b < 0.0 || b >= n_d * m_abs) throw std::invalid_argument("bennett requires 0 <= b < n·M");
  if (b == 0.0) return 1.0;
  const double total_var = n_d * sigma2_mean;
  const double x = b * m_abs / total_var;
  const double h = (1.0 + x) * std::log1p(x) - x;
  return std::exp(-total_var / (m_abs * m_abs) * h);
}

double improved_bennett(double b, double sigma2_mean, double m_abs, std::size_t n) {
  const double n_d = static_cast<double>(n);
  if (!(m_abs > 0.0) || !(sigma2_mean > 0.0) || n == 0) {
    throw std::invalid_argument("improved_bennett requires M > 0, sigma^2 > 0 and n > 0");
  }
  if (!(b > 0.0) || b >= n_d * m_abs) throw std::invalid_argument("improved_bennett requires 0 < b < n·M");
  const double a = m_abs * m_abs / sigma2_mean + n_d * m_abs / b - 1.0;
  const double bb = n_d * m_abs / b - 1.0;
  const double lambda = a - lambert_w0_exp(a + std::log(bb));
  const double ratio = sigma2_mean / (m_abs * m_abs);
  return std::exp(-lambda * b / m_abs + n_d * std::log1p(ratio * (std::expm1(lambda) - lambda)));
}

double bennett_misclass(long t, EdgeClass cls, const BoundParams& p) {
  const double steps = static_cast<double>(t + 1);
  if (cls == EdgeClass::legit) {
    if (p.d <= 0.0) return 1.0;
    if (!(p.sigma2_legit > 0.0)) throw std::invalid_argument("bennett_misclass needs a positive legitimate variance");
    return std::exp(steps * refined_log_factor(p.d, p.sigma2_legit));
  }
  if (p.c >= 0.0) return 1.0;
  if (!(p.sigma2_malicious > 0.0)) {
    throw std::invalid_argument("bennett_misclass needs a positive malicious variance");
  }
  // Mirrored case: A_c = 1/sigma^2 - 1/c - 1, B_c = -1/c - 1, exponent c(t+1)Λ_c + ...
  return std::exp(steps * refined_log_factor(-p.c, p.sigma2_malicious));
}

BoundReport evaluate(const BoundParams& p, double rho2, long max_index, long step) {
  if (step < 1) throw std::invalid_argument("bound grid step must be positive");
  if (max_index < 0) throw std::invalid_argument("bound grid must be non-empty");
  BoundReport report;
  report.params = p;
  report.rho2 = rho2;
  for (long k = 0; k <= max_index; k += step) {
    BoundRow row;
    row.index = k;
    row.hoeffding_legit = hoeffding_misclass(k, EdgeClass::legit, p);
    row.hoeffding_malicious = hoeffding_misclass(k, EdgeClass::malicious, p);
    row.bennett_legit = p.sigma2_legit > 0.0 ? bennett_misclass(k, EdgeClass::legit, p) : kNaN;
    row.bennett_malicious = p.sigma2_malicious > 0.0 ? bennett_misclass(k, EdgeClass::malicious, p) : kNaN;

    BoundParams at_start = p;
    at_start.T0 = k;
    row.prob_not_ideal = k >= 1 ? prob_not_ideal(at_start) : kNaN;
    row.g_legit = g_legit(at_start);
    row.g_malicious = g_malicious(at_start);
    row.delta_max = delta_max(at_start);

    row.rate_bound = k >= p.T0 - 1 ? rate_bound(k, (k + p.T0) / 2, p, rho2).deviation : kNaN;
    row.expected_rate_bound = k >= p.T0 ? expected_rate_bound(k, p, rho2) : kNaN;
    report.rows.push_back(row);
  }
  return report;
}

void write_bounds_csv(std::ostream& out, const BoundReport& report) {
  out << "t_or_T0,hoeffding_legit,hoeffding_malicious,bennett_legit,bennett_malicious,prob_not_ideal,"
         "g_legit,g_malicious,delta_max,rate_bound,expected_rate_bound\n";
  for (const auto& r : report.rows) {
    out << r.index << ',' << format_real(r.hoeffding_legit) << ',' << format_real(r.hoeffding_malicious) << ','
        << format_real(r.bennett_legit) << ',' << format_real(r.bennett_malicious) << ','
        << format_real(r.prob_not_ideal) << ',' << format_real(r.g_legit) << ',' << format_real(r.g_malicious)
        << ',' << format_real(r.delta_max) << ',' << format_real(r.rate_bound) << ','
        << format_real(r.expected_rate_bound) << '\n';
  }
}

}  // namespace trustcons::bounds
