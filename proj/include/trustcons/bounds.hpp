#ifndef TRUSTCONS_BOUNDS_HPP
#define TRUSTCONS_BOUNDS_HPP

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "trustcons/trust.hpp"

namespace trustcons::bounds {

/// Inputs shared by the closed-form guarantees.
struct BoundParams {
  double c = -0.05;               // E[alpha] - 1/2 on malicious edges
  double d = 0.05;                // E[alpha] - 1/2 on legitimate edges
  double sigma2_legit = 0.0;      // var(alpha - 1/2), legitimate edges
  double sigma2_malicious = 0.0;  // var(alpha - 1/2), malicious edges
  double eta = 5.0;
  double kappa = 10.0;
  std::size_t n_legit = 0;
  std::size_t n_malicious = 0;
  double delta = 0.05;
  long T0 = 1;
};

BoundParams make_params(const TrustParams& trust, std::size_t n_legit, std::size_t n_malicious, double eta,
                        double kappa, double delta, long T0);

inline double clamp_probability(double p) { return p < 1.0 ? p : 1.0; }

/// Chernoff-Hoeffding bound on misclassifying one edge at time t:
/// max{exp(-2(t+1)d^2), 1{d<0}} for legitimate edges, c in place of d otherwise.
double hoeffding_misclass(long t, EdgeClass cls, const BoundParams& p);

/// Union bound on W_L(k) != W̄_L for some k >= T0-1. Raw value, may exceed 1.
/// Throws std::invalid_argument for T0 < 1.
double prob_not_ideal(const BoundParams& p);

/// Which coefficient the legitimate deviation term carries.
enum class GLegitVariant {
  deviation_theorem,  // eta/delta, the form combined into delta_max
  inline_definition,  // 2·eta/delta
};

double g_legit(const BoundParams& p, GLegitVariant variant = GLegitVariant::deviation_theorem);
double g_malicious(const BoundParams& p);

/// 2(g_legit + g_malicious): deviation from v'x_L(0) exceeded with probability at most delta.
double delta_max(const BoundParams& p);

struct RateBound {
  double deviation = 0.0;          // 2(m - T0 + 1)·rho2^(t-m)·eta
  double probability_floor = 0.0;  // raw, may be negative
};

/// Requires T0 - 1 <= m <= t; throws std::invalid_argument otherwise.
RateBound rate_bound(long t, long m, const BoundParams& p, double rho2);

/// Bound on E||x_L(t) - 1v'x_L(0)||_v, minimized over m in [T0-1, t-1].
/// Requires t >= T0.
double expected_rate_bound(long t, const BoundParams& p, double rho2);

/// Principal branch W0(z) for z >= 0.
double lambert_w0(double z);

/// W0(exp(log_z)), computed without forming exp(log_z).
double lambert_w0_exp(double log_z);

/// Bernstein tail bound on P(sum x_i >= b), one variance per variable.
double bernstein(double b, std::span<const double> variances, double m_abs);

/// Bennett tail bound; requires 0 <= b < n·M.
double bennett(double b, double sigma2_mean, double m_abs, std::size_t n);

/// Improved Bennett tail bound with Lambda = A - W(B e^A); requires 0 < b < n·M.
double improved_bennett(double b, double sigma2_mean, double m_abs, std::size_t n);

/// Variance-refined misclassification bound built on improved Bennett.
/// Throws std::invalid_argument when the edge class variance is zero.
double bennett_misclass(long t, EdgeClass cls, const BoundParams& p);

struct BoundRow {
  long index = 0;  // t for misclassification and rate columns, T0 for the deviation columns
  double hoeffding_legit = 0.0;
  double hoeffding_malicious = 0.0;
  double bennett_legit = 0.0;
  double bennett_malicious = 0.0;
  double prob_not_ideal = 0.0;  // NaN at index 0
  double g_legit = 0.0;
  double g_malicious = 0.0;
  double delta_max = 0.0;
  double rate_bound = 0.0;           // NaN when index < T0 - 1
  double expected_rate_bound = 0.0;  // NaN when index < T0

  double prob_not_ideal_clamped() const { return clamp_probability(prob_not_ideal); }
};

struct BoundReport {
  BoundParams params;
  double rho2 = 0.0;
  std::vector<BoundRow> rows;
};

/// Evaluates every bound on index = 0, step, 2·step, ... <= max_index. The
/// rate column uses m = floor((t + T0) / 2).
BoundReport evaluate(const BoundParams& p, double rho2, long max_index, long step = 1);

/// Columns: t_or_T0, hoeffding_legit, hoeffding_malicious, bennett_legit,
/// bennett_malicious, prob_not_ideal, g_legit, g_malicious, delta_max,
/// rate_bound, expected_rate_bound.
void write_bounds_csv(std::ostream& out, const BoundReport& report);

}  // namespace trustcons::bounds

#endif  // TRUSTCONS_BOUNDS_HPP
