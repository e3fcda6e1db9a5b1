#pragma once

#include <span>
#include <vector>

#include "iwf/core.hpp"

namespace iwf::stats {

struct StatTestResult {
  double statistic = 0.0;  // t, chi-square, or r
  double df = 0.0;
  double p_value = 1.0;  // two-sided for t and r
  std::vector<double> means;
  std::vector<double> sds;  // sample standard deviations (n - 1)
};

/// Product-moment correlation; df = n - 2 and p from the t transform.
/// Throws InputError for n < 3, unequal lengths, or a constant input.
StatTestResult pearson_r(std::span<const double> x, std::span<const double> y);

/// Paired t on d = x - y; df = n - 1. All-zero differences give t = 0 and
/// p = 1. Throws InputError for n < 2, unequal lengths, or nonzero
/// constant differences.
StatTestResult paired_t(std::span<const double> x, std::span<const double> y);

/// Pearson chi-square test of independence without continuity correction.
/// Throws InputError for ragged tables, fewer than 2 rows or columns,
/// negative cells, or an expected count of zero.
StatTestResult chi_square(const std::vector<std::vector<double>>& table);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);

/// Upper regularized incomplete gamma Q(a, x).
double incomplete_gamma_q(double a, double x);

/// P(|T| >= |t|) for Student's t with df degrees of freedom.
double student_t_two_sided(double t, double df);

/// P(X >= x) for chi-square with df degrees of freedom.
double chi_square_sf(double x, double df);

}  // namespace iwf::stats
