#pragma once

namespace symts {

/// Regularized incomplete beta function I_x(a, b), evaluated with the
/// modified Lentz continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// CDF of Student's t distribution with `dof` degrees of freedom.
double student_t_cdf(double t, long dof);

/// Inverse CDF of Student's t, found by bisection on the incomplete-beta
/// tail. Throws InvalidProbability unless 0 < p < 1, InvalidDof unless dof >= 1.
double student_t_quantile(double p, long dof);

/// Inverse CDF of the standard normal distribution. Throws InvalidProbability.
double normal_quantile(double p);

}  // namespace symts
