#pragma once

// Probability functions needed by the hypothesis tests and risk models.
// Invalid parameters throw DomainError.

namespace solvcap {

double normal_cdf(double x);
double normal_quantile(double p);

double f_cdf(double x, double df1, double df2);
// P(F > x) for F ~ F(df1, df2).
double f_sf(double x, double df1, double df2);
double f_quantile(double p, double df1, double df2);

double chi2_cdf(double x, double df = 1.0);
double chi2_sf(double x, double df = 1.0);
double chi2_quantile(double p, double df = 1.0);

}  // namespace solvcap
