#include "solvcap/distributions.hpp"

#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include "solvcap/error.hpp"

namespace solvcap {

namespace {

void require_probability(double p, const char* fn) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError(fmt::format("{}: probability {} outside (0, 1)", fn, p));
}

void require_df(double df, const char* fn) {
    if (!(df > 0.0) || !std::isfinite(df)) throw DomainError(fmt::format("{}: degrees of freedom {} must be positive", fn, df));
}

void require_not_nan(double x, const char* fn) {
    if (std::isnan(x)) throw DomainError(fmt::format("{}: argument is NaN", fn));
}

}  // namespace

double normal_cdf(double x) {
    require_not_nan(x, "normal_cdf");
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double normal_quantile(double p) {
    require_probability(p, "normal_quantile");
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double f_cdf(double x, double df1, double df2) {
    require_not_nan(x, "f_cdf");
    require_df(df1, "f_cdf");
    require_df(df2, "f_cdf");
    if (x <= 0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return boost::math::cdf(boost::math::fisher_f_distribution<double>(df1, df2), x);
}

double f_sf(double x, double df1, double df2) {
    require_not_nan(x, "f_sf");
    require_df(df1, "f_sf");
    require_df(df2, "f_sf");
    if (x <= 0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return boost::math::cdf(boost::math::complement(boost::math::fisher_f_distribution<double>(df1, df2), x));
}

double f_quantile(double p, double df1, double df2) {
    require_probability(p, "f_quantile");
    require_df(df1, "f_quantile");
    require_df(df2, "f_quantile");
    return boost::math::quantile(boost::math::fisher_f_distribution<double>(df1, df2), p);
}

double chi2_cdf(double x, double df) {
    require_not_nan(x, "chi2_cdf");
    require_df(df, "chi2_cdf");
    if (x <= 0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return boost::math::cdf(boost::math::chi_squared_distribution<double>(df), x);
}

double chi2_sf(double x, double df) {
    require_not_nan(x, "chi2_sf");
    require_df(df, "chi2_sf");
    if (x <= 0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(df), x));
}

double chi2_quantile(double p, double df) {
    require_probability(p, "chi2_quantile");
    require_df(df, "chi2_quantile");
    return boost::math::quantile(boost::math::chi_squared_distribution<double>(df), p);
}

}  // namespace solvcap
