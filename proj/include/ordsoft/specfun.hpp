#pragma once
// Special functions backing the beta soft labels and the test p-values.

#include <stdexcept>
#include <string>

namespace ordsoft::specfun {

// Raised when a series or continued fraction does not reach the target
// accuracy within the iteration cap.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kTolerance = 1e-14;
inline constexpr int kMaxIterations = 300;

// Closed sub-interval of [0, 1].
class RealInterval {
public:
    RealInterval(double lo, double hi);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double width() const { return hi_ - lo_; }

private:
    double lo_;
    double hi_;
};

// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

// ln B(a, b).
double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double x, double a, double b);

// Probability mass of Beta(a, b) on the interval.
double beta_interval_mass(const RealInterval& interval, double a, double b);

// Regularized lower incomplete gamma P(s, x).
double reg_inc_gamma_lower(double s, double x);

// Upper tail 1 - P(s, x), computed directly so small tails keep precision.
double reg_inc_gamma_upper(double s, double x);

// C(n, k) as a double; exact for results below 2^53.
double binomial_coefficient(int n, int k);

// Upper tail of the chi-squared distribution with `dof` degrees of freedom.
double chi_squared_sf(double statistic, double dof);

// Upper tail of the F distribution with (d1, d2) degrees of freedom.
double f_distribution_sf(double statistic, double d1, double d2);

// Upper tail of the standard normal.
double normal_sf(double z);

}  // namespace ordsoft::specfun
