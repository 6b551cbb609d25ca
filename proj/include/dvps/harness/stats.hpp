#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace dvps::harness {

struct TestResult {
  double statistic = 0;
  double dof = 0;
  double p_value = 0;
};

/// Goodness of fit of observed counts against equal expected counts.
TestResult chi_square_uniform(const std::vector<std::size_t>& counts);

/// Homogeneity of two samples over a shared set of categories; categories
/// empty in both samples are dropped.
TestResult chi_square_two_sample(const std::map<std::string, std::size_t>& a,
                                 const std::map<std::string, std::size_t>& b);

/// Two-sample Kolmogorov-Smirnov test with the asymptotic distribution.
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Survival function of the Kolmogorov distribution.
double kolmogorov_q(double lambda);

}  // namespace dvps::harness
