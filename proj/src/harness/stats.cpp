#include "dvps/harness/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace dvps::harness {

namespace {

double chi_square_p(double stat, double dof) {
  if (dof <= 0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), stat));
}

}  // namespace

TestResult chi_square_uniform(const std::vector<std::size_t>& counts) {
  TestResult r;
  if (counts.size() < 2) return {0, 0, 1};
  double total = 0;
  for (std::size_t c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  for (std::size_t c : counts) {
    const double d = static_cast<double>(c) - expected;
    r.statistic += d * d / expected;
  }
  r.dof = static_cast<double>(counts.size() - 1);
  r.p_value = chi_square_p(r.statistic, r.dof);
  return r;
}

TestResult chi_square_two_sample(const std::map<std::string, std::size_t>& a,
                                 const std::map<std::string, std::size_t>& b) {
  std::set<std::string> keys;
  for (const auto& [k, v] : a) if (v > 0) keys.insert(k);
  for (const auto& [k, v] : b) if (v > 0) keys.insert(k);
  double na = 0, nb = 0;
  for (const auto& [k, v] : a) na += static_cast<double>(v);
  for (const auto& [k, v] : b) nb += static_cast<double>(v);
  TestResult r;
  if (keys.size() < 2 || na == 0 || nb == 0) return {0, 0, 1};
  const double n = na + nb;
  for (const std::string& k : keys) {
    const double oa = a.count(k) ? static_cast<double>(a.at(k)) : 0;
    const double ob = b.count(k) ? static_cast<double>(b.at(k)) : 0;
    const double col = oa + ob;
    const double ea = col * na / n, eb = col * nb / n;
    r.statistic += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
  }
  r.dof = static_cast<double>(keys.size() - 1);
  r.p_value = chi_square_p(r.statistic, r.dof);
  return r;
}

double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0, sign = 1;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) return {0, 0, 1};
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  TestResult r;
  r.statistic = d;
  r.p_value = kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
  return r;
}

}  // namespace dvps::harness
