#include "phasegrating/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phasegrating {

namespace {

constexpr double kRescale = 1e250;

// Power series; only used where its terms do not cancel badly.
double series_j(int n, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= n; ++i) term *= half / i;
  const double q = -half * half;
  double sum = term;
  for (int k = 1; k < 300; ++k) {
    term *= q / (static_cast<double>(k) * (n + k));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

bool use_series(int n, double x) { return x < 1e-3 || (x < n && x * x <= 4.0 * (n + 1)); }

// Starting index for the downward recurrence: even, well above both n and x.
int miller_start(int n_max, double x) {
  const double top = std::max(static_cast<double>(n_max), x);
  int m = static_cast<int>(top + 20.0 + std::sqrt(60.0 * top));
  return m + (m % 2);
}

// Fills out[0..n_max] with J_k(x), x > 0, by Miller's algorithm normalised with
// J_0 + 2 sum J_2k = 1.
void miller(int n_max, double x, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  const int m = miller_start(n_max, x);
  const double two_over_x = 2.0 / x;
  double jp1 = 0.0, j = 1e-300, norm = 0.0;
  for (int k = m; k > 0; --k) {
    const double jm1 = k * two_over_x * j - jp1;
    jp1 = j;
    j = jm1;
    if (k - 1 <= n_max) out[static_cast<std::size_t>(k - 1)] = j;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
    if (std::abs(j) > kRescale) {
      j /= kRescale;
      jp1 /= kRescale;
      norm /= kRescale;
      for (int i = k - 1; i <= n_max; ++i) out[static_cast<std::size_t>(i)] /= kRescale;
    }
  }
  norm += j;  // j now holds the unnormalised J_0
  for (double& v : out) v /= norm;
}

}  // namespace

double bessel_j(int n, double x) {
  double sign = 1.0;
  if (n < 0) {
    n = -n;
    if (n % 2) sign = -sign;
  }
  if (x < 0.0) {
    x = -x;
    if (n % 2) sign = -sign;
  }
  if (!std::isfinite(x)) throw std::invalid_argument("bessel_j: non-finite argument");
  if (x == 0.0) return n == 0 ? sign : 0.0;
  if (use_series(n, x)) return sign * series_j(n, x);
  std::vector<double> table;
  miller(n, x, table);
  return sign * table.back();
}

std::vector<double> bessel_j_table(int n_max, double x) {
  if (n_max < 0) throw std::invalid_argument("bessel_j_table: n_max must be >= 0");
  if (!std::isfinite(x)) throw std::invalid_argument("bessel_j_table: non-finite argument");
  std::vector<double> out;
  if (x == 0.0) {
    out.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    out[0] = 1.0;
    return out;
  }
  const double ax = std::abs(x);
  if (ax < 1e-3) {
    out.resize(static_cast<std::size_t>(n_max) + 1);
    for (int k = 0; k <= n_max; ++k) out[static_cast<std::size_t>(k)] = series_j(k, ax);
  } else {
    miller(n_max, ax, out);
  }
  if (x < 0.0) {
    for (int k = 1; k <= n_max; k += 2) out[static_cast<std::size_t>(k)] = -out[static_cast<std::size_t>(k)];
  }
  return out;
}

}  // namespace phasegrating
