#include "phasegrating/numerics/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "phasegrating/errors.hpp"

namespace phasegrating::numerics {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights (Hairer & Wanner, contd5).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::vector<double> expand_atol(const OdeOptions& opt, std::size_t n) {
  if (opt.atol.empty()) return std::vector<double>(n, opt.rtol);
  if (opt.atol.size() == 1) return std::vector<double>(n, opt.atol[0]);
  if (opt.atol.size() != n) throw std::invalid_argument("atol size does not match state dimension");
  return opt.atol;
}

}  // namespace

std::span<const double> DenseSolution::node_state(std::size_t i) const {
  if (i >= times_.size()) throw std::out_of_range("DenseSolution node index");
  return {states_.data() + i * dim_, dim_};
}

std::vector<double> DenseSolution::evaluate(double t) const {
  std::vector<double> out(dim_);
  evaluate(t, out);
  return out;
}

void DenseSolution::evaluate(double t, std::span<double> out) const {
  if (times_.empty()) throw std::logic_error("empty DenseSolution");
  const bool forward = times_.back() >= times_.front();
  const double lo = forward ? times_.front() : times_.back();
  const double hi = forward ? times_.back() : times_.front();
  const double slack = 1e-13 * std::max({1.0, std::abs(lo), std::abs(hi)});
  if (t < lo - slack || t > hi + slack) {
    std::ostringstream msg;
    msg << "DenseSolution::evaluate: t=" << t << " outside [" << lo << ", " << hi << "]";
    throw std::out_of_range(msg.str());
  }
  if (steps() == 0) {
    std::copy_n(states_.begin(), dim_, out.begin());
    return;
  }
  if (coeffs_.empty()) throw std::logic_error("dense output disabled for this solution");

  // Locate the step containing t.
  std::size_t k;
  if (forward) {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    k = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  } else {
    auto it = std::upper_bound(times_.begin(), times_.end(), t, std::greater<>());
    k = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  }
  k = std::min(k, steps() - 1);
  const double h = times_[k + 1] - times_[k];
  const double s = (t - times_[k]) / h;
  const double s1 = 1.0 - s;
  const double* r = coeffs_.data() + k * 5 * dim_;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double r1 = r[i], r2 = r[dim_ + i], r3 = r[2 * dim_ + i], r4 = r[3 * dim_ + i],
                 r5 = r[4 * dim_ + i];
    out[i] = r1 + s * (r2 + s1 * (r3 + s * (r4 + s1 * r5)));
  }
}

DenseSolution integrate_dopri5(const OdeRhs& rhs, double t0, double t1, std::span<const double> y0,
                               const OdeOptions& options, const StepObserver& observer) {
  const std::size_t n = y0.size();
  if (n == 0) throw std::invalid_argument("integrate_dopri5: empty state");
  if (!(options.rtol > 0.0)) throw std::invalid_argument("integrate_dopri5: rtol must be > 0");
  if (!all_finite(y0)) throw std::invalid_argument("integrate_dopri5: non-finite initial state");
  const std::vector<double> atol = expand_atol(options, n);

  DenseSolution sol;
  sol.dim_ = n;
  sol.times_.push_back(t0);
  sol.states_.assign(y0.begin(), y0.end());
  if (t1 == t0) return sol;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  const double hmax = options.max_step > 0.0 ? std::min(options.max_step, span) : span;

  std::vector<double> y(y0.begin(), y0.end()), ynew(n), ytmp(n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);

  auto eval = [&](double t, const std::vector<double>& state, std::vector<double>& out) {
    rhs(t, state, out);
    if (!all_finite(out)) {
      throw IntegrationError("integrate_dopri5: non-finite derivative", t, y);
    }
  };
  // Trial stages may leave the region where the right-hand side is finite; the step is then
  // rejected rather than the integration abandoned.
  auto try_eval = [&](double t, const std::vector<double>& state, std::vector<double>& out) {
    rhs(t, state, out);
    return all_finite(out);
  };

  auto error_norm = [&](const std::vector<double>& a, const std::vector<double>& b,
                        const std::vector<double>& d) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sk = atol[i] + options.rtol * std::max(std::abs(a[i]), std::abs(b[i]));
      const double r = sk > 0.0 ? d[i] / sk : (d[i] == 0.0 ? 0.0 : HUGE_VAL);
      acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(n));
  };

  double t = t0;
  eval(t, y, k1);

  double h = options.initial_step;
  if (h <= 0.0) {
    // Starting step from the size of y and y' (Hairer's hinit, simplified).
    const double dnf = error_norm(y, y, y);
    const double dny = error_norm(y, y, k1);
    double h0 = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 * span : 0.01 * dnf / dny;
    h0 = std::min(h0, hmax);
    while (true) {
      for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + dir * h0 * k1[i];
      if (try_eval(t + dir * h0, ytmp, k2)) break;
      h0 *= 0.01;
      if (h0 <= span * 1e-16) throw IntegrationError("integrate_dopri5: non-finite derivative", t, y);
    }
    for (std::size_t i = 0; i < n; ++i) k3[i] = (k2[i] - k1[i]) / h0;
    const double der2 = error_norm(y, y, k3);
    const double der = std::max(dny, der2);
    const double h1 = der <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / der, 0.2);
    h = std::min({100.0 * h0, h1, hmax});
  }
  h = std::min(h, hmax);

  // Step-size controller with the Lund stabilisation: h grows at most 10x, shrinks at most 5x.
  constexpr double safe = 0.9, max_shrink = 5.0, max_growth = 10.0, beta = 0.04;
  const double expo1 = 0.2 - beta * 0.75;
  double facold = 1e-4;
  bool reject = false;
  std::size_t nstep = 0;

  while (true) {
    const double remaining = (t1 - t) * dir;
    if (remaining <= 0.0) break;
    bool last = false;
    if (h >= remaining * (1.0 - 1e-14)) {
      h = remaining;
      last = true;
    }
    if (++nstep > options.max_steps) {
      throw IntegrationError("integrate_dopri5: maximum number of steps exceeded", t, y);
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t)) || h <= span * 1e-16) {
      std::ostringstream msg;
      msg << "integrate_dopri5: step size underflow at t=" << t << " (h=" << h << ")";
      throw IntegrationError(msg.str(), t, y);
    }
    const double hs = dir * h;

    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
    ok = ok && try_eval(t + c2 * hs, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    ok = ok && try_eval(t + c3 * hs, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    ok = ok && try_eval(t + c4 * hs, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    ok = ok && try_eval(t + c5 * hs, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double tph = last ? t1 : t + hs;
    ok = ok && try_eval(tph, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    ok = ok && try_eval(tph, ynew, k7);

    if (!ok) {
      h /= max_growth;
      reject = true;
      continue;
    }

    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    const double err = error_norm(y, ynew, ytmp);

    double fac11 = std::pow(err, expo1);
    double fac = fac11 / std::pow(facold, beta);
    fac = std::max(1.0 / max_growth, std::min(max_shrink, fac / safe));
    double hnew = h / fac;

    if (err <= 1.0) {
      facold = std::max(err, 1e-4);
      if (options.dense) {
        const std::size_t base = sol.coeffs_.size();
        sol.coeffs_.resize(base + 5 * n);
        double* r = sol.coeffs_.data() + base;
        for (std::size_t i = 0; i < n; ++i) {
          const double ydiff = ynew[i] - y[i];
          const double bspl = hs * k1[i] - ydiff;
          r[i] = y[i];
          r[n + i] = ydiff;
          r[2 * n + i] = bspl;
          r[3 * n + i] = ydiff - hs * k7[i] - bspl;
          r[4 * n + i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                               d7 * k7[i]);
        }
      }
      std::swap(k1, k7);
      y.swap(ynew);
      t = tph;
      if (options.dense || last) {
        sol.times_.push_back(t);
        sol.states_.insert(sol.states_.end(), y.begin(), y.end());
      }
      if (observer) observer(t, y);
      if (last) break;
      hnew = std::min(hnew, hmax);
      if (reject) hnew = std::min(hnew, h);
      reject = false;
    } else {
      hnew = h / std::min(max_shrink, fac11 / safe);
      reject = true;
    }
    h = hnew;
  }
  return sol;
}

}  // namespace phasegrating::numerics
