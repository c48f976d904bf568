// Copyright 2026 The dephase authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dephase/continuum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "dephase/core.hpp"

namespace dephase {

namespace {

// 15-point Kronrod / 7-point Gauss pair on [-1, 1]. Even indices of kXgk are
// Kronrod-only nodes, odd indices plus the midpoint carry the embedded Gauss
// rule (weights kWg).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

// A panel holding more than this many half-periods of sin^2(omega t / 2) is
// not resolved pointwise; beyond it the oscillation is integrated in averaged
// form (see gamma_continuum).
constexpr double kMaxResolvedHalfPeriods = 4096.0;
constexpr std::size_t kResolvedHalfPeriods = 1024;
constexpr std::size_t kMaxPanels = 32768;

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

template <class F>
Panel evaluate_panel(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resg = kWg[3] * fc;
  double resk = kWgk[7] * fc;
  for (int j = 0; j < 3; ++j) {
    const int i = 2 * j + 1;
    const double dx = h * kXgk[i];
    const double pair = f(c - dx) + f(c + dx);
    resg += kWg[j] * pair;
    resk += kWgk[i] * pair;
  }
  for (int j = 0; j < 4; ++j) {
    const int i = 2 * j;
    const double dx = h * kXgk[i];
    resk += kWgk[i] * (f(c - dx) + f(c + dx));
  }
  return Panel{a, b, resk * h, std::abs(resk - resg) * h};
}

struct WorstFirst {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) {
      return x.error < y.error;
    }
    return x.a > y.a;
  }
};

struct Accumulated {
  double value;
  double error;
  bool converged;
};

// Bisect the worst panel until the summed error estimate meets the target or
// the panel budget runs out. Deterministic: worst-error-first with ties broken
// on the left endpoint, and the final value is a pairwise sum over panels
// ordered by position.
template <class F>
Accumulated refine(const F& f, std::vector<Panel> seeds, double tol_rel,
                   double tol_abs, std::size_t max_panels) {
  double value = 0.0;
  double error = 0.0;
  for (const Panel& p : seeds) {
    value += p.value;
    error += p.error;
  }
  std::priority_queue<Panel, std::vector<Panel>, WorstFirst> heap(
      WorstFirst{}, std::move(seeds));
  std::size_t count = heap.size();
  while (error > std::max(tol_rel * std::abs(value), tol_abs) &&
         count < max_panels) {
    const Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      break;
    }
    heap.pop();
    const Panel left = evaluate_panel(f, worst.a, mid);
    const Panel right = evaluate_panel(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  std::vector<double> values;
  std::vector<double> errors;
  values.reserve(panels.size());
  errors.reserve(panels.size());
  for (const Panel& p : panels) {
    values.push_back(p.value);
    errors.push_back(p.error);
  }
  const double v = pairwise_sum(values);
  const double e = pairwise_sum(errors);
  return Accumulated{v, e, e <= std::max(tol_rel * std::abs(v), tol_abs)};
}

template <class F>
std::vector<Panel> equal_panels(const F& f, double a, double b,
                                std::size_t n) {
  std::vector<Panel> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 =
        (i == 0) ? a : a + (b - a) * (static_cast<double>(i) / n);
    const double x1 =
        (i + 1 == n) ? b : a + (b - a) * (static_cast<double>(i + 1) / n);
    out.push_back(evaluate_panel(f, x0, x1));
  }
  return out;
}

template <class F>
std::vector<Panel> geometric_panels(const F& f, double a, double b,
                                    std::size_t n) {
  const double r = std::log(b / a);
  std::vector<Panel> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 =
        (i == 0) ? a : a * std::exp(r * (static_cast<double>(i) / n));
    const double x1 =
        (i + 1 == n) ? b : a * std::exp(r * (static_cast<double>(i + 1) / n));
    out.push_back(evaluate_panel(f, x0, x1));
  }
  return out;
}

// Integrand with sin^2 replaced by its mean value 1; multiply by 1/2 at the
// call sites that average the oscillation.
double envelope(const SpectralFunction& spec, const Temperature& beta,
                double omega) {
  return 8.0 * spec.amplitude * std::pow(omega, spec.exponent - 2.0) *
         std::exp(-omega / spec.cutoff) * beta.coth_half(omega);
}

// Upper bound on the neglected integral beyond omega = L * omega_c, using
// sin^2 <= 1, sin^2(x) <= x^2, coth decreasing, and
// int_L^inf u^(n-2) e^-u du <= 2 L^(n-2) e^-L for L >= 2|n - 2| + 4.
double tail_bound(const SpectralFunction& spec, const Temperature& beta,
                  double big_l, double t) {
  const double w = big_l * spec.cutoff;
  const double coth = beta.coth_half(w);
  const double flat = 16.0 * spec.amplitude * spec.cutoff *
                      std::pow(w, spec.exponent - 2.0) * std::exp(-big_l) *
                      coth;
  const double quadratic = 4.0 * spec.amplitude * t * t * spec.cutoff *
                           std::pow(w, spec.exponent) * std::exp(-big_l) *
                           coth;
  return std::min(flat, quadratic);
}

}  // namespace

SpectralFunction::SpectralFunction(double amplitude_in, double exponent_in,
                                   double cutoff_in)
    : amplitude(amplitude_in), exponent(exponent_in), cutoff(cutoff_in) {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw InvalidArgument("spectral amplitude must be finite and > 0: got " +
                          std::to_string(amplitude_in));
  }
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    throw InvalidArgument("spectral exponent must be finite and > 0: got " +
                          std::to_string(exponent_in));
  }
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) {
    throw NonpositiveOmega("spectral cutoff must be finite and > 0: got " +
                           std::to_string(cutoff_in));
  }
}

double spectral_weight(double omega, const SpectralFunction& spec) {
  if (!(omega > 0.0)) {
    throw NonpositiveOmega("spectral_weight needs omega > 0: got " +
                           std::to_string(omega));
  }
  return spec.amplitude * std::pow(omega, spec.exponent) *
         std::exp(-omega / spec.cutoff);
}

double gamma_integrand(const SpectralFunction& spec, const Temperature& beta,
                       double t, double omega) {
  if (!(omega > 0.0)) {
    throw NonpositiveOmega("gamma integrand needs omega > 0: got " +
                           std::to_string(omega));
  }
  const double s = std::sin(0.5 * omega * t);
  return 8.0 * spec.amplitude * std::pow(omega, spec.exponent - 2.0) *
         std::exp(-omega / spec.cutoff) * s * s * beta.coth_half(omega);
}

IntegralResult gamma_continuum(const SpectralFunction& spec,
                               const Temperature& beta, double t, double tol) {
  if (!std::isfinite(t)) {
    throw InvalidArgument("time must be finite");
  }
  if (t < 0.0) {
    throw NegativeTime("gamma is defined for t >= 0: got " +
                       std::to_string(t));
  }
  if (!(tol > 0.0)) {
    throw InvalidArgument("quadrature tolerance must be > 0");
  }
  if (t == 0.0) {
    return IntegralResult{0.0, 0.0};
  }

  const double pi = std::numbers::pi;
  const auto f = [&](double w) { return gamma_integrand(spec, beta, t, w); };
  const auto half_env = [&](double w) { return 0.5 * envelope(spec, beta, w); };

  double big_l = std::max(40.0, 4.0 * spec.exponent);
  double upper = big_l * spec.cutoff;

  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  const bool resolved = upper * t / pi <= kMaxResolvedHalfPeriods;

  if (resolved) {
    const double half_periods = upper * t / pi;
    const std::size_t n0 = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(0.5 * half_periods)), 8, 4096);
    const Accumulated whole =
        refine(f, equal_panels(f, 0.0, upper, n0), tol, 0.0, kMaxPanels);
    value = whole.value;
    error = whole.error;
    converged = whole.converged;
  } else {
    // Oscillation-resolved low range [0, split] with split * t = 1024 pi,
    // then the averaged weight envelope/2 above it. Averaging sin^2 to 1/2
    // drops int envelope(w) * (-cos(w t) / 2) dw; two integrations by parts
    // turn that into boundary terms at `split` (the far end is
    // exponentially small) plus a remainder of order envelope''/t^2.
    const double split =
        static_cast<double>(kResolvedHalfPeriods) * pi / t;
    const Accumulated low =
        refine(f, equal_panels(f, 0.0, split, kResolvedHalfPeriods), tol, 0.0,
               kMaxPanels);
    const double decades = std::log10(upper / split);
    const std::size_t n_smooth = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(8.0 * decades)), 8, 512);
    const Accumulated smooth =
        refine(half_env, geometric_panels(half_env, split, upper, n_smooth),
               tol, 0.0, kMaxPanels);
    const double h = split / 64.0;
    const double em2 = envelope(spec, beta, split - 2.0 * h);
    const double em1 = envelope(spec, beta, split - h);
    const double e0 = envelope(spec, beta, split);
    const double ep1 = envelope(spec, beta, split + h);
    const double ep2 = envelope(spec, beta, split + 2.0 * h);
    const double d_env = (em2 - 8.0 * em1 + 8.0 * ep1 - ep2) / (12.0 * h);
    const double d2_env =
        (-em2 + 16.0 * em1 - 30.0 * e0 + 16.0 * ep1 - ep2) / (12.0 * h * h);
    const double correction =
        0.5 * e0 * std::sin(split * t) / t +
        0.5 * d_env * std::cos(split * t) / (t * t) -
        0.5 * d2_env * std::sin(split * t) / (t * t * t);
    const double ibp_error =
        std::abs(d2_env) / (t * t * t) + envelope(spec, beta, upper);
    value = low.value + smooth.value + correction;
    error = low.error + smooth.error + ibp_error;
    converged = low.converged && smooth.converged;
  }

  // Extend the cutoff until the analytic tail bound is well below the
  // requested tolerance. With the default start at 40 decay lengths this
  // loop is almost never entered.
  double tb = tail_bound(spec, beta, big_l, t);
  while (tb > 0.1 * tol * std::abs(value) && big_l < 640.0) {
    const double next_upper = (big_l + 40.0) * spec.cutoff;
    const double strip_half_periods = (next_upper - upper) * t / pi;
    Accumulated strip{};
    if (strip_half_periods <= kMaxResolvedHalfPeriods) {
      const std::size_t n0 = std::clamp<std::size_t>(
          static_cast<std::size_t>(std::ceil(0.5 * strip_half_periods)), 8,
          4096);
      strip = refine(f, equal_panels(f, upper, next_upper, n0), tol, 0.0,
                     kMaxPanels);
    } else {
      strip = refine(half_env, equal_panels(half_env, upper, next_upper, 64),
                     tol, 0.0, kMaxPanels);
      strip.error += 2.0 * envelope(spec, beta, upper) / t;
    }
    value += strip.value;
    error += strip.error;
    converged = converged && strip.converged;
    upper = next_upper;
    big_l += 40.0;
    tb = tail_bound(spec, beta, big_l, t);
  }
  error += tb;

  if (!converged || error > tol * std::abs(value)) {
    throw QuadratureNonconvergence(
        "gamma quadrature reached error " + std::to_string(error) +
            " on value " + std::to_string(value) +
            ", above requested relative tolerance " + std::to_string(tol),
        value, error);
  }
  return IntegralResult{value, error};
}

Regime regime(double t, const Temperature& beta, const SpectralFunction& spec) {
  if (!(t >= 0.0)) {
    throw NegativeTime("regime classification needs t >= 0: got " +
                       std::to_string(t));
  }
  const double inv_cutoff = 1.0 / spec.cutoff;
  const double b = beta.beta();
  if (!(inv_cutoff < b)) {
    throw RegimeUndefined(
        "regime structure needs 1/omega_c < beta: got 1/omega_c = " +
        std::to_string(inv_cutoff) + ", beta = " + std::to_string(b));
  }
  RegimeKind kind = RegimeKind::Thermal;
  if (t < inv_cutoff) {
    kind = RegimeKind::Quiet;
  } else if (t < b) {
    kind = RegimeKind::Quantum;
  }
  const double separation = b * spec.cutoff;
  return Regime{kind, inv_cutoff, b, separation, separation < 100.0};
}

DecoherenceCurve sample_gamma_discrete(const DiscreteBath& bath,
                                       const Temperature& beta,
                                       const std::vector<double>& times) {
  DecoherenceCurve curve;
  curve.source = CurveSource::Discrete;
  curve.times = times;
  curve.values.reserve(times.size());
  curve.quad_errors.assign(times.size(), 0.0);
  for (double t : times) {
    curve.values.push_back(gamma_discrete(bath, beta, t));
  }
  return curve;
}

DecoherenceCurve sample_gamma_continuum(const SpectralFunction& spec,
                                        const Temperature& beta,
                                        const std::vector<double>& times,
                                        double tol) {
  DecoherenceCurve curve;
  curve.source = CurveSource::Continuum;
  curve.times = times;
  curve.values.reserve(times.size());
  curve.quad_errors.reserve(times.size());
  for (double t : times) {
    const IntegralResult r = gamma_continuum(spec, beta, t, tol);
    curve.values.push_back(r.value);
    curve.quad_errors.push_back(r.error);
  }
  return curve;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count == 0) {
    throw InvalidArgument("grid needs at least one point");
  }
  if (!(lo <= hi)) {
    throw InvalidArgument("grid bounds out of order");
  }
  if (count == 1) {
    return {lo};
  }
  std::vector<double> grid(count);
  const double span = hi - lo;
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = lo + span * (static_cast<double>(i) / (count - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (count == 0) {
    throw InvalidArgument("grid needs at least one point");
  }
  if (!(lo > 0.0)) {
    throw InvalidArgument("log grid needs lo > 0");
  }
  if (!(lo <= hi)) {
    throw InvalidArgument("grid bounds out of order");
  }
  if (count == 1) {
    return {lo};
  }
  std::vector<double> grid(count);
  const double r = std::log(hi / lo);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = lo * std::exp(r * (static_cast<double>(i) / (count - 1)));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

FitResult fit_asymptotic_exponent(const DecoherenceCurve& curve,
                                  const TimeWindow& window, FitModel model) {
  if (!(window.lo <= window.hi)) {
    throw InvalidArgument("fit window bounds out of order");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    const double t = curve.times[i];
    if (t < window.lo || t > window.hi || !(t > 0.0)) {
      continue;
    }
    const double g = curve.values[i];
    if (model == FitModel::PowerLaw) {
      if (!(g > 0.0)) {
        throw NonpositiveGamma(
            "power-law fit needs Gamma > 0 at every windowed point; Gamma(" +
            std::to_string(t) + ") = " + std::to_string(g));
      }
      xs.push_back(std::log(t));
      ys.push_back(std::log(g));
    } else {
      xs.push_back(std::log(t));
      ys.push_back(g);
    }
  }
  if (xs.size() < 8) {
    throw InsufficientSamples("fit window holds " + std::to_string(xs.size()) +
                              " usable points; need >= 8");
  }
  const std::size_t n = xs.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) {
    throw InsufficientSamples("fit window has no time spread");
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  double ymin = ys[0];
  double ymax = ys[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double d = ys[i] - (intercept + slope * xs[i]);
    ss += d * d;
    ymin = std::min(ymin, ys[i]);
    ymax = std::max(ymax, ys[i]);
  }
  const double rms = std::sqrt(ss / static_cast<double>(n));
  const double range = ymax - ymin;
  const double residual = range > 0.0 ? rms / range : 0.0;
  return FitResult{slope, residual};
}

bool decoherence_complete(const SpectralFunction& spec) {
  return spec.exponent < 2.0;
}

DiscreteBath discretize_spectral(const SpectralFunction& spec, std::size_t K,
                                 double omega_max) {
  if (K < 1) {
    throw InvalidArgument("discretization needs at least one mode");
  }
  if (!(omega_max > 0.0)) {
    throw NonpositiveOmega("discretization needs omega_max > 0: got " +
                           std::to_string(omega_max));
  }
  const double domega = omega_max / static_cast<double>(K);
  DiscreteBath bath;
  bath.modes.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    const double omega = (static_cast<double>(k) + 0.5) * domega;
    const double g = std::sqrt(spectral_weight(omega, spec) * domega);
    bath.modes.emplace_back(omega, Complex(g, 0.0));
  }
  return bath;
}

ThermalFit fit_thermal_exponent(const SpectralFunction& spec,
                                const Temperature& beta, double quad_tol) {
  if (beta.is_infinite()) {
    throw RegimeUndefined("thermal fit needs finite temperature");
  }
  const double b = beta.beta();
  if (1.0 / spec.cutoff >= b) {
    throw RegimeUndefined("thermal fit needs 1/omega_c < beta");
  }
  const double cap = 1e12 * b;
  double start = 10.0 * b;
  double prev = std::numeric_limits<double>::quiet_NaN();
  int escalations = 0;
  for (;;) {
    const TimeWindow window{start, 100.0 * start};
    const std::vector<double> times = log_grid(window.lo, window.hi, 33);
    const DecoherenceCurve curve =
        sample_gamma_continuum(spec, beta, times, quad_tol);
    const FitResult fit =
        fit_asymptotic_exponent(curve, window, FitModel::PowerLaw);
    if (!std::isnan(prev) && std::abs(fit.slope - prev) < 0.01) {
      return ThermalFit{fit, window, true, escalations};
    }
    prev = fit.slope;
    if (start >= cap) {
      return ThermalFit{fit, window, false, escalations};
    }
    start *= 10.0;
    ++escalations;
  }
}

}  // namespace dephase
