#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "dirac/error.hpp"

namespace dirac {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_subdivisions = std::size_t{1} << 15;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> gk15_nodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> gk15_kronrod_weights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gk15_gauss_weights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Gk15Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  double roundoff = 0.0;  // error floor set by cancellation in the sum
};

template <class F>
Gk15Panel gk15(F& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double gauss = fc * gk15_gauss_weights[3];
  double kronrod = fc * gk15_kronrod_weights[7];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * gk15_nodes[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double pair = f1[j] + f2[j];
    kronrod += gk15_kronrod_weights[j] * pair;
    abs_sum += gk15_kronrod_weights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) {
      gauss += gk15_gauss_weights[j / 2] * pair;
    }
  }
  const double mean = 0.5 * kronrod;
  double asc = gk15_kronrod_weights[7] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    asc += gk15_kronrod_weights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double scale = std::abs(half);
  Gk15Panel p{a, b, kronrod * half, std::abs((kronrod - gauss) * half), 0.0};
  const double resasc = asc * scale;
  const double resabs = abs_sum * scale;
  if (resasc != 0.0 && p.error != 0.0) {
    p.error = resasc * std::min(1.0, std::pow(200.0 * p.error / resasc, 1.5));
  }
  p.roundoff = 50.0 * eps * resabs;
  p.error = std::max(p.error, p.roundoff);
  return p;
}

}  // namespace detail

/// Globally adaptive 15-point Gauss-Kronrod integration of f over [a, b].
/// The panel with the largest reducible error is bisected until the summed
/// estimate meets max(abs_tol, rel_tol |I|), or until the estimate exceeds the
/// summed round-off floor by no more than that tolerance (the result is then
/// as accurate as double precision allows). Throws QuadratureError when the
/// panel budget runs out.
template <class F>
QuadratureResult integrate_gk15(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  if (a == b) {
    return {};
  }
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw QuadratureError("integrate_gk15: non-finite interval bound");
  }
  // Panels are ranked by the part of their error estimate that bisection can
  // still reduce; a panel sitting at its round-off floor gains nothing.
  auto by_excess = [](const detail::Gk15Panel& l, const detail::Gk15Panel& r) {
    return l.error - l.roundoff < r.error - r.roundoff;
  };
  std::vector<detail::Gk15Panel> heap;
  heap.push_back(detail::gk15(f, a, b));
  double value = heap.front().value;
  double error = heap.front().error;
  double floor = heap.front().roundoff;
  for (;;) {
    if (!std::isfinite(value) || !std::isfinite(error)) {
      throw QuadratureError("integrate_gk15: integrand is not finite on [" + std::to_string(a) +
                            ", " + std::to_string(b) + "]");
    }
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
    if (error <= tol || error - floor <= tol) {
      double total = 0.0;
      for (const auto& p : heap) {
        total += p.value;
      }
      return {total, error, heap.size()};
    }
    if (heap.size() >= opt.max_subdivisions) {
      throw QuadratureError("integrate_gk15: tolerance not reached within " +
                            std::to_string(opt.max_subdivisions) + " panels (error estimate " +
                            std::to_string(error) + ")");
    }
    std::pop_heap(heap.begin(), heap.end(), by_excess);
    const detail::Gk15Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    const detail::Gk15Panel left = detail::gk15(f, worst.a, mid);
    const detail::Gk15Panel right = detail::gk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    floor += left.roundoff + right.roundoff - worst.roundoff;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_excess);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_excess);
  }
}

}  // namespace dirac
