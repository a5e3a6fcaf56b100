#include "secmeas/special.hpp"

#include <array>
#include <cmath>

#include "secmeas/error.hpp"

namespace secmeas::special {
namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kSqrtPi = 1.77245385090551602729816748334114518;

// Weideman's rational approximation of the Faddeeva function. Coefficients
// are the Fourier coefficients of (L^2 + t^2) e^{-t^2} sampled on
// t = L tan(theta / 2); computed once by a direct DFT.
constexpr int kWeidemanN = 40;

struct WeidemanTable {
  double L;
  std::array<double, kWeidemanN> a;  // a[0] multiplies the highest power of Z

  WeidemanTable() {
    const int M = 2 * kWeidemanN;
    const int M2 = 2 * M;
    L = std::sqrt(kWeidemanN / std::sqrt(2.0));
    // f has length M2: f[0] = 0 followed by samples at k = -M+1 .. M-1.
    std::array<double, 2 * 2 * kWeidemanN> f{};
    for (int k = -M + 1; k <= M - 1; ++k) {
      const double theta = k * kPi / M;
      const double t = L * std::tan(theta / 2);
      f[static_cast<std::size_t>(k + M)] = std::exp(-t * t) * (L * L + t * t);
    }
    // fftshift then real part of the forward DFT, divided by M2; the samples
    // above are stored unshifted, so index shifting happens here.
    std::array<double, 2 * 2 * kWeidemanN> shifted{};
    for (int i = 0; i < M2; ++i) shifted[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>((i + M) % M2)];
    for (int j = 1; j <= kWeidemanN; ++j) {
      double re = 0.0;
      for (int i = 0; i < M2; ++i) re += shifted[static_cast<std::size_t>(i)] * std::cos(2.0 * kPi * i * j / M2);
      a[static_cast<std::size_t>(kWeidemanN - j)] = re / M2;
    }
  }
};

const WeidemanTable& weideman() {
  static const WeidemanTable table;
  return table;
}

Complex faddeeva_weideman(Complex z) {
  const auto& tab = weideman();
  const Complex iz(-z.imag(), z.real());
  const Complex denom = tab.L - iz;
  const Complex Z = (tab.L + iz) / denom;
  Complex p = 0.0;
  for (double c : tab.a) p = p * Z + c;
  return 2.0 * p / (denom * denom) + (1.0 / kSqrtPi) / denom;
}

// Laplace continued fraction, accurate for |z| >= 8 in the closed upper half plane.
Complex faddeeva_cf(Complex z) {
  Complex f = z;
  for (int k = 40; k >= 1; --k) f = z - (0.5 * k) / f;
  return Complex(0.0, 1.0 / kSqrtPi) / f;
}

}  // namespace

double exp_ei(double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::OutOfDomain, "exp_ei requires x > 0");
  if (x <= 40.0) {
    // Ei(x) = gamma + ln x + sum x^k / (k k!), all terms positive.
    double term = 1.0, sum = 0.0;
    for (int k = 1; k < 500; ++k) {
      term *= x / k;
      const double add = term / k;
      sum += add;
      if (add < 1e-17 * sum) break;
    }
    return std::exp(-x) * (kEulerGamma + std::log(x) + sum);
  }
  // Asymptotic series (1/x) sum k! / x^k, truncated at the smallest term.
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * k / x;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / x;
}

Complex exp_e1(Complex w) {
  if (w.imag() == 0.0 && w.real() <= 0.0) throw Error(ErrorKind::OutOfDomain, "exp_e1 on the branch cut");
  const double r = std::abs(w);
  if (r + w.real() < 10.0 && r < 500.0) {
    // Power series; cancellation is bounded by e^{|w| + Re w}.
    Complex term = 1.0, sum = 0.0;
    for (int k = 1; k < 2000; ++k) {
      term *= -w / static_cast<double>(k);
      const Complex add = term / static_cast<double>(k);
      sum += add;
      if (k > 2 && std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return std::exp(w) * (-kEulerGamma - std::log(w) - sum);
  }
  // e^w E1(w) = 1/(w+1- 1/(w+3- 4/(w+5- ...))), modified Lentz.
  constexpr double tiny = 1e-300;
  Complex b = w + 1.0;
  Complex c = 1.0 / tiny;
  Complex d = 1.0 / b;
  Complex h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const Complex delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) return h;
  }
  throw Error(ErrorKind::NonFinite, "exp_e1 continued fraction did not converge");
}

Complex faddeeva(Complex z) {
  if (z.imag() < 0.0) throw Error(ErrorKind::OutOfDomain, "faddeeva implemented for Im z >= 0 only");
  return std::abs(z) >= 8.0 ? faddeeva_cf(z) : faddeeva_weideman(z);
}

double dawson(double x) {
  const double ax = std::abs(x);
  double value;
  if (ax < 0.5) {
    // F(x) = sum (-1)^k 2^k x^{2k+1} / (1*3*...*(2k+1)).
    double term = ax, sum = ax;
    const double x2 = ax * ax;
    for (int k = 1; k < 60; ++k) {
      term *= -2.0 * x2 / (2 * k + 1);
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    value = sum;
  } else {
    value = 0.5 * kSqrtPi * faddeeva(Complex(ax, 0.0)).imag();
  }
  return x < 0 ? -value : value;
}

}  // namespace secmeas::special
