#include "ionpar/oscillatory.hpp"

#include <algorithm>
#include <cmath>

namespace ionpar::osc {

namespace {

constexpr Complex kI{0.0, 1.0};

// sin(x)/x
double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// (sin x - x cos x) / x^3
double sin_minus_xcos_over_x3(double x) {
  if (std::abs(x) < 0.1) {
    const double x2 = x * x;
    return 1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0 - x2 * x2 * x2 / 45360.0;
  }
  return (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

// L^2-normalised triangle integral for small |xL|, |yL|:
// sum_{a,b} (ixL)^a (iyL)^b / (a! b! (b+1)(a+b+2)).
Complex triangle_series(Complex zx, Complex zy) {
  constexpr int kOrder = 30;
  Complex total = 0.0;
  Complex px = 1.0;  // zx^a / a!
  for (int a = 0; a < kOrder; ++a) {
    Complex py = 1.0;  // zy^b / b!
    for (int b = 0; a + b < kOrder; ++b) {
      total += px * py / (static_cast<double>(b + 1) * static_cast<double>(a + b + 2));
      py *= zy / static_cast<double>(b + 1);
    }
    px *= zx / static_cast<double>(a + 1);
  }
  return total;
}

}  // namespace

Complex phi1(Complex z) {
  if (std::abs(z) < 0.5) {
    Complex term = 1.0;
    Complex sum = 1.0;
    for (int n = 2; n < 30; ++n) {
      term *= z / static_cast<double>(n);
      sum += term;
      if (std::abs(term) < 1e-18) break;
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

Complex integral(double nu, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  return std::exp(kI * (nu * mid)) * (2.0 * half * sinc(nu * half));
}

Complex first_moment(double nu, double a, double b) {
  // e^{i nu m} * 2i int_0^c s sin(nu s) ds with c = L/2.
  const double c = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double value = nu * c * c * c * sin_minus_xcos_over_x3(nu * c);
  return std::exp(kI * (nu * mid)) * (2.0 * kI * value);
}

Complex triangle(double x, double y, double a, double b) {
  const double length = b - a;
  const Complex shift = std::exp(kI * ((x + y) * a));
  const double ax = std::abs(x * length);
  const double ay = std::abs(y * length);
  Complex j;
  if (std::max(ax, ay) <= 0.5) {
    j = length * length * triangle_series(kI * (x * length), kI * (y * length));
  } else if (ay >= ax) {
    j = length / (kI * y) * (phi1(kI * ((x + y) * length)) - phi1(kI * (x * length)));
  } else {
    j = length / (kI * x) *
        (std::exp(kI * (x * length)) * phi1(kI * (y * length)) - phi1(kI * ((x + y) * length)));
  }
  return shift * j;
}

}  // namespace ionpar::osc
