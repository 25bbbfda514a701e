#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <cstddef>

namespace walkplan {

// Forward-mode dual number carrying W directional derivatives alongside the
// value. Seeding k directions at once lets a single evaluation sweep produce
// k Jacobian columns.
template <int W>
struct DualN {
  static constexpr int kWidth = W;

  double v = 0.0;
  std::array<double, W> d{};

  DualN() = default;
  DualN(double value) : v(value) { d.fill(0.0); }  // NOLINT: implicit by design

  static DualN seeded(double value, int lane, double scale = 1.0) {
    DualN out(value);
    out.d[lane] = scale;
    return out;
  }

  double value() const { return v; }

  DualN& operator+=(const DualN& o) {
    v += o.v;
    for (int i = 0; i < W; ++i) d[i] += o.d[i];
    return *this;
  }
  DualN& operator-=(const DualN& o) {
    v -= o.v;
    for (int i = 0; i < W; ++i) d[i] -= o.d[i];
    return *this;
  }
  DualN& operator*=(const DualN& o) {
    for (int i = 0; i < W; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  DualN& operator/=(const DualN& o) {
    const double inv = 1.0 / o.v;
    v *= inv;
    for (int i = 0; i < W; ++i) d[i] = (d[i] - v * o.d[i]) * inv;
    return *this;
  }
};

template <int W>
inline DualN<W> operator+(DualN<W> a, const DualN<W>& b) { return a += b; }
template <int W>
inline DualN<W> operator-(DualN<W> a, const DualN<W>& b) { return a -= b; }
template <int W>
inline DualN<W> operator*(DualN<W> a, const DualN<W>& b) { return a *= b; }
template <int W>
inline DualN<W> operator/(DualN<W> a, const DualN<W>& b) { return a /= b; }

template <int W>
inline DualN<W> operator+(DualN<W> a, double b) { a.v += b; return a; }
template <int W>
inline DualN<W> operator+(double a, DualN<W> b) { b.v += a; return b; }
template <int W>
inline DualN<W> operator-(DualN<W> a, double b) { a.v -= b; return a; }
template <int W>
inline DualN<W> operator-(double a, DualN<W> b) {
  b.v = a - b.v;
  for (int i = 0; i < W; ++i) b.d[i] = -b.d[i];
  return b;
}
template <int W>
inline DualN<W> operator*(DualN<W> a, double b) {
  a.v *= b;
  for (int i = 0; i < W; ++i) a.d[i] *= b;
  return a;
}
template <int W>
inline DualN<W> operator*(double a, DualN<W> b) { return b * a; }
template <int W>
inline DualN<W> operator/(DualN<W> a, double b) { return a * (1.0 / b); }
template <int W>
inline DualN<W> operator/(double a, const DualN<W>& b) { return DualN<W>(a) / b; }

template <int W>
inline DualN<W> operator-(DualN<W> a) {
  a.v = -a.v;
  for (int i = 0; i < W; ++i) a.d[i] = -a.d[i];
  return a;
}
template <int W>
inline DualN<W> operator+(const DualN<W>& a) { return a; }

template <int W>
inline bool operator<(const DualN<W>& a, const DualN<W>& b) { return a.v < b.v; }
template <int W>
inline bool operator>(const DualN<W>& a, const DualN<W>& b) { return a.v > b.v; }
template <int W>
inline bool operator<=(const DualN<W>& a, const DualN<W>& b) { return a.v <= b.v; }
template <int W>
inline bool operator>=(const DualN<W>& a, const DualN<W>& b) { return a.v >= b.v; }
template <int W>
inline bool operator==(const DualN<W>& a, const DualN<W>& b) { return a.v == b.v; }
template <int W>
inline bool operator!=(const DualN<W>& a, const DualN<W>& b) { return a.v != b.v; }
template <int W>
inline bool operator<(const DualN<W>& a, double b) { return a.v < b; }
template <int W>
inline bool operator>(const DualN<W>& a, double b) { return a.v > b; }
template <int W>
inline bool operator<(double a, const DualN<W>& b) { return a < b.v; }
template <int W>
inline bool operator>(double a, const DualN<W>& b) { return a > b.v; }

// Chain rule helper: out = f(a.v) with derivative factor df.
template <int W>
inline DualN<W> unary(const DualN<W>& a, double f, double df) {
  DualN<W> out;
  out.v = f;
  for (int i = 0; i < W; ++i) out.d[i] = df * a.d[i];
  return out;
}

template <int W>
inline DualN<W> sqrt(const DualN<W>& a) {
  const double s = std::sqrt(a.v);
  return unary(a, s, 0.5 / s);
}
template <int W>
inline DualN<W> abs(const DualN<W>& a) {
  return a.v < 0.0 ? -a : a;
}
template <int W>
inline DualN<W> exp(const DualN<W>& a) {
  const double e = std::exp(a.v);
  return unary(a, e, e);
}
template <int W>
inline DualN<W> log(const DualN<W>& a) {
  return unary(a, std::log(a.v), 1.0 / a.v);
}
template <int W>
inline DualN<W> sin(const DualN<W>& a) {
  return unary(a, std::sin(a.v), std::cos(a.v));
}
template <int W>
inline DualN<W> cos(const DualN<W>& a) {
  return unary(a, std::cos(a.v), -std::sin(a.v));
}
template <int W>
inline DualN<W> tan(const DualN<W>& a) {
  const double c = std::cos(a.v);
  return unary(a, std::tan(a.v), 1.0 / (c * c));
}
template <int W>
inline DualN<W> tanh(const DualN<W>& a) {
  const double t = std::tanh(a.v);
  return unary(a, t, 1.0 - t * t);
}
template <int W>
inline DualN<W> cosh(const DualN<W>& a) {
  return unary(a, std::cosh(a.v), std::sinh(a.v));
}
template <int W>
inline DualN<W> sinh(const DualN<W>& a) {
  return unary(a, std::sinh(a.v), std::cosh(a.v));
}
// sech(x) = 1/cosh(x); d/dx = -sech(x) tanh(x)
template <int W>
inline DualN<W> sech(const DualN<W>& a) {
  const double s = 1.0 / std::cosh(a.v);
  return unary(a, s, -s * std::tanh(a.v));
}
template <int W>
inline DualN<W> atan2(const DualN<W>& y, const DualN<W>& x) {
  const double den = x.v * x.v + y.v * y.v;
  DualN<W> out;
  out.v = std::atan2(y.v, x.v);
  for (int i = 0; i < W; ++i) out.d[i] = (x.v * y.d[i] - y.v * x.d[i]) / den;
  return out;
}
template <int W>
inline DualN<W> pow(const DualN<W>& a, double p) {
  return unary(a, std::pow(a.v, p), p * std::pow(a.v, p - 1.0));
}

// Double forwarders so unqualified calls in scalar-generic code resolve for
// both plain doubles and duals.
inline double sech(double x) { return 1.0 / std::cosh(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline double abs(double x) { return std::abs(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double tan(double x) { return std::tan(x); }
inline double tanh(double x) { return std::tanh(x); }
inline double cosh(double x) { return std::cosh(x); }
inline double sinh(double x) { return std::sinh(x); }
inline double atan2(double y, double x) { return std::atan2(y, x); }
inline double pow(double x, double p) { return std::pow(x, p); }

// Scalar traits so generic code can strip the derivative part.
template <typename T>
struct ScalarTraits {
  static double value(const T& x) { return x; }
};
template <int W>
struct ScalarTraits<DualN<W>> {
  static double value(const DualN<W>& x) { return x.v; }
};

template <typename T>
inline double scalar_value(const T& x) { return ScalarTraits<T>::value(x); }

}  // namespace walkplan

namespace Eigen {

template <int W>
struct NumTraits<walkplan::DualN<W>> : NumTraits<double> {
  using Real = walkplan::DualN<W>;
  using NonInteger = walkplan::DualN<W>;
  using Nested = walkplan::DualN<W>;
  using Literal = double;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1 + W,
    AddCost = 1 + W,
    MulCost = 2 + 2 * W,
  };
};

namespace internal {
template <int W>
struct scalar_product_traits<walkplan::DualN<W>, double> {
  using ReturnType = walkplan::DualN<W>;
};
template <int W>
struct scalar_product_traits<double, walkplan::DualN<W>> {
  using ReturnType = walkplan::DualN<W>;
};
}  // namespace internal

}  // namespace Eigen
