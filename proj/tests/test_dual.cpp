#include <doctest.h>

#include <cmath>

#include "walkplan/types.hpp"

using namespace walkplan;

using D4 = DualN<4>;

namespace {
D4 var(double v, int lane) { return D4::seeded(v, lane); }
}  // namespace

TEST_CASE("dual arithmetic propagates derivatives") {
  D4 x = var(2.0, 0);
  D4 y = var(3.0, 1);

  D4 s = x * y + x / y;
  CHECK(s.v == doctest::Approx(6.0 + 2.0 / 3.0));
  CHECK(s.d[0] == doctest::Approx(3.0 + 1.0 / 3.0));         // d/dx
  CHECK(s.d[1] == doctest::Approx(2.0 - 2.0 / 9.0));         // d/dy
  CHECK(s.d[2] == 0.0);
}

TEST_CASE("dual elementary functions match finite differences") {
  const double h = 1e-7;
  auto fd = [&](auto f, double x) { return (f(x + h) - f(x - h)) / (2 * h); };

  for (double x : {-1.3, -0.2, 0.7, 2.1}) {
    D4 d = var(x, 0);
    CHECK(sin(d).d[0] == doctest::Approx(fd([](double t) { return std::sin(t); }, x)).epsilon(1e-6));
    CHECK(tanh(d).d[0] == doctest::Approx(fd([](double t) { return std::tanh(t); }, x)).epsilon(1e-6));
    CHECK(sech(d).d[0] == doctest::Approx(fd([](double t) { return 1.0 / std::cosh(t); }, x)).epsilon(1e-6));
    CHECK(exp(d).d[0] == doctest::Approx(fd([](double t) { return std::exp(t); }, x)).epsilon(1e-6));
    if (x > 0) {
      CHECK(sqrt(d).d[0] == doctest::Approx(fd([](double t) { return std::sqrt(t); }, x)).epsilon(1e-6));
      CHECK(log(d).d[0] == doctest::Approx(fd([](double t) { return std::log(t); }, x)).epsilon(1e-6));
    }
  }
}

TEST_CASE("duals compose with Eigen expressions") {
  Vec3T<D4> a(var(1.0, 0), var(2.0, 1), var(3.0, 2));
  D4 n = a.squaredNorm();
  CHECK(n.v == doctest::Approx(14.0));
  CHECK(n.d[0] == doctest::Approx(2.0));
  CHECK(n.d[1] == doctest::Approx(4.0));
  CHECK(n.d[2] == doctest::Approx(6.0));

  Mat3T<D4> s = skew(a);
  Vec3T<D4> b(D4(1.0), D4(0.0), D4(0.0));
  Vec3T<D4> c = s * b;  // a x b
  CHECK(c(1).v == doctest::Approx(3.0));
  CHECK(c(2).v == doctest::Approx(-2.0));
  CHECK(c(1).d[2] == doctest::Approx(1.0));  // d(a x b)_y / da_z
}

TEST_CASE("sech derivative vanishes at zero") {
  D4 x = var(0.0, 0);
  D4 s = sech(300.0 * x);
  CHECK(s.v == 1.0);
  CHECK(s.d[0] == 0.0);
}
