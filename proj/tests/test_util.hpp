#pragma once

#include <gtest/gtest.h>

#include <cmath>

#include "kreinval/core_model.hpp"
#include "kreinval/error.hpp"

namespace kreinval::testing {

inline ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// (1,1) boost [[cosh t, sinh t], [sinh t, cosh t]]
inline ComplexMatrix boost(double t) { return mat2(std::cosh(t), std::sinh(t), std::sinh(t), std::cosh(t)); }

// 2x2 traceless model of a Minkowski vector (x, y, z)
inline ComplexMatrix minkowski(double x, double y, double z) {
  return mat2(z, Complex(x, y), Complex(-x, y), -z);
}

inline ComplexMatrix diag(std::initializer_list<double> d) {
  RealVector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.cast<Complex>().asDiagonal();
}

template <class F>
ErrorKind error_kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected kreinval::Error";
  return ErrorKind::InvalidArgument;
}

}  // namespace kreinval::testing
