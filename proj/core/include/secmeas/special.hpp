#pragma once

#include "secmeas/types.hpp"

// Special functions needed by the closed-form Stieltjes transforms and
// reducers of the unbounded families. Accuracy is roughly 1e-13 relative over
// the ranges exercised by the library.
namespace secmeas::special {

/// e^{-x} Ei(x) for x > 0, computed without forming Ei(x) (no overflow).
double exp_ei(double x);

/// e^{w} E1(w) for complex w off the cut (-inf, 0].
Complex exp_e1(Complex w);

/// Faddeeva function w(z) = e^{-z^2} erfc(-i z), valid for Im z >= 0.
Complex faddeeva(Complex z);

/// Dawson's integral F(x) = e^{-x^2} \int_0^x e^{t^2} dt.
double dawson(double x);

}  // namespace secmeas::special
