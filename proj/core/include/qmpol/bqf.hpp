#pragma once

#include "qmpol/arith.hpp"

namespace qmpol {

enum class ClassNumberMethod { definite_enumeration, indefinite_cycles, analytic_oracle };

struct ReducedFormCount {
  Discriminant discriminant;
  Int h;
  ClassNumberMethod method = ClassNumberMethod::definite_enumeration;
};

/// Minimal solution of x^2 - disc*y^2 = +-4 (x, y > 0), i.e. the fundamental
/// unit (x + y*sqrt(disc))/2 of the quadratic order of discriminant disc.
struct PellUnit {
  Int discriminant;
  Int x;
  Int y;
  int norm_sign = 1;
};

/// Number of classes of primitive positive definite forms of discriminant
/// disc < 0. `threads` > 1 splits the b-range; the count does not depend on it.
Int class_number_imag(const Int& disc, unsigned threads = 1);
ReducedFormCount reduced_form_count(const Int& disc, unsigned threads = 1);

/// h(disc) = |sum_{k<|disc|} (disc/k) k| / |disc| for fundamental disc < -4.
Int analytic_h(const Int& disc);

struct RealClassNumber {
  Int h_wide;    // order class number (Pic)
  Int h_narrow;  // number of proper form classes
};

/// disc > 0, not a square.
RealClassNumber class_number_real(const Int& disc);

/// Continued-fraction expansion of (sqrt(disc) - (disc mod 2))/2.
PellUnit pell_unit(const Int& disc);

}  // namespace qmpol
