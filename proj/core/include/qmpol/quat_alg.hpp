#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qmpol/base_field.hpp"

namespace qmpol {

/// Local Hilbert symbol (a, b)_p over Q; p = 0 means the real place.
int hilbert_symbol(const Rat& a, const Rat& b, const Int& p);
inline constexpr long kInfinity = 0;

/// (a, b / F): i^2 = a, j^2 = b, ji = -ij.
struct QuaternionAlgebra {
  std::shared_ptr<const BaseField> base;
  FieldElement a, b;
  std::vector<Int> ramified_finite;  // rational primes (over Q); norms of the supplied primes otherwise
  FieldIdeal disc_ideal;
  bool totally_indefinite = false;
  bool is_division = true;

  /// Real places where the algebra splits.
  bool splits_at(unsigned place) const;
};

/// Ramification of (a, b / Q) from Hilbert symbols at 2, the odd primes
/// dividing ab, and infinity.
QuaternionAlgebra discriminant_of(const Rat& a, const Rat& b);

/// Over a real quadratic field the finite ramification is supplied: the
/// discriminant is the product of the given prime ideals.
QuaternionAlgebra quaternion_algebra(const BaseField& F, const FieldElement& a, const FieldElement& b,
                                     const std::vector<FieldIdeal>& ramified_primes);

/// x + y i + z j + t ij.
struct Quaternion {
  std::array<FieldElement, 4> c;
};

Quaternion qmul(const QuaternionAlgebra& B, const Quaternion& p, const Quaternion& q);
Quaternion qconj(const QuaternionAlgebra& B, const Quaternion& p);
FieldElement reduced_norm(const QuaternionAlgebra& B, const Quaternion& p);
FieldElement reduced_trace(const QuaternionAlgebra& B, const Quaternion& p);
Quaternion qinverse(const QuaternionAlgebra& B, const Quaternion& p);

/// mu = x i + y j + z ij with mu^2 + delta = 0.
struct PureQuaternion {
  std::shared_ptr<const QuaternionAlgebra> algebra;
  FieldElement x, y, z;
  FieldElement delta;

  static PureQuaternion make(std::shared_ptr<const QuaternionAlgebra> B, const FieldElement& x,
                             const FieldElement& y, const FieldElement& z);
  static PureQuaternion from(std::shared_ptr<const QuaternionAlgebra> B, const Quaternion& q);
  Quaternion as_quaternion() const;
  PureQuaternion negated() const;
};

using SignatureVector = std::vector<int>;

struct Orientation {
  int sign = 1;          // sgn det(nu_sigma)
  int delta_sign = 1;    // sign of sigma(delta)
  /// For sigma(delta) < 0 the centralizer of omega contains diag(1, -1), so the
  /// sign is a convention (normalised left eigenvectors), not an invariant.
  bool intrinsic = true;
};

/// Split embedding at sigma: i -> diag(sqrt a, -sqrt a), j -> [[0,1],[b,0]],
/// re-based on (b, a) when sigma(a) < 0. Exact for sigma(delta) > 0.
Orientation orientation(const PureQuaternion& mu, unsigned place);

/// The real 2x2 image of mu at sigma (rows), in the same split embedding.
std::array<std::array<long double, 2>, 2> real_image(const PureQuaternion& mu, unsigned place);
/// A conjugator nu with nu mu^sigma nu^{-1} = omega_sigma (numerical).
std::array<std::array<long double, 2>, 2> conjugator(const PureQuaternion& mu, unsigned place);

int local_index(int delta_sign, int det_nu_sign, int im_tau_sign);
SignatureVector signature(const PureQuaternion& mu);
int global_index(const PureQuaternion& mu, const SignatureVector& tau_signs);

/// deg(phi_L) = N_{F/Q}(theta^2 n(I)^2 D_O delta)^2 from the norms of the
/// ideals n(I) theta and D_O.
Int degree_of_phi(const BaseField& F, const Int& norm_ni_theta, const Int& norm_disc, const FieldElement& delta);

}  // namespace qmpol
