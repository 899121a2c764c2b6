#pragma once

#include <complex>
#include <map>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "qmpol/lattice.hpp"

namespace qmpol {

/// Field elements are coordinate vectors on the power basis of the algebra:
/// (1, w) over Q, or (1, sqrt m, w, sqrt m * w) over Q(sqrt m), with w^2 = delta.
using Elem = RatVec;

Elem operator+(const Elem& a, const Elem& b);
Elem operator-(const Elem& a, const Elem& b);
Elem operator-(const Elem& a);
Elem operator*(const Rat& c, const Elem& a);

/// L = F(sqrt(delta)) with F = Q (m = 1) or F = Q(sqrt m), delta = d0 + d1 sqrt m.
/// Degree 2 or 4; the maximal order is computed at construction.
class NumberField {
 public:
  static NumberField relative_quadratic(const Int& m, const Rat& d0, const Rat& d1);
  static NumberField quadratic(const Int& d) { return relative_quadratic(Int(1), Rat(d), Rat(0)); }

  std::size_t degree() const { return n_; }
  bool base_is_rational() const { return m_ == 1; }
  const Int& base_m() const { return m_; }
  const Rat& delta0() const { return d0_; }
  const Rat& delta1() const { return d1_; }

  int r1() const { return r1_; }
  int r2() const { return r2_; }
  std::size_t places() const { return static_cast<std::size_t>(r1_ + r2_); }

  Elem zero() const { return Elem(n_, Rat(0)); }
  Elem one() const;
  Elem from_base(const Rat& x, const Rat& y) const;  // x + y sqrt m
  Elem w() const;                                    // w^2 = delta

  Elem mul(const Elem& a, const Elem& b) const;
  Elem pow(const Elem& a, std::int64_t e) const;  // e < 0 allowed for nonzero a
  Elem inverse(const Elem& a) const;
  /// Row i is e_i * a on the algebra basis.
  RatMat mult_matrix(const Elem& a) const;
  Rat trace(const Elem& a) const;
  Rat norm(const Elem& a) const;
  /// Characteristic polynomial coefficients c_0..c_{n-1} of the monic polynomial.
  std::vector<Rat> charpoly(const Elem& a) const;
  bool is_integral(const Elem& a) const;
  /// N_{L/F}(a) = x + y sqrt m.
  std::pair<Rat, Rat> relative_norm(const Elem& a) const;
  /// Image under the nontrivial automorphism over F (w -> -w).
  Elem relative_conjugate(const Elem& a) const;

  /// One value per place: real places first, then one of each complex pair.
  std::vector<std::complex<long double>> embed(const Elem& a) const;
  /// Isometric image for T2: real values, then sqrt2*Re, sqrt2*Im.
  std::vector<long double> t2_coordinates(const Elem& a) const;
  long double t2(const Elem& a) const;
  /// (n_i log|sigma_i a|) over the places.
  std::vector<long double> log_embedding(const Elem& a) const;

  /// Trace form Tr(e_i e_j) on the algebra basis.
  const RatMat& trace_form() const { return trace_form_; }
  const Lattice& maximal_order() const { return ok_; }
  const Int& discriminant() const { return disc_; }

 private:
  std::size_t n_ = 0;
  Int m_ = 1;
  Rat d0_, d1_;
  int r1_ = 0, r2_ = 0;
  struct Place {
    int base_sign;    // sqrt m -> base_sign * sqrt m
    bool real;
    long double w_re, w_im;  // image of w
  };
  std::vector<Place> places_;
  RatMat trace_form_;
  Lattice ok_;
  Int disc_;

  void build_maximal_order();
};

struct PrimeIdeal {
  Int p;
  unsigned e = 1;  // ramification index
  unsigned f = 1;  // residue degree
  Lattice lattice;
  Int norm() const;
  /// For f = 1: images of the integral basis in F_p (residue map).
  std::vector<std::int64_t> residue_images;
  /// An element of P^{-1} \ O, used for valuations.
  Elem anti_uniformizer;
};

/// The maximal order of a number field with ideal arithmetic on lattices.
class MaximalOrder {
 public:
  explicit MaximalOrder(NumberField field);

  const NumberField& field() const { return field_; }
  const Lattice& lattice() const { return field_.maximal_order(); }
  const std::vector<Elem>& basis() const { return basis_; }
  std::size_t degree() const { return field_.degree(); }

  std::optional<IntVec> coordinates(const Elem& a) const { return lattice().coordinates(a); }
  Elem from_coordinates(const IntVec& c) const;
  bool contains(const Elem& a) const { return lattice().contains(a); }

  /// O-ideal generated by the given elements (as a Z-lattice).
  Lattice ideal(const std::vector<Elem>& gens) const;
  Lattice principal(const Elem& a) const { return ideal({a}); }
  Lattice multiply(const Lattice& a, const Lattice& b) const;
  Lattice inverse(const Lattice& a) const;
  Rat norm(const Lattice& a) const;
  /// Trace dual {x : Tr(x a) in Z}.
  Lattice dual(const Lattice& a) const;

  /// Prime ideals above p with e and f; sum e*f = degree.
  const std::vector<PrimeIdeal>& primes_above(const Int& p) const;
  int valuation(const PrimeIdeal& P, const Elem& a) const;  // a != 0
  int valuation(const PrimeIdeal& P, const Lattice& ideal) const;

  /// Integer structure constants on the integral basis: b_i b_j = sum c_ijk b_k.
  const std::vector<std::vector<IntVec>>& structure_constants() const { return structure_; }
  const IntVec& one_coordinates() const { return one_coords_; }

 private:
  NumberField field_;
  std::vector<Elem> basis_;
  std::vector<std::vector<IntVec>> structure_;
  IntVec one_coords_;
  mutable std::map<Int, std::vector<PrimeIdeal>> prime_cache_;
  std::shared_ptr<std::mutex> mutex_ = std::make_shared<std::mutex>();

  std::vector<PrimeIdeal> decompose(const Int& p) const;
};

}  // namespace qmpol
