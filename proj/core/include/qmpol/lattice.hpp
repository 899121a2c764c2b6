#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qmpol/arith.hpp"

namespace qmpol {

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

/// Row-style Hermite normal form of the lattice spanned by `rows` in Z^ncols.
/// The result has one row per pivot, upper triangular, positive pivots, and
/// entries above each pivot reduced into [0, pivot).
IntMat hermite_normal_form(IntMat rows, std::size_t ncols);

Int determinant(IntMat m);
Rat determinant(const RatMat& m);
RatMat inverse(const RatMat& m);  // domain error when singular
RatMat multiply(const RatMat& a, const RatMat& b);
RatMat transpose(const RatMat& a);
RatVec row_times(const RatVec& v, const RatMat& m);

/// A full-rank Z-lattice in Q^n, stored as (1/denominator) * HNF rows.
class Lattice {
 public:
  Lattice() = default;
  static Lattice from_generators(const std::vector<RatVec>& gens, std::size_t n);

  std::size_t dimension() const { return dim_; }
  const IntMat& hnf() const { return hnf_; }
  const Int& denominator() const { return denom_; }
  std::vector<RatVec> basis() const;

  /// |det| of the basis; the index [L : M] of M in L is M.covolume()/L.covolume().
  Rat covolume() const;
  bool contains(const RatVec& v) const;
  /// Integer coordinates of v with respect to basis(), if v lies in the lattice.
  std::optional<IntVec> coordinates(const RatVec& v) const;
  bool contains(const Lattice& other) const;

  Lattice operator+(const Lattice& other) const;
  Lattice scaled(const Rat& c) const;

  bool operator==(const Lattice& other) const {
    return dim_ == other.dim_ && denom_ == other.denom_ && hnf_ == other.hnf_;
  }

 private:
  std::size_t dim_ = 0;
  IntMat hnf_;
  Int denom_ = 1;
};

/// Real positive definite quadratic form given by its Gram matrix.
using RealMat = std::vector<std::vector<long double>>;

/// LLL-reduces `basis` (rows, real coordinates) in place; returns the integer
/// transform U with new_basis = U * old_basis.
std::vector<std::vector<std::int64_t>> lll_reduce(RealMat& basis, long double delta = 0.99L);

/// Enumerates all nonzero integer vectors x with x^T G x <= bound (one of
/// each +-x pair). The callback returns false to stop early.
void fincke_pohst(const RealMat& gram, long double bound,
                  const std::function<bool(const std::vector<std::int64_t>&, long double)>& visit);

}  // namespace qmpol
