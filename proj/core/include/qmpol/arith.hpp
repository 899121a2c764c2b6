#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace qmpol {

using Int = mpz_class;
using Rat = mpq_class;

struct PrimePower {
  Int prime;
  unsigned exponent = 0;
  bool operator==(const PrimePower&) const = default;
};

/// Factorization of |n|, primes strictly ascending.
struct PrimeFactorization {
  std::vector<PrimePower> factors;

  Int value() const;
  bool empty() const { return factors.empty(); }
  std::size_t size() const { return factors.size(); }
  bool is_squarefree() const;
  std::string to_string() const;
  bool operator==(const PrimeFactorization&) const = default;
};

/// Deterministic Miller-Rabin with the first 13 prime bases; exact below
/// 3.3e24, a strong probable-prime test above.
bool is_prime(const Int& n);

/// Trial division below 10^6, Pollard-Brent rho for the remaining cofactor.
/// Throws a domain error for n == 0.
PrimeFactorization factorize(const Int& n);

/// All positive divisors in ascending order.
std::vector<Int> divisors(const PrimeFactorization& f);

/// Full Kronecker symbol (a/n), defined for every integer pair.
int kronecker(const Int& a, const Int& n);
int kronecker(std::int64_t a, std::int64_t n);

Int isqrt(const Int& n);
bool is_square(const Int& n);
bool is_squarefree(const Int& n);

/// Valuation of n at p (n != 0, p prime).
unsigned valuation(Int n, const Int& p);

/// A nonzero integer congruent to 0 or 1 mod 4 together with its fundamental
/// part and conductor: value = fundamental_part * conductor^2.
struct Discriminant {
  Int value;
  Int fundamental_part;
  Int conductor;

  bool is_fundamental() const { return conductor == 1; }
  bool operator==(const Discriminant&) const = default;
};

bool is_fundamental_discriminant(const Int& d);

/// Splits v into fundamental part and conductor. Domain error unless
/// v != 0 and v = 0, 1 mod 4.
Discriminant decompose_discriminant(const Int& v);

/// Exact sign of x + y*sqrt(m) for m > 0 not a perfect square.
int sign_of_quadratic(const Rat& x, const Rat& y, const Int& m);

/// num/den in lowest terms (gmpxx does not canonicalize on construction).
inline Rat ratio(const Int& num, const Int& den) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

/// Convenience conversions used across the library.
inline Int to_int(long v) { return Int(v); }
std::int64_t to_i64(const Int& v);  // throws domain error when out of range
bool fits_i64(const Int& v);

}  // namespace qmpol
