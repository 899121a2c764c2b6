#include "qmpol/arith.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <sstream>

#include "qmpol/errors.hpp"

namespace qmpol {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain:
      return "domain";
    case ErrorKind::unsupported_configuration:
      return "unsupported_configuration";
    case ErrorKind::inconsistency:
      return "inconsistency";
  }
  return "unknown";
}

int exit_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain:
      return 2;
    case ErrorKind::unsupported_configuration:
      return 3;
    case ErrorKind::inconsistency:
      return 4;
  }
  return 1;
}

namespace {

constexpr std::uint32_t kTrialLimit = 1'000'000;

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kTrialLimit + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= kTrialLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j <= kTrialLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

bool miller_rabin_round(const Int& n, const Int& d, unsigned s, const Int& base) {
  Int a = base % n;
  if (a == 0) return true;
  Int x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  const Int n_minus_1 = n - 1;
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = (x * x) % n;
    if (x == n_minus_1) return true;
  }
  return false;
}

// Pollard-Brent with a deterministic sequence of increments.
Int rho_split(const Int& n) {
  if (n % 2 == 0) return 2;
  for (unsigned long c = 1;; ++c) {
    Int y = 2, x, g = 1, q = 1, ys;
    unsigned long r = 1;
    const unsigned long m = 128;
    auto f = [&](const Int& v) { return Int((v * v + c) % n); };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          Int diff = x - y;
          q = (q * abs(diff)) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      }
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        Int diff = x - ys;
        Int ad = abs(diff);
        mpz_gcd(g.get_mpz_t(), ad.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_cofactor(const Int& n, std::vector<Int>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  Int d = rho_split(n);
  factor_cofactor(d, out);
  factor_cofactor(Int(n / d), out);
}

}  // namespace

Int PrimeFactorization::value() const {
  Int v = 1;
  for (const auto& [p, e] : factors) {
    Int pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
    v *= pe;
  }
  return v;
}

bool PrimeFactorization::is_squarefree() const {
  return std::all_of(factors.begin(), factors.end(),
                     [](const PrimePower& pp) { return pp.exponent == 1; });
}

std::string PrimeFactorization::to_string() const {
  if (factors.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) os << '*';
    os << factors[i].prime.get_str();
    if (factors[i].exponent > 1) os << '^' << factors[i].exponent;
  }
  return os.str();
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  static constexpr std::array<unsigned, 13> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  for (unsigned b : bases) {
    if (n == b) return true;
    if (n % b == 0) return false;
  }
  Int d = n - 1;
  unsigned s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (unsigned b : bases)
    if (!miller_rabin_round(n, d, s, Int(b))) return false;
  return true;
}

PrimeFactorization factorize(const Int& n) {
  if (n == 0) throw_domain("factorize: argument must be nonzero");
  Int m = abs(n);
  PrimeFactorization out;
  for (std::uint32_t p : small_primes()) {
    if (Int(p) * p > m) break;
    if (m % p != 0) continue;
    unsigned e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    out.factors.push_back({Int(p), e});
  }
  if (m == 1) return out;
  if (m <= Int(kTrialLimit) * kTrialLimit) {
    // No factor below the trial limit, so the remainder is prime.
    out.factors.push_back({m, 1});
    return out;
  }
  std::vector<Int> primes;
  factor_cofactor(m, primes);
  std::sort(primes.begin(), primes.end());
  for (const Int& p : primes) {
    if (!out.factors.empty() && out.factors.back().prime == p)
      ++out.factors.back().exponent;
    else
      out.factors.push_back({p, 1});
  }
  return out;
}

std::vector<Int> divisors(const PrimeFactorization& f) {
  std::vector<Int> divs{Int(1)};
  for (const auto& [p, e] : f.factors) {
    const std::size_t base = divs.size();
    Int pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

int kronecker(const Int& a, const Int& n) {
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

int kronecker(std::int64_t a, std::int64_t n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  if (a % 2 == 0 && n % 2 == 0) return 0;
  while (n % 2 == 0) {
    n /= 2;
    const std::int64_t r = ((a % 8) + 8) % 8;
    if (r == 3 || r == 5) result = -result;
  }
  // Jacobi symbol (a/n), n odd positive.
  std::int64_t m = a % n;
  if (m < 0) m += n;
  std::int64_t k = n;
  while (m != 0) {
    while (m % 2 == 0) {
      m /= 2;
      const std::int64_t r = k % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(m, k);
    if (m % 4 == 3 && k % 4 == 3) result = -result;
    m %= k;
  }
  return k == 1 ? result : 0;
}

Int isqrt(const Int& n) {
  if (n < 0) throw_domain("isqrt: negative argument");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_square(const Int& n) {
  return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

bool is_squarefree(const Int& n) {
  if (n == 0) return false;
  return factorize(n).is_squarefree();
}

unsigned valuation(Int n, const Int& p) {
  if (n == 0) throw_domain("valuation of zero");
  unsigned v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

bool is_fundamental_discriminant(const Int& d) {
  if (d == 0 || d == 1) return false;
  const Int r = ((d % 4) + 4) % 4;
  if (r == 1) return is_squarefree(d);
  if (r != 0) return false;
  const Int m = d / 4;
  const Int rm = ((m % 4) + 4) % 4;
  return (rm == 2 || rm == 3) && is_squarefree(m);
}

Discriminant decompose_discriminant(const Int& v) {
  if (v == 0) throw_domain("discriminant must be nonzero");
  const Int r = ((v % 4) + 4) % 4;
  if (r != 0 && r != 1) throw_domain("discriminant must be 0 or 1 mod 4", v.get_str());

  // Square discriminants belong to the split algebra Q x Q; they are kept
  // whole rather than reduced to the degenerate kernel 1.
  if (is_square(v)) return Discriminant{v, v, Int(1)};

  // Squarefree kernel of v, then adjust at 2.
  const PrimeFactorization f = factorize(v);
  Int kernel = v < 0 ? Int(-1) : Int(1);
  Int square_root_part = 1;
  for (const auto& [p, e] : f.factors) {
    if (e % 2) kernel *= p;
    for (unsigned k = 0; k < e / 2; ++k) square_root_part *= p;
  }
  Int fundamental = kernel;
  Int conductor = square_root_part;
  const Int rk = ((kernel % 4) + 4) % 4;
  if (rk != 1) {
    fundamental = 4 * kernel;
    conductor /= 2;  // v = 0 mod 4 forces 2 | square_root_part here
  }
  return Discriminant{v, fundamental, conductor};
}

int sign_of_quadratic(const Rat& x, const Rat& y, const Int& m) {
  const int sx = sgn(x), sy = sgn(y);
  if (sy == 0) return sx;
  if (sx == 0 || sx == sy) return sy;
  const Rat lhs = x * x, rhs = y * y * m;
  if (lhs == rhs) throw_domain("sign_of_quadratic: m is a perfect square", m.get_str());
  return lhs > rhs ? sx : sy;
}

bool fits_i64(const Int& v) { return mpz_fits_slong_p(v.get_mpz_t()) != 0; }

std::int64_t to_i64(const Int& v) {
  if (!fits_i64(v)) throw_domain("integer out of 64-bit range", v.get_str());
  return v.get_si();
}

}  // namespace qmpol
