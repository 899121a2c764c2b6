#include "qmpol/bqf.hpp"

#include <numeric>
#include <set>
#include <thread>
#include <tuple>
#include <vector>

#include "qmpol/errors.hpp"

namespace qmpol {

namespace {

std::int64_t gcd3(std::int64_t a, std::int64_t b, std::int64_t c) {
  return std::gcd(std::gcd(a, b), c);
}

// Reduced primitive forms (a, b, c) with b in [b_lo, b_hi], b = disc mod 2,
// |b| <= a <= c. Forms with 0 < b < a < c stand for the pair (a, +-b, c).
std::int64_t count_definite_range(std::int64_t abs_disc, std::int64_t b_lo, std::int64_t b_hi) {
  std::int64_t h = 0;
  for (std::int64_t b = b_lo; b <= b_hi; b += 2) {
    const std::int64_t n = (b * b + abs_disc) / 4;
    for (std::int64_t a = std::max<std::int64_t>(b, 1); a * a <= n; ++a) {
      if (n % a != 0) continue;
      const std::int64_t c = n / a;
      if (gcd3(a, b, c) != 1) continue;
      h += (b == 0 || a == b || a == c) ? 1 : 2;
    }
  }
  return h;
}

Int count_definite_big(const Int& abs_disc) {
  Int h = 0;
  const Int b_max = isqrt(abs_disc / 3);
  Int b = (abs_disc % 2 == 0) ? 0 : 1;
  for (; b <= b_max; b += 2) {
    const Int n = (b * b + abs_disc) / 4;
    for (Int a = (b > 0 ? b : Int(1)); a * a <= n; ++a) {
      if (n % a != 0) continue;
      const Int c = n / a;
      Int g;
      mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
      if (g != 1) continue;
      h += (b == 0 || a == b || a == c) ? 1 : 2;
    }
  }
  return h;
}

void require_discriminant_residue(const Int& disc) {
  const Int r = ((disc % 4) + 4) % 4;
  if (r != 0 && r != 1) throw_domain("discriminant must be 0 or 1 mod 4", disc.get_str());
}

// floor((p + sqrt(d)) / q) for q != 0 and d > 0 not a square.
Int floor_quadratic(const Int& p, const Int& d, const Int& q) {
  const Int s = isqrt(d);
  // Start from floor((p + s)/q) or floor((p + s + 1)/q) and correct.
  Int k;
  mpz_fdiv_q(k.get_mpz_t(), Int(p + s).get_mpz_t(), q.get_mpz_t());
  // k*q <= p + sqrt(d) < (k+1)*q  when q > 0; reversed when q < 0.
  auto at_most = [&](const Int& kk) {
    // kk <= (p + sqrt d)/q
    const Int t = kk * q - p;  // compare t with sqrt(d) (sign of q flips)
    if (q > 0) return t <= 0 || t * t < d;
    return t >= 0 && t * t > d;
  };
  while (!at_most(k)) --k;
  while (at_most(k + 1)) ++k;
  return k;
}

template <class T>
struct IndefiniteForm {
  T a, b, c;
  bool operator<(const IndefiniteForm& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
  }
  bool operator==(const IndefiniteForm& o) const { return a == o.a && b == o.b && c == o.c; }
};

inline std::int64_t int_gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }
inline Int int_gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}
inline std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}
inline Int floor_mod(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}
inline std::int64_t iabs(std::int64_t v) { return v < 0 ? -v : v; }
inline Int iabs(const Int& v) { return abs(v); }

template <class T>
bool is_reduced_indefinite(const T& a, const T& b, const T& d) {
  // 0 < b < sqrt(d) and sqrt(d) - b < 2|a| < sqrt(d) + b
  if (b <= 0 || b * b >= d) return false;
  const T two_a = 2 * iabs(a);
  const T lo = two_a + b;
  if (lo * lo <= d) return false;
  const T hi = two_a - b;
  return hi <= 0 || hi * hi < d;
}

template <class T>
IndefiniteForm<T> rho(const IndefiniteForm<T>& f, const T& d, const T& s) {
  // (c, r, (r^2 - d)/(4c)) with r = -b mod 2|c| and r < sqrt(d) maximal.
  const T m = 2 * iabs(f.c);
  const T r = s - floor_mod(T(s + f.b), m);
  return IndefiniteForm<T>{f.c, r, T((r * r - d) / (4 * f.c))};
}

template <class T>
T count_indefinite_cycles(const T& disc, const T& s) {
  std::set<IndefiniteForm<T>> reduced;
  for (T b = (disc % 2 == 0) ? T(2) : T(1); b <= s; b += 2) {
    const T n = (disc - b * b) / 4;  // = -a*c > 0
    for (T a = 1; a <= s && a <= n; ++a) {
      if (n % a != 0) continue;
      const T c = -(n / a);
      for (int sign : {1, -1}) {
        const T aa = sign * a, cc = sign * c;
        if (!is_reduced_indefinite<T>(aa, b, disc)) continue;
        if (int_gcd(int_gcd(aa, b), cc) != 1) continue;
        reduced.insert({aa, b, cc});
      }
    }
  }
  T cycles = 0;
  std::set<IndefiniteForm<T>> seen;
  for (const auto& f : reduced) {
    if (seen.count(f)) continue;
    ++cycles;
    IndefiniteForm<T> g = f;
    do {
      seen.insert(g);
      g = rho<T>(g, disc, s);
      if (!reduced.count(g)) throw_inconsistency("reduction cycle left the reduced set");
    } while (!(g == f));
  }
  return cycles;
}

}  // namespace

ReducedFormCount reduced_form_count(const Int& disc, unsigned threads) {
  if (disc >= 0) throw_domain("class_number_imag requires a negative discriminant", disc.get_str());
  require_discriminant_residue(disc);
  ReducedFormCount out{decompose_discriminant(disc), Int(1), ClassNumberMethod::definite_enumeration};
  if (disc == -3 || disc == -4) return out;

  const Int abs_disc = -disc;
  // Every intermediate value is bounded by 4|disc|/3.
  if (abs_disc >= (Int(1) << 60)) {
    out.h = count_definite_big(abs_disc);
    return out;
  }
  const std::int64_t ad = abs_disc.get_si();
  const std::int64_t b_max = isqrt(abs_disc / 3).get_si();
  const std::int64_t b0 = ad % 2;
  threads = std::max(1u, threads);
  if (threads == 1 || b_max < 1024) {
    out.h = Int(static_cast<long>(count_definite_range(ad, b0, b_max)));
    return out;
  }
  // Partition by b; ranges keep the parity of b0.
  std::vector<std::int64_t> partial(threads, 0);
  std::vector<std::thread> pool;
  const std::int64_t steps = (b_max - b0) / 2 + 1;
  for (unsigned t = 0; t < threads; ++t) {
    const std::int64_t s_lo = steps * t / threads;
    const std::int64_t s_hi = steps * (t + 1) / threads - 1;
    if (s_lo > s_hi) continue;
    pool.emplace_back([&, t, s_lo, s_hi] {
      partial[t] = count_definite_range(ad, b0 + 2 * s_lo, b0 + 2 * s_hi);
    });
  }
  for (auto& th : pool) th.join();
  out.h = Int(static_cast<long>(std::accumulate(partial.begin(), partial.end(), std::int64_t{0})));
  return out;
}

Int class_number_imag(const Int& disc, unsigned threads) {
  return reduced_form_count(disc, threads).h;
}

Int analytic_h(const Int& disc) {
  if (disc >= -4) throw_domain("analytic_h requires a discriminant below -4", disc.get_str());
  if (!is_fundamental_discriminant(disc))
    throw_domain("analytic_h requires a fundamental discriminant", disc.get_str());
  if (!fits_i64(disc) || disc < -(Int(1) << 40))
    throw_domain("analytic_h: discriminant too large for the finite character sum", disc.get_str());
  const std::int64_t d = disc.get_si();
  const std::int64_t ad = -d;
  Int sum = 0;
  std::int64_t acc = 0;
  for (std::int64_t k = 1; k < ad; ++k) {
    acc += kronecker(d, k) * k;
    if ((k & 0xffff) == 0) {
      sum += Int(static_cast<long>(acc));
      acc = 0;
    }
  }
  sum += Int(static_cast<long>(acc));
  sum = abs(sum);
  if (sum % ad != 0) throw_inconsistency("analytic class number sum not divisible by |disc|", disc.get_str());
  return sum / ad;
}

PellUnit pell_unit(const Int& disc) {
  if (disc <= 0 || is_square(disc)) throw_domain("pell_unit requires a positive non-square discriminant", disc.get_str());
  require_discriminant_residue(disc);

  // theta = (-s0 + sqrt(disc)) / 2 with s0 = disc mod 2; omega = (s0 + sqrt(disc))/2.
  // A convergent p/q of theta with N(p + q*omega) = +-1 gives the unit.
  const Int s0 = disc % 2;
  Int P = -s0, Q = 2;
  // (p_cur, q_cur) is the latest convergent; seeded with p_{-1}/q_{-1}, p_{-2}/q_{-2}.
  Int p_cur = 1, p_prev = 0;
  Int q_cur = 0, q_prev = 1;
  const Int omega_norm_c = (s0 * s0 - disc) / 4;  // N(a + b*omega) = a^2 + a b s0 + b^2 c
  for (int guard = 0;; ++guard) {
    const Int a = floor_quadratic(P, disc, Q);
    const Int p_next = a * p_cur + p_prev;
    const Int q_next = a * q_cur + q_prev;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    const Int norm = p_cur * p_cur + p_cur * q_cur * s0 + q_cur * q_cur * omega_norm_c;
    if (q_cur > 0 && (norm == 1 || norm == -1)) {
      PellUnit u{disc, 2 * p_cur + q_cur * s0, q_cur, norm == 1 ? 1 : -1};
      if (u.x < 0) throw_inconsistency("pell_unit produced a negative trace", disc.get_str());
      if (u.x * u.x - disc * u.y * u.y != 4 * u.norm_sign)
        throw_inconsistency("pell_unit failed its defining equation", disc.get_str());
      return u;
    }
    // theta_{k+1} = 1/(theta_k - a)
    P = a * Q - P;
    Q = (disc - P * P) / Q;
    if (guard > 100'000'000) throw_inconsistency("pell_unit did not terminate", disc.get_str());
  }
}

RealClassNumber class_number_real(const Int& disc) {
  if (disc <= 0 || is_square(disc))
    throw_domain("class_number_real requires a positive non-square discriminant", disc.get_str());
  require_discriminant_residue(disc);
  const Int s = isqrt(disc);
  Int cycles;
  if (disc < (Int(1) << 56))
    cycles = Int(static_cast<long>(count_indefinite_cycles<std::int64_t>(disc.get_si(), s.get_si())));
  else
    cycles = count_indefinite_cycles<Int>(disc, s);

  RealClassNumber out{cycles, cycles};
  if (pell_unit(disc).norm_sign == 1) {
    if (cycles % 2 != 0) throw_inconsistency("odd narrow class number with a norm +1 unit", disc.get_str());
    out.h_wide = cycles / 2;
  }
  return out;
}

}  // namespace qmpol
