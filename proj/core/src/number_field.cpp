#include "qmpol/number_field.hpp"

#include <climits>
#include <cmath>

#include "modp.hpp"
#include "qmpol/errors.hpp"

namespace qmpol {

Elem operator+(const Elem& a, const Elem& b) {
  Elem out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Elem operator-(const Elem& a, const Elem& b) {
  Elem out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Elem operator-(const Elem& a) {
  Elem out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

Elem operator*(const Rat& c, const Elem& a) {
  Elem out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return out;
}

namespace {

std::int64_t mod_of(const Int& v, std::int64_t p) {
  return static_cast<std::int64_t>(mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(p)));
}

// Multiplication table of an order basis reduced mod p.
struct ModpAlgebra {
  std::size_t n = 0;
  std::int64_t p = 0;
  std::vector<std::vector<modp::Vec>> c;
  modp::Vec one;

  ModpAlgebra(const std::vector<std::vector<IntVec>>& structure, const IntVec& one_coords, std::int64_t prime)
      : n(one_coords.size()), p(prime) {
    c.assign(n, std::vector<modp::Vec>(n, modp::Vec(n)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) c[i][j][k] = mod_of(structure[i][j][k], p);
    one.resize(n);
    for (std::size_t i = 0; i < n; ++i) one[i] = mod_of(one_coords[i], p);
  }

  modp::Vec mul(const modp::Vec& x, const modp::Vec& y) const {
    std::vector<__int128> acc(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!x[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!y[j]) continue;
        const __int128 s = static_cast<__int128>(x[i]) * y[j] % p;
        for (std::size_t k = 0; k < n; ++k) acc[k] += s * c[i][j][k];
      }
    }
    modp::Vec out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = static_cast<std::int64_t>(acc[k] % p);
    return out;
  }

  modp::Vec pow(modp::Vec x, std::uint64_t e) const {
    modp::Vec r = one;
    while (e) {
      if (e & 1) r = mul(r, x);
      x = mul(x, x);
      e >>= 1;
    }
    return r;
  }

  modp::Vec unit(std::size_t i) const {
    modp::Vec v(n, 0);
    v[i] = 1;
    return v;
  }

  // Row i is b_i * x.
  modp::Mat mult_matrix(const modp::Vec& x) const {
    modp::Mat m;
    for (std::size_t i = 0; i < n; ++i) m.push_back(mul(unit(i), x));
    return m;
  }

  modp::Mat frobenius() const {
    modp::Mat m;
    for (std::size_t i = 0; i < n; ++i) m.push_back(pow(unit(i), static_cast<std::uint64_t>(p)));
    return m;
  }

  // Kernel of x -> x^(p^k) with p^k >= n.
  modp::Mat radical(const modp::Mat& frob) const {
    modp::Mat fk = frob;
    Int pk = p;
    while (pk < Int(static_cast<long>(n))) {
      fk = modp::mat_mul(fk, frob, p);
      pk *= p;
    }
    return modp::left_kernel(fk, n, p);
  }
};

std::vector<std::vector<IntVec>> structure_constants_of(const NumberField& K, const std::vector<Elem>& basis,
                                                        const Lattice& lat) {
  const std::size_t n = basis.size();
  std::vector<std::vector<IntVec>> out(n, std::vector<IntVec>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      auto c = lat.coordinates(K.mul(basis[i], basis[j]));
      if (!c) throw_inconsistency("lattice is not closed under multiplication");
      out[i][j] = *c;
      out[j][i] = *c;
    }
  return out;
}

Lattice product_lattice(const NumberField& K, const Lattice& a, const Lattice& b) {
  std::vector<Elem> gens;
  for (const auto& x : a.basis())
    for (const auto& y : b.basis()) gens.push_back(K.mul(x, y));
  return Lattice::from_generators(gens, K.degree());
}

Lattice trace_dual(const NumberField& K, const Lattice& a) {
  const RatMat b = a.basis();
  const RatMat tb = multiply(K.trace_form(), transpose(b));
  return Lattice::from_generators(inverse(tb), K.degree());
}

Lattice lift(const modp::Mat& rows, const std::vector<Elem>& basis, std::int64_t p, std::size_t n) {
  std::vector<Elem> gens;
  for (const auto& b : basis) gens.push_back(Rat(p) * b);
  for (const auto& r : rows) {
    Elem e(n, Rat(0));
    for (std::size_t i = 0; i < n; ++i)
      if (r[i]) e = e + Rat(r[i]) * basis[i];
    gens.push_back(std::move(e));
  }
  return Lattice::from_generators(gens, n);
}

Int lattice_discriminant(const NumberField& K, const Lattice& lat) {
  const RatMat b = lat.basis();
  const Rat d = determinant(multiply(multiply(b, K.trace_form()), transpose(b)));
  if (d.get_den() != 1) throw_inconsistency("order discriminant is not an integer");
  return d.get_num();
}

// Base field square root of d0 + d1 sqrt m, if it exists.
bool is_base_square(const Int& m, const Rat& d0, const Rat& d1) {
  if (m == 1) {
    if (d0 < 0) return false;
    return is_square(Int(d0.get_num())) && is_square(Int(d0.get_den()));
  }
  const Rat nrm = d0 * d0 - d1 * d1 * m;
  if (nrm < 0 || !is_square(Int(nrm.get_num())) || !is_square(Int(nrm.get_den()))) return false;
  const Rat root(isqrt(Int(nrm.get_num())), isqrt(Int(nrm.get_den())));
  for (const Rat& cand : {Rat((d0 + root) / 2), Rat((d0 - root) / 2)}) {
    // x^2 = cand, y = d1 / (2x); x = 0 means d0 = m y^2, d1 = 0.
    if (cand < 0) continue;
    if (!is_square(Int(cand.get_num())) || !is_square(Int(cand.get_den()))) continue;
    const Rat x(isqrt(Int(cand.get_num())), isqrt(Int(cand.get_den())));
    if (x == 0) {
      if (d1 != 0) continue;
      const Rat y2 = d0 / m;
      if (y2 >= 0 && is_square(Int(y2.get_num())) && is_square(Int(y2.get_den()))) return true;
      continue;
    }
    const Rat y = d1 / (2 * x);
    if (x * x + m * y * y == d0) return true;
  }
  return false;
}

}  // namespace

NumberField NumberField::relative_quadratic(const Int& m, const Rat& d0, const Rat& d1) {
  NumberField K;
  if (m < 1) throw_domain("base field parameter must be positive", m.get_str());
  if (m > 1 && !is_squarefree(m)) throw_domain("base field parameter must be squarefree", m.get_str());
  if (m == 1 && d1 != 0) throw_domain("delta has an irrational part over Q");
  if (d0 == 0 && d1 == 0) throw_domain("delta must be nonzero");
  if (is_base_square(m, d0, d1)) throw_domain("delta is a square in the base field; the extension is not a field");
  // delta must be integral in F.
  {
    const Rat tr = 2 * d0, nm = d0 * d0 - d1 * d1 * m;
    if (tr.get_den() != 1 || nm.get_den() != 1) throw_domain("delta must be an algebraic integer");
  }
  K.m_ = m;
  K.d0_ = d0;
  K.d1_ = d1;
  K.n_ = (m == 1) ? 2 : 4;

  const std::vector<int> base_signs = (m == 1) ? std::vector<int>{1} : std::vector<int>{1, -1};
  std::vector<Place> real, cplx;
  for (int s : base_signs) {
    const int sg = (m == 1) ? sgn(d0) : sign_of_quadratic(d0, Rat(s * d1), m);
    const long double ds = d0.get_d() + s * d1.get_d() * std::sqrt(static_cast<long double>(m.get_d()));
    if (sg > 0) {
      const long double r = std::sqrt(ds);
      real.push_back({s, true, r, 0});
      real.push_back({s, true, -r, 0});
    } else {
      cplx.push_back({s, false, 0, std::sqrt(-ds)});
    }
  }
  K.r1_ = static_cast<int>(real.size());
  K.r2_ = static_cast<int>(cplx.size());
  K.places_ = real;
  K.places_.insert(K.places_.end(), cplx.begin(), cplx.end());

  K.trace_form_.assign(K.n_, RatVec(K.n_));
  for (std::size_t i = 0; i < K.n_; ++i)
    for (std::size_t j = i; j < K.n_; ++j) {
      Elem ei(K.n_, Rat(0)), ej(K.n_, Rat(0));
      ei[i] = 1;
      ej[j] = 1;
      K.trace_form_[i][j] = K.trace_form_[j][i] = K.trace(K.mul(ei, ej));
    }
  K.build_maximal_order();
  return K;
}

Elem NumberField::one() const {
  Elem e = zero();
  e[0] = 1;
  return e;
}

Elem NumberField::from_base(const Rat& x, const Rat& y) const {
  Elem e = zero();
  e[0] = x;
  if (n_ == 4) e[1] = y;
  else if (y != 0) throw_domain("irrational base element over Q");
  return e;
}

Elem NumberField::w() const {
  Elem e = zero();
  e[n_ == 2 ? 1 : 2] = 1;
  return e;
}

Elem NumberField::mul(const Elem& a, const Elem& b) const {
  if (n_ == 2) return {a[0] * b[0] + a[1] * b[1] * d0_, a[0] * b[1] + a[1] * b[0]};
  auto fm = [&](const Rat& x0, const Rat& x1, const Rat& y0, const Rat& y1) {
    return std::pair<Rat, Rat>{x0 * y0 + m_ * x1 * y1, x0 * y1 + x1 * y0};
  };
  const auto ac = fm(a[0], a[1], b[0], b[1]);
  const auto bd = fm(a[2], a[3], b[2], b[3]);
  const auto bdd = fm(bd.first, bd.second, d0_, d1_);
  const auto ad = fm(a[0], a[1], b[2], b[3]);
  const auto bc = fm(a[2], a[3], b[0], b[1]);
  return {ac.first + bdd.first, ac.second + bdd.second, ad.first + bc.first, ad.second + bc.second};
}

Elem NumberField::pow(const Elem& a, std::int64_t e) const {
  Elem base = e < 0 ? inverse(a) : a;
  std::uint64_t k = e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
  Elem r = one();
  while (k) {
    if (k & 1) r = mul(r, base);
    k >>= 1;
    if (k) base = mul(base, base);
  }
  return r;
}

RatMat NumberField::mult_matrix(const Elem& a) const {
  RatMat m;
  for (std::size_t i = 0; i < n_; ++i) {
    Elem ei = zero();
    ei[i] = 1;
    m.push_back(mul(ei, a));
  }
  return m;
}

Elem NumberField::inverse(const Elem& a) const {
  const RatMat inv = qmpol::inverse(mult_matrix(a));
  return row_times(one(), inv);
}

Rat NumberField::trace(const Elem& a) const {
  const RatMat m = mult_matrix(a);
  Rat t = 0;
  for (std::size_t i = 0; i < n_; ++i) t += m[i][i];
  return t;
}

Rat NumberField::norm(const Elem& a) const { return determinant(mult_matrix(a)); }

std::vector<Rat> NumberField::charpoly(const Elem& a) const {
  // Faddeev-LeVerrier.
  const RatMat m = mult_matrix(a);
  std::vector<Rat> c(n_ + 1, Rat(0));
  c[n_] = 1;
  RatMat mk(n_, RatVec(n_, Rat(0)));
  for (std::size_t k = 1; k <= n_; ++k) {
    RatMat next = multiply(m, mk);
    for (std::size_t i = 0; i < n_; ++i) next[i][i] += c[n_ - k + 1];
    mk = next;
    const RatMat am = multiply(m, mk);
    Rat tr = 0;
    for (std::size_t i = 0; i < n_; ++i) tr += am[i][i];
    c[n_ - k] = -tr / Rat(static_cast<long>(k));
  }
  c.pop_back();
  return c;
}

bool NumberField::is_integral(const Elem& a) const {
  for (const auto& x : charpoly(a))
    if (x.get_den() != 1) return false;
  return true;
}

std::pair<Rat, Rat> NumberField::relative_norm(const Elem& a) const {
  if (n_ == 2) return {a[0] * a[0] - d0_ * a[1] * a[1], Rat(0)};
  // a = x + y w with x, y in F; N = x^2 - delta y^2.
  const Rat x0 = a[0], x1 = a[1], y0 = a[2], y1 = a[3];
  const Rat xx0 = x0 * x0 + m_ * x1 * x1, xx1 = 2 * x0 * x1;
  const Rat yy0 = y0 * y0 + m_ * y1 * y1, yy1 = 2 * y0 * y1;
  const Rat dy0 = d0_ * yy0 + m_ * d1_ * yy1, dy1 = d0_ * yy1 + d1_ * yy0;
  return {xx0 - dy0, xx1 - dy1};
}

Elem NumberField::relative_conjugate(const Elem& a) const {
  Elem out = a;
  if (n_ == 2) out[1] = -out[1];
  else {
    out[2] = -out[2];
    out[3] = -out[3];
  }
  return out;
}

std::vector<std::complex<long double>> NumberField::embed(const Elem& a) const {
  std::vector<std::complex<long double>> out;
  out.reserve(places_.size());
  const long double sm = std::sqrt(static_cast<long double>(m_.get_d()));
  for (const auto& pl : places_) {
    const std::complex<long double> wv(pl.w_re, pl.w_im);
    if (n_ == 2) {
      out.push_back(static_cast<long double>(a[0].get_d()) + static_cast<long double>(a[1].get_d()) * wv);
    } else {
      const long double x = a[0].get_d() + pl.base_sign * sm * static_cast<long double>(a[1].get_d());
      const long double y = a[2].get_d() + pl.base_sign * sm * static_cast<long double>(a[3].get_d());
      out.push_back(x + y * wv);
    }
  }
  return out;
}

std::vector<long double> NumberField::t2_coordinates(const Elem& a) const {
  const auto v = embed(a);
  std::vector<long double> out;
  out.reserve(n_);
  for (int i = 0; i < r1_; ++i) out.push_back(v[i].real());
  const long double s2 = std::sqrt(2.0L);
  for (int i = r1_; i < r1_ + r2_; ++i) {
    out.push_back(s2 * v[i].real());
    out.push_back(s2 * v[i].imag());
  }
  return out;
}

long double NumberField::t2(const Elem& a) const {
  long double s = 0;
  for (auto x : t2_coordinates(a)) s += x * x;
  return s;
}

std::vector<long double> NumberField::log_embedding(const Elem& a) const {
  const auto v = embed(a);
  std::vector<long double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back((static_cast<int>(i) < r1_ ? 1.0L : 2.0L) * std::log(std::abs(v[i])));
  return out;
}

void NumberField::build_maximal_order() {
  // Start from R_F[w].
  std::vector<Elem> gens;
  if (n_ == 2) {
    gens = {one(), w()};
  } else {
    const bool one_mod_4 = (m_ % 4 == 1);
    Elem omega = one_mod_4 ? Elem{Rat(1, 2), Rat(1, 2), 0, 0} : Elem{0, 1, 0, 0};
    gens = {one(), omega, w(), mul(omega, w())};
  }
  Lattice order = Lattice::from_generators(gens, n_);
  const Int disc0 = lattice_discriminant(*this, order);

  // Round 2 at every p with p^2 | disc: replace O by the multiplier ring of its p-radical.
  for (const auto& [p, e] : factorize(disc0).factors) {
    if (e < 2) continue;
    if (!fits_i64(p) || p > Int(1) << 31) throw_unsupported("prime too large for maximal order computation", p.get_str());
    const std::int64_t pp = p.get_si();
    for (int guard = 0;; ++guard) {
      if (guard > 64) throw_inconsistency("Round 2 did not stabilize");
      const auto basis = order.basis();
      const auto sc = structure_constants_of(*this, basis, order);
      const auto one_c = *order.coordinates(one());
      ModpAlgebra alg(sc, one_c, pp);
      const auto rad = alg.radical(alg.frobenius());
      const Lattice ip = lift(rad, basis, pp, n_);
      const Lattice next = trace_dual(*this, product_lattice(*this, ip, trace_dual(*this, ip)));
      if (!next.contains(order)) throw_inconsistency("multiplier ring does not contain the order");
      if (next == order) break;
      order = next;
    }
  }
  ok_ = order;
  disc_ = lattice_discriminant(*this, ok_);
}

Int PrimeIdeal::norm() const {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), p.get_mpz_t(), f);
  return out;
}

MaximalOrder::MaximalOrder(NumberField field) : field_(std::move(field)) {
  basis_ = field_.maximal_order().basis();
  structure_ = structure_constants_of(field_, basis_, lattice());
  one_coords_ = *lattice().coordinates(field_.one());
}

Elem MaximalOrder::from_coordinates(const IntVec& c) const {
  Elem e = field_.zero();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) e = e + Rat(c[i]) * basis_[i];
  return e;
}

Lattice MaximalOrder::ideal(const std::vector<Elem>& gens) const {
  std::vector<Elem> all;
  for (const auto& g : gens)
    for (const auto& b : basis_) all.push_back(field_.mul(g, b));
  return Lattice::from_generators(all, degree());
}

Lattice MaximalOrder::multiply(const Lattice& a, const Lattice& b) const { return product_lattice(field_, a, b); }

Lattice MaximalOrder::dual(const Lattice& a) const { return trace_dual(field_, a); }

Lattice MaximalOrder::inverse(const Lattice& a) const { return dual(multiply(a, dual(lattice()))); }

Rat MaximalOrder::norm(const Lattice& a) const { return a.covolume() / lattice().covolume(); }

const std::vector<PrimeIdeal>& MaximalOrder::primes_above(const Int& p) const {
  {
    std::lock_guard<std::mutex> lock(*mutex_);
    auto it = prime_cache_.find(p);
    if (it != prime_cache_.end()) return it->second;
  }
  auto primes = decompose(p);
  std::lock_guard<std::mutex> lock(*mutex_);
  return prime_cache_.emplace(p, std::move(primes)).first->second;
}

std::vector<PrimeIdeal> MaximalOrder::decompose(const Int& p) const {
  if (!is_prime(p)) throw_domain("primes_above requires a prime", p.get_str());
  if (p > Int(1) << 31) throw_unsupported("prime too large for ideal decomposition", p.get_str());
  const std::int64_t pp = p.get_si();
  const std::size_t n = degree();
  ModpAlgebra alg(structure_, one_coords_, pp);
  const auto frob = alg.frobenius();
  const auto rad = alg.radical(frob);

  // x with x^p - x in the radical: a copy of F_p^k, k = number of primes above p.
  modp::Mat fmi = frob;
  for (std::size_t i = 0; i < n; ++i) fmi[i][i] = modp::reduce(fmi[i][i] - 1, pp);
  const auto fix = modp::preimage(fmi, rad, n, pp);

  auto in_span_rank = [&](const modp::Mat& rows) { return modp::row_basis(rows, pp).size(); };

  // Split idempotents (modulo the radical) with each element of the fixed algebra.
  std::vector<modp::Vec> idem{alg.one};
  for (const auto& x : fix) {
    std::vector<modp::Vec> next;
    for (const auto& e : idem) {
      const modp::Vec y = alg.mul(x, e);
      // Minimal polynomial of y on eA modulo the radical.
      std::vector<modp::Vec> powers{e, y};
      std::vector<std::int64_t> g;
      for (std::size_t d = 1; d <= n; ++d) {
        modp::Mat rows(powers.begin(), powers.end());
        rows.insert(rows.end(), rad.begin(), rad.end());
        if (in_span_rank(rows) == rows.size()) {
          powers.push_back(alg.mul(powers.back(), x));
          continue;
        }
        const auto ker = modp::left_kernel(rows, n, pp);
        for (const auto& k : ker) {
          if (k[d] == 0) continue;
          const std::int64_t lead = modp::inv(k[d], pp);
          g.assign(d + 1, 0);
          for (std::size_t i = 0; i <= d; ++i) g[i] = static_cast<std::int64_t>(static_cast<__int128>(k[i]) * lead % pp);
          break;
        }
        break;
      }
      if (g.empty()) throw_inconsistency("minimal polynomial search failed", p.get_str());
      const std::size_t d = g.size() - 1;
      if (d == 1) {
        next.push_back(e);
        continue;
      }
      if (pp > 2'000'000) throw_unsupported("root search over a large prime field", p.get_str());
      std::vector<std::int64_t> roots;
      for (std::int64_t c = 0; c < pp && roots.size() < d; ++c) {
        __int128 v = 0;
        for (std::size_t i = d + 1; i-- > 0;) v = (v * c + g[i]) % pp;
        if (v == 0) roots.push_back(c);
      }
      if (roots.size() != d) throw_inconsistency("fixed algebra element has a non-split minimal polynomial", p.get_str());
      for (std::size_t k = 0; k < d; ++k) {
        modp::Vec ek = e;
        for (std::size_t l = 0; l < d; ++l) {
          if (l == k) continue;
          modp::Vec factor(n);
          const std::int64_t scale = modp::inv(modp::reduce(roots[k] - roots[l], pp), pp);
          for (std::size_t i = 0; i < n; ++i)
            factor[i] = static_cast<std::int64_t>(
                modp::reduce(y[i] - static_cast<std::int64_t>(static_cast<__int128>(roots[l]) * e[i] % pp), pp) *
                static_cast<__int128>(scale) % pp);
          ek = alg.mul(ek, factor);
        }
        next.push_back(ek);
      }
    }
    idem = std::move(next);
  }

  std::vector<PrimeIdeal> out;
  for (const auto& e : idem) {
    const auto m = modp::preimage(alg.mult_matrix(e), rad, n, pp);
    PrimeIdeal P;
    P.p = p;
    P.f = static_cast<unsigned>(n - m.size());
    P.lattice = lift(m, basis_, pp, n);
    const Lattice inv = inverse(P.lattice);
    for (const auto& b : inv.basis())
      if (!contains(b)) {
        P.anti_uniformizer = b;
        break;
      }
    if (P.anti_uniformizer.empty()) throw_inconsistency("prime ideal has trivial inverse", p.get_str());
    if (P.f == 1) {
      // Functional vanishing on the maximal ideal, normalised at 1.
      modp::Mat mt(n, modp::Vec(m.size()));
      for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) mt[j][i] = m[i][j];
      auto lam = modp::left_kernel(mt, m.size(), pp);
      if (lam.size() != 1) throw_inconsistency("residue functional is not unique", p.get_str());
      std::int64_t at_one = 0;
      for (std::size_t i = 0; i < n; ++i) at_one = (at_one + lam[0][i] * alg.one[i]) % pp;
      const std::int64_t s = modp::inv(at_one, pp);
      P.residue_images.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        P.residue_images[i] = static_cast<std::int64_t>(static_cast<__int128>(lam[0][i]) * s % pp);
    }
    out.push_back(std::move(P));
  }
  unsigned total = 0;
  for (auto& P : out) {
    P.e = static_cast<unsigned>(valuation(P, Elem(field_.from_base(Rat(p), Rat(0)))));
    total += P.e * P.f;
  }
  if (total != n) throw_inconsistency("sum of e*f differs from the degree", p.get_str());
  return out;
}

int MaximalOrder::valuation(const PrimeIdeal& P, const Elem& a) const {
  bool nonzero = false;
  for (const auto& x : a) nonzero = nonzero || x != 0;
  if (!nonzero) throw_domain("valuation of zero");
  // Integer algebra coordinates lie in R_F[w], hence in O; clear denominators with d.
  Int d = 1;
  for (const auto& y : a) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), y.get_den_mpz_t());
  Elem x = Rat(d) * a;
  int v = 0;
  for (;;) {
    Elem y = field_.mul(x, P.anti_uniformizer);
    if (!contains(y)) break;
    x = std::move(y);
    ++v;
  }
  if (d != 1) v -= static_cast<int>(P.e * qmpol::valuation(d, P.p));
  return v;
}

int MaximalOrder::valuation(const PrimeIdeal& P, const Lattice& ideal) const {
  int v = INT32_MAX;
  for (const auto& b : ideal.basis()) {
    bool nonzero = false;
    for (const auto& x : b) nonzero = nonzero || x != 0;
    if (nonzero) v = std::min(v, valuation(P, b));
  }
  return v;
}

}  // namespace qmpol
