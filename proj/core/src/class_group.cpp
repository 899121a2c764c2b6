#include "qmpol/class_group.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "modp.hpp"
#include "qmpol/errors.hpp"

namespace qmpol {

std::vector<Elem> UnitGroup::generators() const {
  std::vector<Elem> out{torsion_generator};
  out.insert(out.end(), fundamental.begin(), fundamental.end());
  return out;
}

namespace {

RealMat gram_of(const NumberField& K, const std::vector<Elem>& basis) {
  std::vector<std::vector<long double>> rows;
  for (const auto& b : basis) rows.push_back(K.t2_coordinates(b));
  const std::size_t n = basis.size();
  RealMat g(n, std::vector<long double>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < rows[i].size(); ++k) g[i][j] += rows[i][k] * rows[j][k];
  return g;
}

// Solves m * x = v (long double, partial pivoting).
std::vector<long double> solve(std::vector<std::vector<long double>> m, std::vector<long double> v) {
  const std::size_t n = v.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(m[i][k]) > std::fabs(m[p][k])) p = i;
    std::swap(m[k], m[p]);
    std::swap(v[k], v[p]);
    if (m[k][k] == 0) throw_inconsistency("singular real system");
    for (std::size_t i = k + 1; i < n; ++i) {
      const long double f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
      v[i] -= f * v[k];
    }
  }
  std::vector<long double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = v[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * x[j];
    x[i] = s / m[i][i];
  }
  return x;
}

Elem power_product(const NumberField& K, const std::vector<Elem>& gens, const std::vector<std::int64_t>& exps) {
  Elem out = K.one();
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (exps[i] != 0) out = K.mul(out, K.pow(gens[i], exps[i]));
  return out;
}

// Free-part bookkeeping for the unit search.
class UnitLattice {
 public:
  UnitLattice(const NumberField& K, std::size_t rank) : K_(K), rank_(rank) {}

  const std::vector<Elem>& units() const { return units_; }
  bool full() const { return units_.size() == rank_; }

  std::vector<long double> log_of(const Elem& u) const {
    auto l = K_.log_embedding(u);
    l.resize(rank_);
    return l;
  }

  // Returns true when the lattice grew.
  bool add(const Elem& u) {
    if (rank_ == 0) return false;
    const auto l = log_of(u);
    if (!full()) {
      // Independence via Gram-Schmidt residual.
      std::vector<long double> r = l;
      for (const auto& q : ortho_) {
        long double d = 0, nq = 0;
        for (std::size_t i = 0; i < rank_; ++i) {
          d += r[i] * q[i];
          nq += q[i] * q[i];
        }
        for (std::size_t i = 0; i < rank_; ++i) r[i] -= d / nq * q[i];
      }
      long double nr = 0, nl = 0;
      for (std::size_t i = 0; i < rank_; ++i) {
        nr += r[i] * r[i];
        nl += l[i] * l[i];
      }
      if (nr <= 1e-12L * std::max<long double>(1, nl)) return false;
      units_.push_back(u);
      ortho_.push_back(r);
      if (full()) size_reduce();
      return true;
    }
    bool grew = false;
    for (int guard = 0; guard < 64; ++guard) {
      const auto c = coefficients(u);
      std::int64_t k = 0;
      for (std::int64_t t = 1; t <= 5000; ++t) {
        bool ok = true;
        for (auto x : c) ok = ok && std::fabs(t * x - std::roundl(t * x)) < 1e-6L;
        if (ok) {
          k = t;
          break;
        }
      }
      if (k == 0) throw_inconsistency("unit log coefficients are not rational with small denominator");
      if (k == 1) return grew;
      std::int64_t p = 2;
      while (k % p) ++p;
      // w = u^(k/p) has coefficients t_j / p on the current basis.
      const Elem w = K_.pow(u, k / p);
      const auto cw = coefficients(w);
      std::vector<std::int64_t> t(rank_);
      for (std::size_t j = 0; j < rank_; ++j) t[j] = static_cast<std::int64_t>(std::llroundl(cw[j] * p));
      std::size_t j0 = rank_;
      for (std::size_t j = 0; j < rank_; ++j)
        if (((t[j] % p) + p) % p != 0) {
          j0 = j;
          break;
        }
      if (j0 == rank_) throw_inconsistency("unit enlargement step found no new direction");
      const std::int64_t s = modp::inv(((t[j0] % p) + p) % p, p);
      // z = w^s * prod b_j^(-floor(s t_j / p)) has coefficient 1/p at j0.
      std::vector<std::int64_t> ex(rank_);
      for (std::size_t j = 0; j < rank_; ++j) {
        const std::int64_t st = s * t[j];
        ex[j] = -(st >= 0 ? st / p : -((-st + p - 1) / p));
      }
      Elem z = K_.mul(K_.pow(w, s), power_product(K_, units_, ex));
      units_[j0] = z;
      grew = true;
      size_reduce();
    }
    throw_inconsistency("unit lattice enlargement did not terminate");
  }

  std::vector<long double> coefficients(const Elem& u) const {
    std::vector<std::vector<long double>> m(rank_, std::vector<long double>(rank_));
    for (std::size_t j = 0; j < rank_; ++j) {
      const auto lj = log_of(units_[j]);
      for (std::size_t i = 0; i < rank_; ++i) m[i][j] = lj[i];
    }
    return solve(m, log_of(u));
  }

  long double regulator() const {
    if (rank_ == 0) return 1;
    std::vector<std::vector<long double>> m;
    for (const auto& u : units_) m.push_back(log_of(u));
    // |det| by elimination.
    long double det = 1;
    for (std::size_t k = 0; k < rank_; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < rank_; ++i)
        if (std::fabs(m[i][k]) > std::fabs(m[p][k])) p = i;
      std::swap(m[k], m[p]);
      det *= m[k][k];
      if (m[k][k] == 0) return 0;
      for (std::size_t i = k + 1; i < rank_; ++i) {
        const long double f = m[i][k] / m[k][k];
        for (std::size_t j = k; j < rank_; ++j) m[i][j] -= f * m[k][j];
      }
    }
    return std::fabs(det);
  }

  void replace(std::size_t j, const Elem& u) {
    units_[j] = u;
    size_reduce();
  }

  void size_reduce() {
    RealMat rows;
    for (const auto& u : units_) rows.push_back(K_.log_embedding(u));
    const auto U = lll_reduce(rows);
    std::vector<Elem> next;
    for (std::size_t i = 0; i < units_.size(); ++i) next.push_back(power_product(K_, units_, U[i]));
    units_ = std::move(next);
  }

 private:
  const NumberField& K_;
  std::size_t rank_;
  std::vector<Elem> units_;
  std::vector<std::vector<long double>> ortho_;
};

std::vector<std::int64_t> prime_factors_small(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) out.push_back(n);
  return out;
}

std::int64_t primitive_root(std::int64_t q) {
  const auto fs = prime_factors_small(q - 1);
  for (std::int64_t g = 2;; ++g) {
    bool ok = true;
    for (auto f : fs) ok = ok && modp::pow(g, static_cast<std::uint64_t>((q - 1) / f), q) != 1;
    if (ok) return g;
  }
}

std::int64_t residue(const MaximalOrder& O, const PrimeIdeal& P, const Elem& x, std::int64_t q) {
  const auto c = O.coordinates(x);
  if (!c) throw_inconsistency("unit outside the maximal order");
  __int128 s = 0;
  for (std::size_t i = 0; i < c->size(); ++i)
    s += static_cast<__int128>(mpz_fdiv_ui((*c)[i].get_mpz_t(), static_cast<unsigned long>(q))) * P.residue_images[i];
  return static_cast<std::int64_t>(s % q);
}

// Exact p-th root of x in O, if one exists.
std::optional<Elem> pth_root(const MaximalOrder& O, const Elem& x, std::int64_t p) {
  const NumberField& K = O.field();
  const auto vals = K.embed(x);
  const std::size_t n = K.degree();
  const int r1 = K.r1(), r2 = K.r2();
  // Choices per place.
  std::vector<std::vector<std::complex<long double>>> choices;
  for (int i = 0; i < r1 + r2; ++i) {
    std::vector<std::complex<long double>> c;
    const std::complex<long double> v = vals[static_cast<std::size_t>(i)];
    if (i < r1) {
      const long double re = v.real();
      if (p % 2 == 1) {
        c.push_back(std::copysign(std::pow(std::fabs(re), 1.0L / p), re));
      } else {
        if (re <= 0) return std::nullopt;
        const long double r = std::pow(re, 1.0L / p);
        c.push_back(r);
        c.push_back(-r);
      }
    } else {
      const long double mod = std::pow(std::abs(v), 1.0L / p);
      const long double arg = std::arg(v);
      for (std::int64_t k = 0; k < p; ++k)
        c.push_back(std::polar(mod, (arg + 2 * std::numbers::pi_v<long double> * k) / p));
    }
    choices.push_back(std::move(c));
  }
  std::vector<std::vector<long double>> basis_t2(n, std::vector<long double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const auto t = K.t2_coordinates(O.basis()[j]);
    for (std::size_t i = 0; i < n; ++i) basis_t2[i][j] = t[i];
  }
  std::vector<std::size_t> idx(choices.size(), 0);
  const long double s2 = std::sqrt(2.0L);
  for (;;) {
    std::vector<long double> target;
    for (int i = 0; i < r1; ++i) target.push_back(choices[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]].real());
    for (int i = r1; i < r1 + r2; ++i) {
      const auto z = choices[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
      target.push_back(s2 * z.real());
      target.push_back(s2 * z.imag());
    }
    const auto c = solve(basis_t2, target);
    IntVec ci(n);
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(c[i]) || std::fabs(c[i]) > 1e17L) finite = false;
      else ci[i] = Int(static_cast<long>(std::llroundl(c[i])));
    }
    if (finite) {
      const Elem y = O.from_coordinates(ci);
      if (K.pow(y, p) == x) return y;
    }
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return std::nullopt;
}

// Makes the free part p-saturated. Returns true when the lattice grew.
bool saturate_at(const MaximalOrder& O, UnitLattice& lat, const Elem& zeta, unsigned w, std::int64_t p) {
  const NumberField& K = O.field();
  bool grew_any = false;
  for (int round = 0; round < 64; ++round) {
    std::vector<Elem> gens = lat.units();
    const bool with_torsion = (w % static_cast<unsigned>(p) == 0);
    if (with_torsion) gens.insert(gens.begin(), zeta);
    const std::size_t g = gens.size();
    modp::Mat chars(g);  // row per generator, column per character
    std::size_t best_dim = g + 1, stale = 0, total = 0;
    bool grew = false;
    for (std::int64_t q = p + 1; !grew; q += p) {
      if (q > (std::int64_t{1} << 30)) throw_inconsistency("ran out of primes for the saturation test");
      if (!is_prime(Int(static_cast<long>(q)))) continue;
      const auto& primes = O.primes_above(Int(static_cast<long>(q)));
      bool solved = false;
      for (const auto& P : primes) {
        if (P.f != 1) continue;
        const std::int64_t gq = primitive_root(q);
        const std::int64_t h = modp::pow(gq, static_cast<std::uint64_t>((q - 1) / p), q);
        std::unordered_map<std::int64_t, std::int64_t> dlog;
        std::int64_t acc = 1;
        for (std::int64_t i = 0; i < p; ++i) {
          dlog[acc] = i;
          acc = static_cast<std::int64_t>(static_cast<__int128>(acc) * h % q);
        }
        for (std::size_t j = 0; j < g; ++j) {
          const std::int64_t r = residue(O, P, gens[j], q);
          const std::int64_t v = modp::pow(r, static_cast<std::uint64_t>((q - 1) / p), q);
          const auto it = dlog.find(v);
          if (it == dlog.end()) throw_inconsistency("power residue outside mu_p");
          chars[j].push_back(it->second);
        }
        ++total;
        const auto ker = modp::left_kernel(chars, chars[0].size(), p);
        if (ker.empty()) {
          solved = true;
          break;
        }
        if (ker.size() < best_dim) {
          best_dim = ker.size();
          stale = 0;
        } else if (++stale >= 12) {
          stale = 0;
          // Try every kernel line (first nonzero coordinate normalised to 1).
          const std::size_t kd = ker.size();
          std::vector<std::int64_t> combo(kd, 0);
          for (;;) {
            std::size_t t = 0;
            while (t < kd && ++combo[t] == p) combo[t++] = 0;
            if (t == kd) break;
            modp::Vec v(g, 0);
            for (std::size_t a = 0; a < kd; ++a)
              for (std::size_t b = 0; b < g; ++b) v[b] = (v[b] + combo[a] * ker[a][b]) % p;
            // Lines only: first nonzero entry must be 1.
            std::size_t first = g;
            for (std::size_t b = 0; b < g; ++b)
              if (v[b]) {
                first = b;
                break;
              }
            if (first == g || v[first] != 1) continue;
            const std::size_t off = with_torsion ? 1 : 0;
            if (first < off) continue;  // pure torsion combinations are never p-th powers
            std::vector<std::int64_t> bal(g);
            for (std::size_t b = 0; b < g; ++b) bal[b] = v[b] > p / 2 ? v[b] - p : v[b];
            const Elem x = power_product(K, gens, bal);
            auto y = pth_root(O, x, p);
            if (!y) continue;
            // y^p = prod gens^bal with exponent 1 at `first`: swap that unit for y.
            lat.replace(first - off, *y);
            grew = true;
            break;
          }
          if (grew) break;
        }
        if (total > 4000) throw_inconsistency("saturation test did not converge", std::to_string(p));
      }
      if (solved) return grew_any;
    }
    grew_any = true;
  }
  throw_inconsistency("saturation did not terminate", std::to_string(p));
}

}  // namespace

std::vector<Elem> reduced_basis(const NumberField& K, const Lattice& lattice) {
  const auto basis = lattice.basis();
  RealMat rows;
  for (const auto& b : basis) rows.push_back(K.t2_coordinates(b));
  const auto U = lll_reduce(rows);
  std::vector<Elem> out;
  for (const auto& row : U) {
    Elem e = K.zero();
    for (std::size_t j = 0; j < row.size(); ++j)
      if (row[j]) e = e + Rat(static_cast<long>(row[j])) * basis[j];
    out.push_back(std::move(e));
  }
  return out;
}

void enumerate_short(const NumberField& K, const Lattice& lattice, long double bound,
                     const std::function<bool(const Elem&)>& visit) {
  const auto basis = reduced_basis(K, lattice);
  const RealMat g = gram_of(K, basis);
  fincke_pohst(g, bound, [&](const std::vector<std::int64_t>& x, long double) {
    Elem e = K.zero();
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i]) e = e + Rat(static_cast<long>(x[i])) * basis[i];
    return visit(e);
  });
}

UnitGroup compute_units(const MaximalOrder& O) {
  const NumberField& K = O.field();
  const std::size_t n = K.degree();
  UnitGroup out;

  // Torsion: roots of unity have T2 = n.
  unsigned count = 1;  // counts +-pairs, starting with +-1
  out.torsion_generator = -K.one();
  out.torsion_order = 2;
  enumerate_short(K, O.lattice(), static_cast<long double>(n) + 0.25L, [&](const Elem& x) {
    if (x == K.one() || x == -K.one()) return true;
    const Rat nm = K.norm(x);
    if (nm != 1 && nm != -1) return true;
    for (const Elem& c : {x, Elem(-x)}) {
      Elem pw = c;
      for (unsigned k = 1; k <= 24; ++k) {
        if (pw == K.one()) {
          if (c == x) ++count;
          if (k > out.torsion_order) {
            out.torsion_order = k;
            out.torsion_generator = c;
          }
          break;
        }
        pw = K.mul(pw, c);
      }
    }
    return true;
  });
  if (2 * count != out.torsion_order)
    throw_inconsistency("torsion units are not cyclic of the expected order", std::to_string(out.torsion_order));

  const std::size_t rank = static_cast<std::size_t>(K.r1() + K.r2() - 1);
  UnitLattice lat(K, rank);
  if (rank > 0) {
    long double bound = 4.0L * n;
    for (int rounds = 0; rounds < 40 && !lat.full(); ++rounds, bound *= 2) {
      std::unordered_map<std::string, std::vector<Elem>> by_norm;
      std::size_t visited = 0;
      enumerate_short(K, O.lattice(), bound, [&](const Elem& x) {
        ++visited;
        const Rat nm = abs(K.norm(x));
        if (nm == 1) {
          lat.add(x);
          return true;
        }
        auto& bucket = by_norm[nm.get_str()];
        if (bucket.size() < 24) {
          for (const auto& y : bucket) {
            const Elem q = K.mul(x, K.inverse(y));
            if (K.is_integral(q)) lat.add(q);
          }
          bucket.push_back(x);
        }
        return visited < 400000;
      });
    }
    if (!lat.full()) throw_inconsistency("unit search did not reach full rank");
    // Saturate at all primes below regulator / lower bound.
    for (std::int64_t p = 2;; ++p) {
      const long double bound_p = lat.regulator() / kRegulatorLowerBound;
      if (static_cast<long double>(p) > bound_p) {
        out.saturated_below = static_cast<unsigned>(p);
        break;
      }
      if (!is_prime(Int(static_cast<long>(p)))) continue;
      saturate_at(O, lat, out.torsion_generator, out.torsion_order, p);
    }
  }
  out.fundamental = lat.units();
  out.regulator = lat.regulator();
  return out;
}

long double minkowski_bound(const NumberField& K) {
  const std::size_t n = K.degree();
  long double b = std::sqrt(std::fabs(static_cast<long double>(K.discriminant().get_d())));
  for (std::size_t k = 1; k <= n; ++k) b *= static_cast<long double>(k) / static_cast<long double>(n);
  for (int i = 0; i < K.r2(); ++i) b *= 4.0L / std::numbers::pi_v<long double>;
  return b;
}

std::optional<Elem> principal_generator(const MaximalOrder& O, const UnitGroup& units, const Lattice& ideal) {
  const NumberField& K = O.field();
  const Rat nr = O.norm(ideal);
  if (nr.get_den() != 1) throw_domain("principal_generator expects an integral ideal");
  const Int N = nr.get_num();
  if (N == 1) return K.one();
  const std::size_t places = K.places();
  std::vector<long double> V(places, 0);
  for (const auto& u : units.fundamental) {
    const auto l = K.log_embedding(u);
    for (std::size_t i = 0; i < places; ++i) V[i] += 0.5L * std::fabs(l[i]);
  }
  const long double n = static_cast<long double>(K.degree());
  long double bound = 0;
  for (std::size_t i = 0; i < places; ++i) {
    const long double ni = static_cast<int>(i) < K.r1() ? 1.0L : 2.0L;
    bound += ni * std::exp(2.0L * V[i] / ni);
  }
  bound *= std::pow(static_cast<long double>(N.get_d()), 2.0L / n) * (1.0L + 1e-9L);
  std::optional<Elem> found;
  enumerate_short(K, ideal, bound, [&](const Elem& x) {
    if (abs(K.norm(x)) == Rat(N)) {
      found = x;
      return false;
    }
    return true;
  });
  return found;
}

Lattice reduce_ideal(const MaximalOrder& O, const Lattice& ideal) {
  const Lattice inv = O.inverse(ideal);
  const auto basis = reduced_basis(O.field(), inv);
  const Elem& a = basis.front();
  std::vector<Elem> gens;
  for (const auto& b : ideal.basis()) gens.push_back(O.field().mul(a, b));
  Lattice out = Lattice::from_generators(gens, O.degree());
  if (!O.lattice().contains(out)) throw_inconsistency("reduced ideal is not integral");
  return out;
}

ClassGroupResult class_group(const MaximalOrder& O, const UnitGroup& units) {
  const NumberField& K = O.field();
  const long double mb = minkowski_bound(K);
  std::vector<Lattice> gens;
  for (std::int64_t p = 2; p <= static_cast<std::int64_t>(mb); ++p) {
    if (!is_prime(Int(static_cast<long>(p)))) continue;
    for (const auto& P : O.primes_above(Int(static_cast<long>(p))))
      if (P.norm() <= Int(static_cast<long>(mb))) gens.push_back(P.lattice);
  }
  ClassGroupResult out;
  out.representatives.push_back(O.lattice());
  auto equivalent = [&](const Lattice& a, const Lattice& b) {
    const Rat nb = O.norm(b);
    const Lattice bt = O.inverse(b).scaled(nb);
    return principal_generator(O, units, O.multiply(a, bt)).has_value();
  };
  for (std::size_t i = 0; i < out.representatives.size(); ++i) {
    for (const auto& P : gens) {
      const Lattice j = reduce_ideal(O, O.multiply(out.representatives[i], P));
      bool known = false;
      for (const auto& r : out.representatives)
        if (equivalent(j, r)) {
          known = true;
          break;
        }
      if (!known) out.representatives.push_back(j);
      if (out.representatives.size() > 100000) throw_unsupported("class group too large for enumeration");
    }
  }
  out.h = Int(static_cast<long>(out.representatives.size()));
  return out;
}

}  // namespace qmpol
