#include "qmpol/cm_orders.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <mutex>
#include <tuple>

#include "qmpol/class_group.hpp"
#include "qmpol/errors.hpp"
#include "qmpol/number_field.hpp"

namespace qmpol {

const ClassNumberSource& direct_source() {
  static const ClassNumberSource source;
  return source;
}

std::optional<unsigned> conductor_exponent_rule(std::optional<unsigned> k, unsigned e) {
  if (!k) return e;
  if (*k <= e + 1) return *k / 2;
  if (*k / 2 >= e) return e;
  return std::nullopt;
}

namespace {

using F2Vec = std::vector<int>;

// Rank over F_2 of a list of vectors.
std::size_t rank_f2(std::vector<F2Vec> rows) {
  std::size_t rank = 0;
  const std::size_t n = rows.empty() ? 0 : rows.front().size();
  for (std::size_t c = 0; c < n && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[rank], rows[p]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != rank && rows[i][c])
        for (std::size_t j = 0; j < n; ++j) rows[i][j] ^= rows[rank][j];
    ++rank;
  }
  return rank;
}

// (e_S, e_S^+) from the classes in R_F^*/R_F^{*2} of the norms of generators of S^*.
std::pair<unsigned, unsigned> norm_exponents(const BaseField& F, const std::vector<F2Vec>& norm_classes) {
  const std::size_t n = F.degree();
  const std::size_t r = rank_f2(norm_classes);
  const auto tp = F.totally_positive_unit_classes();
  std::vector<F2Vec> both = norm_classes;
  both.insert(both.end(), tp.begin(), tp.end());
  // dim(image cap T) = dim image + dim T - dim(image + T)
  const std::size_t inter = r + tp.size() - rank_f2(both);
  return {static_cast<unsigned>(n - r), static_cast<unsigned>(tp.size() - inter)};
}

Int ipow(const Int& b, unsigned e) {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), e);
  return out;
}

// Units of the imaginary quadratic order of discriminant d.
unsigned roots_of_unity(const Int& d) {
  if (d == -3) return 6;
  if (d == -4) return 4;
  return 2;
}

// k with eps0^k = eps for fundamental units of discriminants d0 and d0*f^2.
Int real_unit_index(const PellUnit& u0, const PellUnit& u, const Int& f) {
  const Int d0 = u0.discriminant;
  Int x = u0.x, y = u0.y;  // (x + y sqrt d0)/2
  const Int tx = u.x, ty = u.y * f;
  for (unsigned k = 1; k < 100000; ++k) {
    if (x == tx && y == ty) return Int(k);
    if (y > ty) break;
    const Int nx = (x * u0.x + d0 * y * u0.y) / 2;
    const Int ny = (x * u0.y + y * u0.x) / 2;
    x = nx;
    y = ny;
  }
  throw_inconsistency("order unit is not a power of the field unit", u.discriminant.get_str());
}

// ---------------------------------------------------------------------------
// Binary-form path over Q.

std::shared_ptr<CMExtension> forms_extension(const BaseField& F, const FieldElement& delta,
                                             const ClassNumberSource& src) {
  auto E = std::make_shared<CMExtension>();
  E->base = std::make_shared<const BaseField>(F);
  E->delta = delta;
  const Int r = -delta.x.get_num();  // radicand
  const Discriminant disc = decompose_discriminant(Int(4 * r));
  const Int& d0 = disc.fundamental_part;
  const Int& f = disc.conductor;
  E->disc_L = d0;
  E->abs_disc_L = abs(d0);
  E->rel_disc_norm = abs(d0);
  E->conductor_norm = f;
  E->real_places = d0 > 0 ? 2 : 0;
  E->h_L = d0 < 0 ? src.h_imag(d0) : src.h_real(d0).h_wide;
  if (f > 1)
    for (const auto& pp : factorize(f).factors)
      E->conductor.push_back({pp.prime, 1, 1, pp.exponent, {FieldElement{Rat(pp.prime), 0}}});

  // 2-adic rule: a_2 = [k/2] etc. with k = v_2(r - 1) when 2 does not divide r.
  const unsigned v2r = r % 2 == 0 ? valuation(r, Int(2)) : 0;
  if (v2r <= 1) {
    unsigned expected = 0;
    if (v2r == 0) {
      const auto a = conductor_exponent_rule(valuation(Int(r - 1), Int(2)), 1);
      if (!a) throw_unsupported("ambiguous-conductor", "2");
      expected = *a;
    }
    const unsigned actual = f % 2 == 0 ? valuation(f, Int(2)) : 0;
    if (actual != expected) throw_inconsistency("conductor at 2 contradicts the k/e rule", r.get_str());
  }

  std::optional<PellUnit> u0;
  if (d0 > 0) u0 = src.pell(d0);
  std::vector<Int> fs{1};
  if (f > 1) fs = divisors(factorize(f));
  for (const Int& fp : fs) {
    CMOrderDescriptor S;
    for (const auto& part : E->conductor) S.exponents.push_back(fp % part.norm == 0 ? valuation(fp, part.norm) : 0);
    S.conductor_divisor_norm = fp;
    S.discriminant = d0 * fp * fp;
    if (d0 < 0) {
      S.h_S = src.h_imag(S.discriminant);
      S.unit_index = fp == 1 ? 1 : roots_of_unity(d0) / 2;
      S.e_S = 1;
    } else {
      S.h_S = src.h_real(S.discriminant).h_wide;
      const PellUnit u = fp == 1 ? *u0 : src.pell(S.discriminant);
      S.unit_index = fp == 1 ? Int(1) : real_unit_index(*u0, u, fp);
      S.e_S = u.norm_sign == -1 ? 0 : 1;
    }
    S.e_S_plus = 0;
    S.ample = true;
    E->orders.push_back(std::move(S));
  }
  return E;
}

// ---------------------------------------------------------------------------
// Number-field engine path.

struct BasePrime {
  std::vector<FieldElement> generators;
  unsigned e = 1, f = 1;
  Int norm;
  const PrimeIdeal* prime = nullptr;  // in F.ring(); null over Q
};

std::vector<BasePrime> primes_over_two(const BaseField& F) {
  if (F.is_rational()) return {BasePrime{{FieldElement{2, 0}}, 1, 1, Int(2), nullptr}};
  std::vector<BasePrime> out;
  for (const auto& P : F.ring().primes_above(Int(2))) {
    BasePrime b;
    for (const auto& row : P.lattice.basis()) b.generators.push_back({row[0], row[1]});
    b.e = P.e;
    b.f = P.f;
    b.norm = P.norm();
    b.prime = &P;
    out.push_back(std::move(b));
  }
  return out;
}

std::optional<unsigned> base_valuation(const BaseField& F, const BasePrime& q, const FieldElement& a) {
  if (a == FieldElement{}) return std::nullopt;
  if (F.is_rational()) return valuation(a.x.get_num(), Int(2)) - valuation(a.x.get_den(), Int(2));
  const int v = F.ring().valuation(*q.prime, Elem{a.x, a.y});
  if (v < 0) throw_domain("element is not integral at a prime over 2", F.to_string(a));
  return static_cast<unsigned>(v);
}

// max v_q(alpha - x^2) over x in R_F mod 4 (x mod q^{e+1} decides it up to
// 2e + 1); nullopt when alpha is a square.
std::optional<unsigned> square_lift_depth(const BaseField& F, const BasePrime& q, const FieldElement& alpha) {
  const FieldElement omega = F.is_rational() ? FieldElement{0, 0}
                             : F.disc() == F.m() ? FieldElement{ratio(Int(1), Int(2)), ratio(Int(1), Int(2))}
                                                 : FieldElement{0, 1};
  const unsigned cap = 2 * q.e + 2;
  unsigned best = 0;
  for (int c0 = 0; c0 < 4; ++c0)
    for (int c1 = 0; c1 < (F.is_rational() ? 1 : 4); ++c1) {
      const FieldElement x = F.add({c0, 0}, F.mul({c1, 0}, omega));
      const auto v = base_valuation(F, q, F.sub(alpha, F.mul(x, x)));
      best = std::max(best, v ? std::min(*v, cap) : cap);
    }
  if (best >= cap) return std::nullopt;
  return best;
}

std::vector<FieldElement> ideal_product(const BaseField& F, const std::vector<FieldElement>& a,
                                        const std::vector<FieldElement>& b) {
  std::vector<FieldElement> out;
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(F.mul(x, y));
  if (F.is_rational()) {
    Int g = 0;
    for (const auto& x : out) g = gcd(g, x.x.get_num());
    return {FieldElement{Rat(g), 0}};
  }
  std::vector<Elem> gens;
  for (const auto& x : out) gens.push_back(Elem{x.x, x.y});
  std::vector<FieldElement> reduced;
  for (const auto& row : F.ring().ideal(gens).basis()) reduced.push_back({row[0], row[1]});
  return reduced;
}

std::vector<FieldElement> ideal_power_product(const BaseField& F, const std::vector<BasePrime>& primes,
                                              const std::vector<unsigned>& exps) {
  std::vector<FieldElement> out{FieldElement{1, 0}};
  for (std::size_t i = 0; i < primes.size(); ++i)
    for (unsigned k = 0; k < exps[i]; ++k) out = ideal_product(F, out, primes[i].generators);
  return out;
}

// All exponent vectors 0 <= x <= bound componentwise.
std::vector<std::vector<unsigned>> exponent_box(const std::vector<unsigned>& bound) {
  std::vector<std::vector<unsigned>> out{{}};
  for (unsigned b : bound) {
    std::vector<std::vector<unsigned>> next;
    for (const auto& v : out)
      for (unsigned k = 0; k <= b; ++k) {
        auto w = v;
        w.push_back(k);
        next.push_back(std::move(w));
      }
    out = std::move(next);
  }
  return out;
}

// Residues of O modulo an ideal A, on the integral basis of O.
class QuotientRing {
 public:
  QuotientRing(const MaximalOrder& O, const Lattice& A) : O_(O) {
    IntMat rows;
    for (const auto& b : A.basis()) rows.push_back(*O.coordinates(b));
    hnf_ = hermite_normal_form(rows, O.degree());
  }
  IntVec reduce(IntVec v) const {
    for (std::size_t i = 0; i < hnf_.size(); ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), v[i].get_mpz_t(), hnf_[i][i].get_mpz_t());
      if (q != 0)
        for (std::size_t j = i; j < v.size(); ++j) v[j] -= q * hnf_[i][j];
    }
    return v;
  }
  IntVec of(const Elem& a) const { return reduce(*O_.coordinates(a)); }
  IntVec mul(const IntVec& a, const IntVec& b) const {
    const auto& c = O_.structure_constants();
    const std::size_t n = a.size();
    IntVec out(n, Int(0));
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (b[j] == 0) continue;
        const Int ab = a[i] * b[j];
        for (std::size_t k = 0; k < n; ++k) out[k] += ab * c[i][j][k];
      }
    }
    return reduce(out);
  }

 private:
  const MaximalOrder& O_;
  IntMat hnf_;
};

struct OrderData {
  Int h_S;
  Int unit_index;
  std::vector<F2Vec> norm_classes;
};

OrderData engine_order(const BaseField& F, const MaximalOrder& O, const UnitGroup& U, const Int& h_L,
                       const Lattice& S, const Lattice& A) {
  const NumberField& K = O.field();
  const std::size_t n = O.degree();
  OrderData out;

  // |(O/A)^*| = N(A) prod (1 - 1/N(P)).
  const Rat normA = O.norm(A);
  Rat units_OA = normA;
  std::vector<const PrimeIdeal*> support;
  if (normA != 1)
    for (const auto& pp : factorize(normA.get_num()).factors)
      for (const auto& P : O.primes_above(pp.prime))
        if (O.valuation(P, A) > 0) {
          support.push_back(&P);
          units_OA *= Rat(1) - ratio(Int(1), P.norm());
        }
  if (units_OA.get_den() != 1) throw_inconsistency("|(O/A)^*| is not an integer");
  const Int group_order = units_OA.get_num();

  // |(S/A)^*|: coset representatives of S/A in box form.
  const auto sb = S.basis();
  IntMat rel;
  for (const auto& a : A.basis()) rel.push_back(*S.coordinates(a));
  const IntMat h = hermite_normal_form(rel, n);
  std::vector<unsigned> box;
  for (std::size_t i = 0; i < n; ++i) box.push_back(static_cast<unsigned>(to_i64(h[i][i]) - 1));
  Int units_SA = 0;
  for (const auto& c : exponent_box(box)) {
    Elem x = K.zero();
    for (std::size_t i = 0; i < n; ++i)
      if (c[i]) x = x + Rat(c[i]) * sb[i];
    bool unit = true;
    for (const PrimeIdeal* P : support) unit = unit && !P->lattice.contains(x);
    if (unit) ++units_SA;
  }

  // S^* = kernel of the exponent map into (O/A)^* / (S/A)^*.
  const auto gens = U.generators();
  const std::size_t k = gens.size();
  const QuotientRing R(O, A);
  const unsigned M = static_cast<unsigned>(to_i64(group_order));
  std::vector<std::vector<IntVec>> powers(k);
  for (std::size_t i = 0; i < k; ++i) {
    powers[i].push_back(R.of(K.one()));
    const IntVec g = R.of(gens[i]);
    for (unsigned e = 1; e < M; ++e) powers[i].push_back(R.mul(powers[i].back(), g));
  }
  IntMat kernel;
  for (std::size_t i = 0; i < k; ++i) {
    IntVec v(k, Int(0));
    v[i] = M;
    kernel.push_back(v);
  }
  IntVec tors(k, Int(0));
  tors[0] = U.torsion_order;
  kernel.push_back(tors);
  if (M > 1)
    for (const auto& e : exponent_box(std::vector<unsigned>(k, M - 1))) {
      IntVec r = powers[0][e[0]];
      for (std::size_t i = 1; i < k; ++i) r = R.mul(r, powers[i][e[i]]);
      if (S.contains(O.from_coordinates(r))) kernel.push_back(IntVec(e.begin(), e.end()));
    }
  const IntMat kh = hermite_normal_form(kernel, k);
  out.unit_index = determinant(kh);

  const Rat hS = Rat(h_L) * Rat(group_order) / (Rat(units_SA) * Rat(out.unit_index));
  if (hS.get_den() != 1) throw_inconsistency("order class number is not an integer", hS.get_str());
  out.h_S = hS.get_num();

  std::vector<F2Vec> gen_classes;
  for (const auto& g : gens) {
    const auto [x, y] = K.relative_norm(g);
    gen_classes.push_back(F.unit_class(FieldElement{x, y}));
  }
  for (const auto& row : kh) {
    F2Vec c(F.degree(), 0);
    for (std::size_t i = 0; i < k; ++i)
      if (mpz_odd_p(row[i].get_mpz_t()))
        for (std::size_t j = 0; j < c.size(); ++j) c[j] ^= gen_classes[i][j];
    out.norm_classes.push_back(c);
  }
  return out;
}

std::shared_ptr<CMExtension> engine_extension(const BaseField& F, const FieldElement& delta,
                                              const ClassNumberSource& src, Backend backend) {
  auto E = std::make_shared<CMExtension>();
  E->base = std::make_shared<const BaseField>(F);
  E->delta = delta;
  E->backend = backend;
  const FieldElement radicand = F.neg(delta);
  auto O = std::make_shared<const MaximalOrder>(NumberField::relative_quadratic(F.m(), radicand.x, radicand.y));
  const NumberField& K = O->field();
  E->maximal_order = O;
  E->disc_L = K.discriminant();
  E->abs_disc_L = abs(E->disc_L);
  E->real_places = K.r1();
  if (E->abs_disc_L > kDeskDiscriminantBound)
    throw_unsupported("desk-scale exceeded", "|D_L| = " + E->abs_disc_L.get_str());

  const Int dF2 = F.disc() * F.disc();
  if (E->abs_disc_L % dF2 != 0) throw_inconsistency("D_F^2 does not divide D_L");
  E->rel_disc_norm = E->abs_disc_L / dF2;
  const Rat n4d = abs(F.norm(F.mul({4, 0}, delta)));
  if (n4d.get_den() != 1 || n4d.get_num() % E->rel_disc_norm != 0)
    throw_inconsistency("N(d_{L/F}) does not divide N(4 delta)");
  const Int f2 = n4d.get_num() / E->rel_disc_norm;
  if (!is_square(f2)) throw_inconsistency("N(4 delta)/N(d_{L/F}) is not a square");
  E->conductor_norm = isqrt(f2);

  // R_F[w] and the conductor: the largest ideal a | 2 with a O_L inside R_F[w].
  const FieldElement omega = F.is_rational() ? FieldElement{1, 0}
                             : F.disc() == F.m() ? FieldElement{ratio(Int(1), Int(2)), ratio(Int(1), Int(2))}
                                                 : FieldElement{0, 1};
  std::vector<Elem> rf_gens{K.one()};
  if (!F.is_rational()) rf_gens.push_back(K.from_base(omega.x, omega.y));
  std::vector<Elem> order_gens = rf_gens;
  for (const auto& g : rf_gens) order_gens.push_back(K.mul(g, K.w()));
  const Lattice monogenic = Lattice::from_generators(order_gens, K.degree());

  auto extended = [&](const std::vector<FieldElement>& gens) {
    std::vector<Elem> lifted;
    for (const auto& g : gens) lifted.push_back(K.from_base(g.x, g.y));
    return O->ideal(lifted);
  };

  const auto primes = primes_over_two(F);
  std::vector<unsigned> es;
  for (const auto& q : primes) es.push_back(q.e);
  std::optional<std::vector<unsigned>> best;
  Int best_norm = 0;
  std::vector<std::vector<unsigned>> satisfying;
  for (const auto& a : exponent_box(es)) {
    const auto gens = ideal_power_product(F, primes, a);
    if (!monogenic.contains(extended(gens))) continue;
    satisfying.push_back(a);
    Int nm = 1;
    for (std::size_t i = 0; i < a.size(); ++i) nm *= ipow(primes[i].norm, a[i]);
    if (!best || nm < best_norm) {
      best = a;
      best_norm = nm;
    }
  }
  if (!best) throw_inconsistency("2 O_L is not contained in R_F[w]");
  for (const auto& a : satisfying)
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] < (*best)[i]) throw_inconsistency("conductor candidates do not form a divisor chain");
  if (best_norm != E->conductor_norm) throw_inconsistency("conductor norm disagrees with the discriminant relation");

  for (std::size_t i = 0; i < primes.size(); ++i) {
    E->conductor.push_back({primes[i].norm, primes[i].e, primes[i].f, (*best)[i], primes[i].generators});
    // The k/e rule at q not dividing delta. k is read off -delta - x0 with
    // x0 a square lift of the leading digit (the best one; with x0 = 1 the
    // exact cases can fail, e.g. -delta = -1 over Q(sqrt3)). The literal
    // x0 = 1 reading must still satisfy min([k/2], e) <= a <= e.
    const auto vd = base_valuation(F, primes[i], radicand);
    if (!vd) continue;
    const unsigned a = (*best)[i];
    if (*vd == 0) {
      const unsigned e = primes[i].e;
      const auto literal = base_valuation(F, primes[i], F.sub(radicand, {1, 0}));
      const unsigned lo = literal ? std::min(*literal / 2, e) : e;
      if (a < lo || a > e) throw_inconsistency("conductor exponent outside min([k/2], e)..e", F.to_string(delta));
      const auto k = square_lift_depth(F, primes[i], radicand);
      const auto expected = conductor_exponent_rule(k, e);
      if (!expected) throw_unsupported("ambiguous-conductor", F.name() + " at a prime of norm " + primes[i].norm.get_str());
      if (*expected != a) throw_inconsistency("conductor exponent contradicts the k/e rule", F.to_string(delta));
    } else if (*vd == 1 && a != 0) {
      throw_inconsistency("conductor divisible by a prime dividing delta", F.to_string(delta));
    }
  }

  // Units and class number of O_L.
  auto U = std::make_shared<const UnitGroup>(compute_units(*O));
  E->units = U;
  E->h_L = src.h_quartic(F.m(), radicand.x, radicand.y, [&] { return class_group(*O, *U).h; });

  const std::optional<bool> ample = F.full_signature() ? std::optional<bool>(true) : std::nullopt;
  for (const auto& b : exponent_box(*best)) {
    CMOrderDescriptor S;
    S.exponents = b;
    const auto fgens = ideal_power_product(F, primes, b);
    S.conductor_divisor_norm = 1;
    for (std::size_t i = 0; i < b.size(); ++i) S.conductor_divisor_norm *= ipow(primes[i].norm, b[i]);
    const Lattice A = extended(fgens);
    std::vector<Elem> sg = rf_gens;
    for (const auto& v : A.basis()) sg.push_back(v);
    S.lattice = Lattice::from_generators(sg, K.degree());
    if (!S.lattice.contains(monogenic) || !O->lattice().contains(S.lattice))
      throw_inconsistency("order is not between R_F[w] and O_L");
    const OrderData d = engine_order(F, *O, *U, E->h_L, S.lattice, A);
    S.h_S = d.h_S;
    S.unit_index = d.unit_index;
    std::tie(S.e_S, S.e_S_plus) = norm_exponents(F, d.norm_classes);
    if (F.is_rational()) {
      const Rat idx = S.lattice.covolume() / O->lattice().covolume();
      S.discriminant = E->disc_L * idx.get_num() * idx.get_num();
    } else {
      S.discriminant = 0;
    }
    S.ample = ample;
    E->orders.push_back(std::move(S));
  }
  return E;
}

std::mutex memo_mutex;
std::map<std::string, std::shared_future<std::shared_ptr<const CMExtension>>> memo;

}  // namespace

std::shared_ptr<const CMExtension> conductor(const BaseField& F, const FieldElement& delta,
                                             const ClassNumberSource& source, Backend backend) {
  if (!F.is_integral(delta) || delta == FieldElement{}) throw_domain("delta must be a nonzero integral element", F.to_string(delta));
  if (F.is_rational() && is_square(Int(-delta.x.get_num())))
    throw_domain("-delta is a square; F(sqrt(-delta)) is not a field", F.to_string(delta));
  const std::string key = F.m().get_str() + "|" + delta.x.get_str() + "|" + delta.y.get_str() + "|" +
                          std::to_string(static_cast<int>(backend));
  std::promise<std::shared_ptr<const CMExtension>> promise;
  std::shared_future<std::shared_ptr<const CMExtension>> future;
  bool owner = false;
  {
    std::lock_guard<std::mutex> lock(memo_mutex);
    auto it = memo.find(key);
    if (it != memo.end()) {
      future = it->second;
    } else {
      future = promise.get_future().share();
      memo.emplace(key, future);
      owner = true;
    }
  }
  if (owner) {
    try {
      if (F.is_rational() && backend == Backend::automatic) promise.set_value(forms_extension(F, delta, source));
      else promise.set_value(engine_extension(F, delta, source, backend));
    } catch (...) {
      promise.set_exception(std::current_exception());
      std::lock_guard<std::mutex> lock(memo_mutex);
      memo.erase(key);
    }
  }
  return future.get();
}

void clear_extension_memo() {
  std::lock_guard<std::mutex> lock(memo_mutex);
  memo.clear();
}

std::vector<CMOrderDescriptor> order_lattice(const CMExtension& E) { return E.orders; }

MaximalOrderInfo classgroup_small(const CMExtension& E) {
  MaximalOrderInfo info;
  info.h = E.h_L;
  info.disc = E.disc_L;
  if (E.maximal_order) {
    info.integral_basis = E.maximal_order->basis();
  } else {
    const NumberField K = NumberField::quadratic(Int(-E.delta.x.get_num()));
    info.integral_basis = K.maximal_order().basis();
  }
  return info;
}

Int order_class_number(const CMOrderDescriptor& S) { return S.h_S; }

std::pair<unsigned, unsigned> unit_norm_exponents(const CMOrderDescriptor& S) { return {S.e_S, S.e_S_plus}; }

}  // namespace qmpol
