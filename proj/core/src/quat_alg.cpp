#include "qmpol/quat_alg.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qmpol/errors.hpp"

namespace qmpol {

namespace {

unsigned mod_ui(const Int& n, unsigned long m) { return static_cast<unsigned>(mpz_fdiv_ui(n.get_mpz_t(), m)); }

int hilbert_int(Int a, Int b, const Int& p) {
  unsigned alpha = 0, beta = 0;
  while (a % p == 0) a /= p, ++alpha;
  while (b % p == 0) b /= p, ++beta;
  unsigned e = 0;
  if (p == 2) {
    auto eps = [](const Int& u) { return mod_ui(u, 4) == 3 ? 1u : 0u; };
    auto omega = [](const Int& u) {
      const unsigned r = mod_ui(u, 8);
      return (r == 3 || r == 5) ? 1u : 0u;
    };
    e = eps(a) * eps(b) + alpha * omega(b) + beta * omega(a);
    return e % 2 ? -1 : 1;
  }
  if (mod_ui(p, 4) == 3) e = alpha * beta;
  int s = e % 2 ? -1 : 1;
  if (beta % 2) s *= kronecker(a, p);
  if (alpha % 2) s *= kronecker(b, p);
  return s;
}

// Integer in the square class of a nonzero rational.
Int square_class(const Rat& q) {
  if (q == 0) throw_domain("Hilbert symbol of zero");
  return q.get_num() * q.get_den();
}

// sigma(A) + sigma(B) sqrt(sigma(C)) with sigma(C) > 0, exactly.
int sign_with_root(const BaseField& F, unsigned place, const FieldElement& A, const FieldElement& B,
                   const FieldElement& C) {
  const int sa = F.sign_at(A, place), sb = F.sign_at(B, place);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  const int s = F.sign_at(F.sub(F.mul(A, A), F.mul(F.mul(B, B), C)), place);
  if (s == 0) throw_inconsistency("vanishing entry in the split image");
  return s > 0 ? sa : sb;
}

struct SplitData {
  FieldElement a, b, x, y, z;  // after re-basing so that sigma(a) > 0
};

SplitData split_data(const PureQuaternion& mu, unsigned place) {
  const QuaternionAlgebra& B = *mu.algebra;
  const BaseField& F = *B.base;
  if (F.sign_at(B.a, place) > 0) return {B.a, B.b, mu.x, mu.y, mu.z};
  if (F.sign_at(B.b, place) > 0) return {B.b, B.a, mu.y, mu.x, F.neg(mu.z)};
  throw_domain("the algebra is ramified at this real place", std::to_string(place));
}

}  // namespace

int hilbert_symbol(const Rat& a, const Rat& b, const Int& p) {
  if (a == 0 || b == 0) throw_domain("Hilbert symbol of zero");
  if (p == kInfinity) return (a < 0 && b < 0) ? -1 : 1;
  if (!is_prime(p)) throw_domain("Hilbert symbol needs a prime or infinity", p.get_str());
  return hilbert_int(square_class(a), square_class(b), p);
}

bool QuaternionAlgebra::splits_at(unsigned place) const {
  return base->sign_at(a, place) > 0 || base->sign_at(b, place) > 0;
}

QuaternionAlgebra discriminant_of(const Rat& a, const Rat& b) {
  const Int A = square_class(a), B = square_class(b);
  std::set<Int> candidates{Int(2)};
  for (const Int& n : {A, B})
    if (abs(n) > 1)
      for (const auto& pp : factorize(n).factors) candidates.insert(pp.prime);
  QuaternionAlgebra Q;
  Q.base = std::make_shared<const BaseField>(BaseField::rational());
  Q.a = {a, 0};
  Q.b = {b, 0};
  Int disc = 1;
  for (const Int& p : candidates)
    if (hilbert_int(A, B, p) == -1) {
      Q.ramified_finite.push_back(p);
      disc *= p;
    }
  const bool real_split = hilbert_symbol(a, b, Int(kInfinity)) == 1;
  if ((Q.ramified_finite.size() + (real_split ? 0 : 1)) % 2 != 0)
    throw_inconsistency("odd number of ramified places", a.get_str() + "," + b.get_str());
  Q.totally_indefinite = real_split;
  Q.is_division = disc != 1 || !real_split;
  Q.disc_ideal = principal_ideal(*Q.base, {Rat(disc), 0});
  return Q;
}

QuaternionAlgebra quaternion_algebra(const BaseField& F, const FieldElement& a, const FieldElement& b,
                                     const std::vector<FieldIdeal>& ramified_primes) {
  if (a == FieldElement{} || b == FieldElement{}) throw_domain("quaternion algebra needs nonzero a, b");
  if (F.is_rational()) {
    QuaternionAlgebra Q = discriminant_of(a.x, b.x);
    std::vector<Int> given;
    for (const auto& P : ramified_primes) given.push_back(P.norm);
    std::sort(given.begin(), given.end());
    if (!ramified_primes.empty() && given != Q.ramified_finite)
      throw_domain("supplied ramification disagrees with the Hilbert symbols");
    return Q;
  }
  QuaternionAlgebra Q;
  Q.base = std::make_shared<const BaseField>(F);
  Q.a = a;
  Q.b = b;
  std::vector<FieldElement> gens{{1, 0}};
  for (const auto& P : ramified_primes) {
    Q.ramified_finite.push_back(P.norm);
    std::vector<FieldElement> next;
    for (const auto& g : gens)
      for (const auto& h : P.generators) next.push_back(F.mul(g, h));
    gens = std::move(next);
  }
  Q.disc_ideal = make_ideal(F, gens);
  unsigned real_ramified = 0;
  for (unsigned s = 0; s < F.degree(); ++s)
    if (!Q.splits_at(s)) ++real_ramified;
  if ((ramified_primes.size() + real_ramified) % 2 != 0)
    throw_domain("odd number of ramified places");
  Q.totally_indefinite = real_ramified == 0;
  Q.is_division = !ramified_primes.empty() || real_ramified > 0;
  return Q;
}

Quaternion qmul(const QuaternionAlgebra& B, const Quaternion& p, const Quaternion& q) {
  const BaseField& F = *B.base;
  const auto& [x1, y1, z1, t1] = p.c;
  const auto& [x2, y2, z2, t2] = q.c;
  auto m = [&](const FieldElement& u, const FieldElement& v) { return F.mul(u, v); };
  const FieldElement ab = F.mul(B.a, B.b);
  Quaternion r;
  r.c[0] = F.add(F.add(m(x1, x2), m(B.a, m(y1, y2))), F.sub(m(B.b, m(z1, z2)), m(ab, m(t1, t2))));
  r.c[1] = F.add(F.add(m(x1, y2), m(y1, x2)), m(B.b, F.sub(m(t1, z2), m(z1, t2))));
  r.c[2] = F.add(F.add(m(x1, z2), m(z1, x2)), m(B.a, F.sub(m(y1, t2), m(t1, y2))));
  r.c[3] = F.add(F.add(m(x1, t2), m(t1, x2)), F.sub(m(y1, z2), m(z1, y2)));
  return r;
}

Quaternion qconj(const QuaternionAlgebra& B, const Quaternion& p) {
  const BaseField& F = *B.base;
  return {{p.c[0], F.neg(p.c[1]), F.neg(p.c[2]), F.neg(p.c[3])}};
}

FieldElement reduced_norm(const QuaternionAlgebra& B, const Quaternion& p) { return qmul(B, p, qconj(B, p)).c[0]; }

FieldElement reduced_trace(const QuaternionAlgebra& B, const Quaternion& p) { return B.base->add(p.c[0], p.c[0]); }

Quaternion qinverse(const QuaternionAlgebra& B, const Quaternion& p) {
  const BaseField& F = *B.base;
  const FieldElement n = reduced_norm(B, p);
  if (n == FieldElement{}) throw_domain("quaternion of norm zero has no inverse");
  const FieldElement inv = F.inv(n);
  Quaternion c = qconj(B, p);
  for (auto& e : c.c) e = F.mul(e, inv);
  return c;
}

PureQuaternion PureQuaternion::make(std::shared_ptr<const QuaternionAlgebra> B, const FieldElement& x,
                                    const FieldElement& y, const FieldElement& z) {
  PureQuaternion mu;
  mu.algebra = std::move(B);
  mu.x = x;
  mu.y = y;
  mu.z = z;
  const BaseField& F = *mu.algebra->base;
  const auto& a = mu.algebra->a;
  const auto& b = mu.algebra->b;
  // mu^2 = a x^2 + b y^2 - a b z^2
  const FieldElement sq = F.sub(F.add(F.mul(a, F.mul(x, x)), F.mul(b, F.mul(y, y))), F.mul(F.mul(a, b), F.mul(z, z)));
  mu.delta = F.neg(sq);
  const Quaternion q = mu.as_quaternion();
  const Quaternion q2 = qmul(*mu.algebra, q, q);
  if (!(q2.c[0] == sq) || !(q2.c[1] == FieldElement{}) || !(q2.c[2] == FieldElement{}) || !(q2.c[3] == FieldElement{}))
    throw_inconsistency("mu^2 + delta != 0");
  return mu;
}

PureQuaternion PureQuaternion::from(std::shared_ptr<const QuaternionAlgebra> B, const Quaternion& q) {
  if (!(q.c[0] == FieldElement{})) throw_domain("quaternion is not pure");
  return make(std::move(B), q.c[1], q.c[2], q.c[3]);
}

Quaternion PureQuaternion::as_quaternion() const { return {{FieldElement{}, x, y, z}}; }

PureQuaternion PureQuaternion::negated() const {
  const BaseField& F = *algebra->base;
  return make(algebra, F.neg(x), F.neg(y), F.neg(z));
}

std::array<std::array<long double, 2>, 2> real_image(const PureQuaternion& mu, unsigned place) {
  const BaseField& F = *mu.algebra->base;
  const SplitData s = split_data(mu, place);
  const long double ra = std::sqrt(F.embed(s.a, place));
  const long double b = F.embed(s.b, place), x = F.embed(s.x, place), y = F.embed(s.y, place),
                    z = F.embed(s.z, place);
  return {{{x * ra, y + z * ra}, {b * (y - z * ra), -x * ra}}};
}

std::array<std::array<long double, 2>, 2> conjugator(const PureQuaternion& mu, unsigned place) {
  const BaseField& F = *mu.algebra->base;
  const auto M = real_image(mu, place);
  const long double d = F.embed(mu.delta, place);
  if (F.sign_at(mu.delta, place) > 0) {
    // rows r1 = (1, 0), r2 = r1 M / sqrt(delta): nu M = omega nu.
    const long double s = std::sqrt(d);
    return {{{1, 0}, {M[0][0] / s, M[0][1] / s}}};
  }
  // Left eigenvectors for +t and -t, first nonzero entry made positive.
  const long double t = std::sqrt(-d);
  auto left = [&](long double ev) {
    std::array<long double, 2> v1{M[1][0], ev - M[0][0]};  // v (M - ev) = 0, from column 1
    std::array<long double, 2> v2{ev - M[1][1], M[0][1]};  // from column 2
    auto nrm = [](const std::array<long double, 2>& v) { return std::fabs(v[0]) + std::fabs(v[1]); };
    std::array<long double, 2> v = nrm(v1) >= nrm(v2) ? v1 : v2;
    const long double n = nrm(v);
    if (n == 0) throw_inconsistency("no eigenvector for the split image");
    const long double tol = 1e-12L * n;
    const long double lead = std::fabs(v[0]) > tol ? v[0] : v[1];
    if (lead < 0) v = {-v[0], -v[1]};
    return v;
  };
  return {left(t), left(-t)};
}

Orientation orientation(const PureQuaternion& mu, unsigned place) {
  const BaseField& F = *mu.algebra->base;
  if (mu.x == FieldElement{} && mu.y == FieldElement{} && mu.z == FieldElement{})
    throw_domain("orientation of mu = 0");
  Orientation o;
  o.delta_sign = F.sign_at(mu.delta, place);
  if (o.delta_sign > 0) {
    const SplitData s = split_data(mu, place);
    o.sign = sign_with_root(F, place, s.y, s.z, s.a);  // sign of M12
    return o;
  }
  o.intrinsic = false;
  const auto nu = conjugator(mu, place);
  const long double det = nu[0][0] * nu[1][1] - nu[0][1] * nu[1][0];
  const long double scale = (std::fabs(nu[0][0]) + std::fabs(nu[0][1])) * (std::fabs(nu[1][0]) + std::fabs(nu[1][1]));
  if (!(std::fabs(det) > 1e-9L * scale)) throw_inconsistency("conjugator determinant too close to zero");
  o.sign = det > 0 ? 1 : -1;
  return o;
}

int local_index(int delta_sign, int det_nu_sign, int im_tau_sign) {
  if (delta_sign < 0) return 1;
  return det_nu_sign * im_tau_sign > 0 ? 0 : 2;
}

SignatureVector signature(const PureQuaternion& mu) {
  SignatureVector out;
  for (unsigned s = 0; s < mu.algebra->base->degree(); ++s) out.push_back(orientation(mu, s).sign);
  return out;
}

int global_index(const PureQuaternion& mu, const SignatureVector& tau_signs) {
  const QuaternionAlgebra& B = *mu.algebra;
  if (!B.totally_indefinite) throw_domain("index needs a totally indefinite algebra");
  if (tau_signs.size() != B.base->degree()) throw_domain("one Im(tau) sign per real place");
  int i = 0;
  for (unsigned s = 0; s < B.base->degree(); ++s) {
    const Orientation o = orientation(mu, s);
    i += local_index(o.delta_sign, o.sign, tau_signs[s]);
  }
  return i;
}

Int degree_of_phi(const BaseField& F, const Int& norm_ni_theta, const Int& norm_disc, const FieldElement& delta) {
  if (delta == FieldElement{}) throw_domain("delta must be nonzero");
  const Rat n = Rat(norm_ni_theta * norm_ni_theta) * Rat(norm_disc) * F.norm(delta);
  const Rat d = n * n;
  if (d.get_den() != 1) throw_inconsistency("deg(phi) is not an integer", d.get_str());
  return d.get_num();
}

}  // namespace qmpol
