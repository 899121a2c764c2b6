#include "qmpol/base_field.hpp"

#include <cctype>
#include <cmath>

#include "qmpol/errors.hpp"
#include "qmpol/number_field.hpp"

namespace qmpol {

namespace {

Elem to_elem(const BaseField& F, const FieldElement& a) {
  (void)F;
  return Elem{a.x, a.y};
}

Int ceil_sqrt_rat(const Rat& q) {
  Int f = isqrt(Int(q.get_num() / q.get_den()));
  while (Rat(f * f) < q) ++f;
  return f;
}

Int rat_to_int(const Rat& q, const char* what) {
  if (q.get_den() != 1) throw_domain(std::string(what) + " must be an integer", q.get_str());
  return q.get_num();
}

}  // namespace

BaseField BaseField::rational() { return BaseField{}; }

BaseField BaseField::real_quadratic(const Int& m) {
  if (m <= 1 || !is_squarefree(m)) throw_domain("real quadratic field needs squarefree m > 1", m.get_str());
  BaseField F;
  F.kind_ = Kind::real_quadratic;
  F.m_ = m;
  F.disc_ = (m % 4 == 1) ? m : Int(4 * m);
  F.degree_ = 2;
  const auto cn = class_number_real(F.disc_);
  F.h_ = cn.h_wide;
  F.h_plus_ = cn.h_narrow;
  F.unit_ = pell_unit(F.disc_);
  F.sigma_dim_ = F.unit_->norm_sign == -1 ? 2 : 1;
  if (F.h_plus_ != F.h_ * (Int(1) << (2 - F.sigma_dim_)))
    throw_inconsistency("h_plus != h * 2^(n - dim Sigma)", m.get_str());
  F.ring_ = std::make_shared<const MaximalOrder>(NumberField::quadratic(m));
  return F;
}

std::string BaseField::name() const {
  return is_rational() ? "Q" : "Q(sqrt" + m_.get_str() + ")";
}

FieldElement BaseField::epsilon() const {
  if (is_rational()) return {1, 0};
  const auto& u = *unit_;
  if (disc_ == m_) return {ratio(u.x, 2), ratio(u.y, 2)};
  return {ratio(u.x, 2), Rat(u.y)};
}

FieldElement BaseField::mul(const FieldElement& a, const FieldElement& b) const {
  return {a.x * b.x + m_ * a.y * b.y, a.x * b.y + a.y * b.x};
}

FieldElement BaseField::inv(const FieldElement& a) const {
  const Rat n = a.x * a.x - m_ * a.y * a.y;
  if (n == 0) throw_domain("inverse of zero", to_string(a));
  return {a.x / n, -a.y / n};
}

FieldElement BaseField::pow(const FieldElement& a, long e) const {
  FieldElement base = e < 0 ? inv(a) : a;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-(e + 1)) + 1 : static_cast<unsigned long>(e);
  FieldElement out{1, 0};
  while (k) {
    if (k & 1) out = mul(out, base);
    base = mul(base, base);
    k >>= 1;
  }
  return out;
}

bool BaseField::is_integral(const FieldElement& a) const {
  if (is_rational()) return a.y == 0 && a.x.get_den() == 1;
  return trace(a).get_den() == 1 && norm(a).get_den() == 1;
}

bool BaseField::is_unit(const FieldElement& a) const {
  return is_integral(a) && abs(norm(a)) == 1;
}

int BaseField::sign_at(const FieldElement& a, unsigned place) const {
  if (place >= degree_) throw_domain("no such real place", std::to_string(place));
  if (is_rational()) return sgn(a.x);
  return sign_of_quadratic(a.x, place == 0 ? a.y : Rat(-a.y), m_);
}

std::vector<int> BaseField::signs(const FieldElement& a) const {
  std::vector<int> out;
  for (unsigned i = 0; i < degree_; ++i) out.push_back(sign_at(a, i));
  return out;
}

bool BaseField::is_totally_positive(const FieldElement& a) const {
  for (int s : signs(a))
    if (s <= 0) return false;
  return true;
}

long double BaseField::embed(const FieldElement& a, unsigned place) const {
  const long double r = std::sqrt(static_cast<long double>(m_.get_d()));
  return static_cast<long double>(a.x.get_d()) + (place == 0 ? r : -r) * static_cast<long double>(a.y.get_d());
}

std::vector<int> BaseField::unit_class(const FieldElement& u) const {
  if (!is_unit(u)) throw_domain("not a unit", to_string(u));
  const int s = sign_at(u, 0);
  if (is_rational()) return {s < 0 ? 1 : 0};
  const FieldElement eps = epsilon();
  const long double k = std::log(std::fabs(embed(u, 0))) / std::log(embed(eps, 0));
  const long e = std::lround(k);
  const FieldElement expect = pow(eps, e);
  const FieldElement signed_expect = s < 0 ? neg(expect) : expect;
  if (!(signed_expect == u)) throw_inconsistency("unit is not +-eps^k", to_string(u));
  return {s < 0 ? 1 : 0, static_cast<int>(((e % 2) + 2) % 2)};
}

std::vector<std::vector<int>> BaseField::totally_positive_unit_classes() const {
  std::vector<std::vector<int>> out;
  for (const auto& u : tp_units_mod_squares(*this))
    if (!(u == FieldElement{1, 0})) out.push_back(unit_class(u));
  return out;
}

std::string BaseField::to_string(const FieldElement& a) const {
  if (a.y == 0) return a.x.get_str();
  std::string out;
  if (a.x != 0) out = a.x.get_str();
  const Rat c = a.y;
  const std::string root = "sqrt(" + m_.get_str() + ")";
  if (c == 1) out += out.empty() ? root : "+" + root;
  else if (c == -1) out += "-" + root;
  else {
    if (c > 0 && !out.empty()) out += "+";
    out += c.get_str() + "*" + root;
  }
  return out;
}

namespace {

class Parser {
 public:
  Parser(const BaseField& F, const std::string& text) : F_(F), s_(text) {}

  FieldElement run() {
    FieldElement v = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected character");
    return v;
  }

 private:
  const BaseField& F_;
  const std::string& s_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw_domain("cannot parse field element: " + why, s_);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  bool eat_word(const std::string& w) {
    skip();
    if (s_.compare(i_, w.size(), w) == 0) {
      i_ += w.size();
      return true;
    }
    return false;
  }
  Int integer() {
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected an integer");
    return Int(s_.substr(start, i_ - start));
  }
  FieldElement expr() {
    FieldElement v = term();
    for (;;) {
      if (eat('+')) v = F_.add(v, term());
      else if (eat('-')) v = F_.sub(v, term());
      else return v;
    }
  }
  FieldElement term() {
    FieldElement v = factor();
    for (;;) {
      if (eat('*')) v = F_.mul(v, factor());
      else if (eat('/')) v = F_.mul(v, F_.inv(factor()));
      else if (peek_root()) v = F_.mul(v, factor());  // "2sqrt2"
      else return v;
    }
  }
  bool peek_root() {
    skip();
    return s_.compare(i_, 4, "sqrt") == 0 || s_.compare(i_, 3, "\xE2\x88\x9A") == 0;
  }
  FieldElement root() {
    const bool paren = eat('(');
    const Int k = integer();
    if (paren && !eat(')')) fail("missing ')'");
    if (F_.is_rational() || k % F_.m() != 0 || !is_square(Int(k / F_.m())))
      fail("square root outside the field");
    return {0, Rat(isqrt(Int(k / F_.m())))};
  }
  FieldElement factor() {
    if (eat('-')) return F_.neg(factor());
    if (eat('+')) return factor();
    if (eat('(')) {
      FieldElement v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (eat_word("sqrt") || eat_word("\xE2\x88\x9A")) return root();
    return {Rat(integer()), 0};
  }
};

}  // namespace

FieldElement BaseField::parse(const std::string& text) const { return Parser(*this, text).run(); }

const MaximalOrder& BaseField::ring() const {
  if (!ring_) throw_domain("ring of integers of Q is not an engine order");
  return *ring_;
}

BaseField make_field(const std::string& spec) {
  std::string s;
  for (char c : spec)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s == "Q" || s == "QQ" || s == "1") return BaseField::rational();
  std::string digits = s;
  if (s.rfind("Q(sqrt", 0) == 0 && s.back() == ')') {
    digits = s.substr(6, s.size() - 7);
    if (!digits.empty() && digits.front() == '(' && digits.back() == ')') digits = digits.substr(1, digits.size() - 2);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw_domain("unrecognised base field", spec);
  const Int m(digits);
  if (m == 1) return BaseField::rational();
  return BaseField::real_quadratic(m);
}

std::vector<FieldElement> tp_units_mod_squares(const BaseField& F) {
  std::vector<FieldElement> out{{1, 0}};
  if (F.is_rational() || F.fundamental_unit()->norm_sign == -1) return out;
  const FieldElement eps = F.epsilon();
  out.push_back(F.is_totally_positive(eps) ? eps : F.neg(eps));
  return out;
}

std::vector<FieldElement> units_mod_squares(const BaseField& F) {
  std::vector<FieldElement> out{{1, 0}, {-1, 0}};
  if (F.is_rational()) return out;
  const FieldElement eps = F.epsilon();
  out.push_back(eps);
  out.push_back(F.neg(eps));
  return out;
}

FieldIdeal make_ideal(const BaseField& F, const std::vector<FieldElement>& generators) {
  if (generators.empty()) throw_domain("ideal needs at least one generator");
  FieldIdeal I;
  I.field = std::make_shared<const BaseField>(F);
  I.generators = generators;
  for (const auto& g : generators)
    if (!F.is_integral(g)) throw_domain("ideal generators must be integral", F.to_string(g));
  if (F.is_rational()) {
    Int g = 0;
    for (const auto& a : generators) g = gcd(g, a.x.get_num());
    if (g == 0) throw_domain("zero ideal");
    I.norm = g;
    I.generator = FieldElement{Rat(g), 0};
    return I;
  }
  std::vector<Elem> gens;
  for (const auto& a : generators) gens.push_back(to_elem(F, a));
  const Rat n = F.ring().norm(F.ring().ideal(gens));
  if (n == 0) throw_domain("zero ideal");
  I.norm = rat_to_int(n, "ideal norm");
  if (generators.size() == 1) I.generator = generators.front();
  return I;
}

FieldIdeal principal_ideal(const BaseField& F, const FieldElement& generator) {
  if (generator == FieldElement{}) throw_domain("zero ideal");
  FieldIdeal I = make_ideal(F, {generator});
  I.generator = generator;
  if (F.is_totally_positive(generator)) I.totally_positive_generator = generator;
  return I;
}

FieldIdeal different_ideal(const BaseField& F) {
  if (F.is_rational()) return principal_ideal(F, {1, 0});
  return principal_ideal(F, {0, Rat(F.disc() == F.m() ? 1 : 2)});
}

bool contains(const FieldIdeal& I, const FieldElement& a) {
  const BaseField& F = *I.field;
  if (!F.is_integral(a)) return false;
  if (F.is_rational()) return a.x.get_num() % I.norm == 0;
  std::vector<Elem> gens;
  for (const auto& g : I.generators) gens.push_back(to_elem(F, g));
  return F.ring().ideal(gens).contains(to_elem(F, a));
}

std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::none: return "none";
    case SearchStatus::exhausted: return "exhausted";
  }
  return "?";
}

GeneratorSearch find_generator(const FieldIdeal& I) {
  const BaseField& F = *I.field;
  if (F.restricted_support())
    throw_unsupported("principality in a base field with class number > 1", F.name());
  GeneratorSearch out;
  out.window = 0;
  if (I.generator) {
    out.status = SearchStatus::found;
    out.element = I.generator;
    return out;
  }
  // Every ideal is principal. Some generator a has |a/a'| in [1/eps, eps], so
  // |y| <= sqrt(N/m) (eps + 1) / 2.
  const Rat nm = ratio(I.norm, F.m());
  const Int base = ceil_sqrt_rat(nm);
  const long double eps = F.embed(F.epsilon(), 0);
  const long double provable = std::ceil(std::sqrt(nm.get_d()) * (eps + 1) / 2);
  Int window = base + kGeneratorWindowSlack;
  bool complete = false;
  if (provable < static_cast<long double>(kGeneratorWindowCap)) {
    const Int p(static_cast<unsigned long>(provable));
    if (p > window) window = p;
    complete = true;
  } else if (window < kGeneratorWindowCap) {
    window = Int(kGeneratorWindowCap);
  }
  out.window = window;
  // Elements (a + b sqrt m)/2 with a = b mod 2 when D_F = m, else a + b sqrt m.
  const bool half = F.disc() == F.m();
  const Int scale = half ? 4 : 1;
  const Int bmax = half ? Int(2 * window) : window;
  for (Int b = 0; b <= bmax; ++b) {
    const Int mb2 = F.m() * b * b;
    for (int s : {1, -1}) {
      const Int a2 = scale * I.norm * s + mb2;
      if (a2 < 0 || !is_square(a2)) continue;
      const Int a = isqrt(a2);
      if (half && (a - b) % 2 != 0) continue;
      for (int sa : {1, -1}) {
        const FieldElement cand = half ? FieldElement{ratio(sa * a, 2), ratio(b, 2)} : FieldElement{Rat(sa * a), Rat(b)};
        if (contains(I, cand)) {
          out.status = SearchStatus::found;
          out.element = cand;
          return out;
        }
        if (a == 0) break;
      }
    }
  }
  if (complete) throw_inconsistency("no generator of an ideal in a class-number-one field", F.name());
  out.status = SearchStatus::exhausted;
  return out;
}

GeneratorSearch totally_positive_generator(const FieldIdeal& I) {
  const BaseField& F = *I.field;
  GeneratorSearch g = find_generator(I);
  if (g.status != SearchStatus::found) return g;
  // Total positivity only depends on the class of the unit modulo squares.
  for (const auto& u : units_mod_squares(F)) {
    const FieldElement c = F.mul(*g.element, u);
    if (F.is_totally_positive(c)) {
      g.element = c;
      return g;
    }
  }
  g.status = SearchStatus::none;
  g.element.reset();
  return g;
}

std::vector<IdealFactor> factor_principal(const BaseField& F, const FieldElement& a) {
  if (a == FieldElement{} || !F.is_integral(a)) throw_domain("factorisation needs a nonzero integral element", F.to_string(a));
  std::vector<IdealFactor> out;
  if (F.is_rational()) {
    for (const auto& pp : factorize(a.x.get_num()).factors) out.push_back({pp.prime, pp.prime, pp.exponent});
    return out;
  }
  const MaximalOrder& O = F.ring();
  const Elem e = to_elem(F, a);
  const Int n = abs(rat_to_int(F.norm(a), "norm"));
  if (n == 1) return out;
  for (const auto& pp : factorize(n).factors)
    for (const auto& P : O.primes_above(pp.prime)) {
      const int v = O.valuation(P, e);
      if (v > 0) out.push_back({pp.prime, P.norm(), static_cast<unsigned>(v)});
    }
  return out;
}

bool coprime(const BaseField& F, const FieldElement& a, const FieldElement& b) {
  if (F.is_rational()) return gcd(rat_to_int(a.x, "element"), rat_to_int(b.x, "element")) == 1;
  const MaximalOrder& O = F.ring();
  const Elem eb = to_elem(F, b);
  if (!F.is_integral(b) || b == FieldElement{}) throw_domain("coprimality needs nonzero integral elements", F.to_string(b));
  const Int na = abs(rat_to_int(F.norm(a), "norm"));
  const Int nb = abs(rat_to_int(F.norm(b), "norm"));
  if (gcd(na, nb) == 1) return true;
  const Elem ea = to_elem(F, a);
  for (const auto& pp : factorize(gcd(na, nb)).factors)
    for (const auto& P : O.primes_above(pp.prime))
      if (O.valuation(P, ea) > 0 && O.valuation(P, eb) > 0) return false;
  return true;
}

}  // namespace qmpol
