#include "qmpol/polar_counts.hpp"

#include "qmpol/errors.hpp"

namespace qmpol {

namespace {

Int exact_quotient(const Int& num, const Int& den, const std::string& what) {
  if (den == 0 || num % den != 0)
    throw_inconsistency(what + " is not integral", num.get_str() + "/" + den.get_str());
  return num / den;
}

Int pow2(unsigned e) {
  Int r = 1;
  r <<= e;
  return r;
}

std::string describe(const QMContext& ctx) {
  return ctx.base->name() + ", D=" + ctx.base->to_string(ctx.disc_generator);
}

// D_O = (D * level) must be squarefree and D must ramify at an even number of
// primes with D a non-unit.
void check_hereditary(const QMContext& ctx) {
  const BaseField& F = *ctx.base;
  if (ctx.level < 1) throw_domain("level must be positive", ctx.level.get_str());
  const FieldElement DN = F.mul(ctx.disc_generator, {Rat(ctx.level), 0});
  if (!F.is_integral(ctx.disc_generator) || ctx.disc_generator == FieldElement{})
    throw_domain("discriminant must be a nonzero integral element", describe(ctx));
  const auto fd = factor_principal(F, ctx.disc_generator);
  if (fd.empty()) throw_domain("discriminant is a unit: the algebra is not a division algebra", describe(ctx));
  if (fd.size() % 2 != 0)
    throw_domain("odd number of ramified primes: not a totally indefinite discriminant", describe(ctx));
  for (const auto& f : factor_principal(F, DN))
    if (f.exponent != 1) throw_domain("level * D is not squarefree", describe(ctx));
}

void check_maximal(const QMContext& ctx) {
  if (ctx.base->restricted_support()) throw_unsupported("principality needs h(F) = 1", ctx.base->name());
  if (ctx.level != 1) throw_domain("counting formulas need a maximal order (level 1)", describe(ctx));
  if (!ctx.coprimality_ok) throw_domain("counting formulas need (theta, D_O) = 1", describe(ctx));
}

bool is_principal(const FieldIdeal& I) { return find_generator(I).status == SearchStatus::found; }

// A totally positive generator of (D): D itself or D times a unit.
std::optional<FieldElement> tp_disc(const QMContext& ctx) {
  const BaseField& F = *ctx.base;
  const auto g = totally_positive_generator(principal_ideal(F, ctx.disc_generator));
  if (g.status == SearchStatus::found) return g.element;
  return std::nullopt;
}

CountBreakdown branch_sum(const QMContext& ctx, const std::vector<FieldElement>& units, const FieldElement& D,
                          bool positive_part) {
  const BaseField& F = *ctx.base;
  CountBreakdown out;
  out.numerator = 0;
  for (const auto& u : units) {
    const FieldElement delta = F.mul(u, D);
    const auto E = conductor(F, delta, ctx.classes());
    for (const auto& S : E->orders) {
      if (positive_part && !S.ample.has_value())
        throw_unsupported("ampleness of the order is unknown", describe(ctx));
      if (positive_part && !*S.ample) continue;
      OrderContribution c;
      c.unit = u;
      c.delta = delta;
      c.conductor_norm = S.conductor_divisor_norm;
      c.h_S = S.h_S;
      c.e_S = S.e_S;
      c.e_S_plus = S.e_S_plus;
      c.weight = pow2(positive_part ? S.e_S_plus : S.e_S) * S.h_S;
      out.numerator += c.weight;
      out.orders.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace

QMContext make_context(const BaseField& F, const FieldElement& D, const Int& level,
                       const std::optional<FieldElement>& ideal_norm, const SignatureVector& tau_signs) {
  QMContext ctx;
  ctx.base = std::make_shared<const BaseField>(F);
  ctx.disc_generator = D;
  ctx.level = level;
  const FieldIdeal theta = different_ideal(F);
  const FieldElement ni = ideal_norm.value_or(FieldElement{1, 0});
  if (!F.is_integral(ni) || ni == FieldElement{}) throw_domain("n(I) must be a nonzero integral element", F.to_string(ni));
  ctx.ideal_norm_times_different = principal_ideal(F, F.mul(ni, *theta.generator));
  ctx.tau_signs = tau_signs.empty() ? SignatureVector(F.degree(), 1) : tau_signs;
  if (ctx.tau_signs.size() != F.degree()) throw_domain("one Im(tau) sign per real place");
  for (int s : ctx.tau_signs)
    if (s != 1 && s != -1) throw_domain("Im(tau) signs must be +-1");
  if (!F.is_integral(D) || D == FieldElement{}) throw_domain("discriminant must be a nonzero integral element", F.to_string(D));
  ctx.coprimality_ok = coprime(F, *theta.generator, F.mul(D, {Rat(level), 0}));
  return ctx;
}

bool principal_existence(const QMContext& ctx) {
  const BaseField& F = *ctx.base;
  if (F.restricted_support()) throw_unsupported("principality needs h(F) = 1", F.name());
  check_hereditary(ctx);
  if (F.is_rational()) return true;
  const FieldIdeal DO = principal_ideal(F, F.mul(ctx.disc_generator, {Rat(ctx.level), 0}));
  if (ctx.coprimality_ok) return is_principal(DO) && is_principal(ctx.ideal_norm_times_different);
  // Non-coprime: some a | theta with D_O a^2 and n(I) theta a^{-1} principal.
  // With h(F) = 1 the search stops at a = (1).
  return is_principal(DO) && is_principal(ctx.ideal_norm_times_different);
}

bool polarizable(const QMContext& ctx) {
  if (!principal_existence(ctx)) return false;
  if (!tp_disc(ctx)) return false;
  const BaseField& F = *ctx.base;
  if (!F.full_signature())
    throw_unsupported("Omega undecidable: h+(F) != h(F) and Sigma(R_F^*) is not {+-1}^n", describe(ctx));
  return true;
}

CountBreakdown pi_zero_detail(const QMContext& ctx) {
  check_maximal(ctx);
  if (!polarizable(ctx)) throw_domain("no principal polarization exists", describe(ctx));
  const BaseField& F = *ctx.base;
  CountBreakdown out = branch_sum(ctx, tp_units_mod_squares(F), *tp_disc(ctx), true);
  out.denominator = 2 * F.h_plus();
  out.value = exact_quotient(out.numerator, out.denominator, "pi_0");
  if (out.value <= 0) throw_inconsistency("pi_0 must be positive", describe(ctx));
  return out;
}

CountBreakdown pi_total_detail(const QMContext& ctx) {
  check_maximal(ctx);
  if (!principal_existence(ctx)) throw_domain("no principal line bundle exists", describe(ctx));
  const BaseField& F = *ctx.base;
  const FieldElement D = tp_disc(ctx).value_or(ctx.disc_generator);
  CountBreakdown out = branch_sum(ctx, units_mod_squares(F), D, false);
  out.denominator = 2 * F.h();
  out.value = exact_quotient(out.numerator, out.denominator, "pi");
  if (out.value <= 0) throw_inconsistency("pi must be positive", describe(ctx));
  return out;
}

Int pi_zero(const QMContext& ctx) { return pi_zero_detail(ctx).value; }
Int pi_total(const QMContext& ctx) { return pi_total_detail(ctx).value; }

namespace {

void check_surface_disc(const Int& D) {
  if (D <= 1) throw_domain("D must be > 1", D.get_str());
  if (!is_squarefree(D)) throw_domain("D must be squarefree", D.get_str());
  if (factorize(D).factors.size() % 2 != 0)
    throw_domain("odd number of prime factors: not a totally indefinite discriminant", D.get_str());
}

}  // namespace

Int pi_one_surface(const Int& D, const ClassNumberSource& source) {
  check_surface_disc(D);
  const BaseField Q = BaseField::rational();
  const auto E = conductor(Q, {Rat(-D), 0}, source);
  // eps_Delta h(Delta) = 2^{e_S} h(S) / 2 over the orders of disc 4D (and D).
  Int sum = 0;
  for (const auto& S : E->orders) sum += pow2(S.e_S) * S.h_S;
  return exact_quotient(sum, 2, "pi_1");
}

Int pi_zero_surface_closed_form(const Int& D, const ClassNumberSource& source) {
  check_surface_disc(D);
  Int sum = source.h_imag(-4 * D);
  if (D % 4 == 3) sum += source.h_imag(-D);
  return exact_quotient(sum, 2, "pi_0");
}

PolarizationProfile pi_profile(const QMContext& ctx) {
  const BaseField& F = *ctx.base;
  PolarizationProfile P;
  P.principal_exists = principal_existence(ctx);
  P.polarizable = polarizable(ctx);
  if (!P.principal_exists) {
    P.pi_total = 0;
    P.pi_zero = 0;
    P.pi_by_index.assign(2 * F.degree() + 1, 0);
    return P;
  }
  const CountBreakdown total = pi_total_detail(ctx);
  P.pi_total = total.value;
  P.pi_zero = P.polarizable ? pi_zero(ctx) : Int(0);
  const unsigned n = F.degree();
  if (n > 2) {
    P.complete = false;
    return P;
  }
  // Stratify the branches of the pi sum by the signs of delta = u D.
  std::vector<Int> idx(2 * n + 1, 0);
  const Int den = total.denominator;
  Int tp_branch = 0, negative = 0, mixed = 0;
  for (const auto& c : total.orders) {
    const auto s = F.signs(c.delta);
    int pos = 0;
    for (int v : s) pos += v > 0;
    if (pos == static_cast<int>(n)) tp_branch += c.weight;
    else if (pos == 0) negative += c.weight;
    else mixed += c.weight;
  }
  const Int tp_count = exact_quotient(tp_branch, den, "totally positive branch");
  const Int neg_count = exact_quotient(negative, den, "totally negative branch");
  const Int mixed_count = exact_quotient(mixed, den, "mixed branch");
  idx[0] = idx[2 * n] = P.pi_zero;
  const Int rest = tp_count - 2 * P.pi_zero;
  if (rest < 0) throw_inconsistency("pi_0 exceeds its branch", describe(ctx));
  if (n == 1 && rest != 0) throw_inconsistency("surface branch with a middle remainder", describe(ctx));
  idx[n] += rest + neg_count;
  if (mixed_count != 0) {
    if (n != 2) throw_inconsistency("mixed branch over Q", describe(ctx));
    const Int half = exact_quotient(mixed_count, 2, "mixed branch split");
    idx[1] += half;
    idx[3] += half;
  }
  Int sum = 0;
  for (const auto& v : idx) sum += v;
  if (sum != P.pi_total) throw_inconsistency("profile does not sum to pi", describe(ctx));
  P.pi_by_index = std::move(idx);
  return P;
}

Int pollack_count(const CMOrderDescriptor& S, const BaseField& F) {
  return exact_quotient(pow2(S.e_S) * S.h_S, 2 * F.h(), "Pollack count");
}

Int eichler_count(const CMOrderDescriptor& S, const BaseField& F) {
  return exact_quotient(S.h_S, F.h(), "Eichler count");
}

}  // namespace qmpol
