#pragma once

#include <optional>
#include <vector>

#include "qmpol/base_field.hpp"
#include "qmpol/cm_orders.hpp"
#include "qmpol/quat_alg.hpp"

namespace qmpol {

/// Arithmetic data of an abelian variety with QM by a hereditary order of
/// discriminant D * level in a totally indefinite algebra over F.
struct QMContext {
  std::shared_ptr<const BaseField> base;
  FieldElement disc_generator;                  // D
  Int level = 1;                                // N; 1 for a maximal order
  FieldIdeal ideal_norm_times_different;        // n(I) * theta_{F/Q}
  SignatureVector tau_signs;                    // sgn Im(tau_sigma)
  bool coprimality_ok = true;                   // (theta, D_O) = 1
  const ClassNumberSource* source = &direct_source();

  unsigned dimension() const { return 2 * base->degree(); }
  const ClassNumberSource& classes() const { return *source; }
};

/// n(I) defaults to 1 and every Im(tau) sign to +1.
QMContext make_context(const BaseField& F, const FieldElement& D, const Int& level = 1,
                       const std::optional<FieldElement>& ideal_norm = std::nullopt,
                       const SignatureVector& tau_signs = {});

struct PolarizationProfile {
  Int pi_total;
  std::vector<Int> pi_by_index;  // pi_0 .. pi_{2n}; empty when not determined
  bool principal_exists = false;
  bool polarizable = false;
  Int pi_zero;
  bool complete = true;
};

bool principal_existence(const QMContext& ctx);
/// Unsupported-configuration error when Omega cannot be decided (h_+ != h
/// without a full signature space).
bool polarizable(const QMContext& ctx);

/// One order S containing R_F[sqrt(-uD)] with its weight in a count.
struct OrderContribution {
  FieldElement unit;
  FieldElement delta;  // u D
  Int conductor_norm;
  Int h_S;
  unsigned e_S = 0;
  unsigned e_S_plus = 0;
  Int weight;  // 2^{e} h(S)
};

struct CountBreakdown {
  Int value;
  Int numerator;    // sum of the weights
  Int denominator;  // 2 h_+(F) or 2 h(F)
  std::vector<OrderContribution> orders;
};

CountBreakdown pi_zero_detail(const QMContext& ctx);
CountBreakdown pi_total_detail(const QMContext& ctx);
Int pi_zero(const QMContext& ctx);
Int pi_total(const QMContext& ctx);

/// pi_1 of a QM surface: sum of eps_Delta h(Delta) over the real orders
/// containing Z[sqrt D]. Domain error unless D is squarefree with an even
/// number of prime factors.
Int pi_one_surface(const Int& D, const ClassNumberSource& source = direct_source());
/// (h(-4D) + h(-D))/2 for D = 3 mod 4, h(-4D)/2 otherwise.
Int pi_zero_surface_closed_form(const Int& D, const ClassNumberSource& source = direct_source());

/// Index-stratified profile for n <= 2: the totally positive branch gives
/// pi_0 = pi_{2n} and its remainder sits at index n, totally negative
/// branches sit at index n, mixed branches split evenly between n -+ 1.
PolarizationProfile pi_profile(const QMContext& ctx);

/// 2^{e_S - 1} h(S) / h(F).
Int pollack_count(const CMOrderDescriptor& S, const BaseField& F);
/// h(S) / h(F).
Int eichler_count(const CMOrderDescriptor& S, const BaseField& F);

}  // namespace qmpol
