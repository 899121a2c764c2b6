#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "qmpol/base_field.hpp"
#include "qmpol/bqf.hpp"
#include "qmpol/lattice.hpp"

namespace qmpol {

class MaximalOrder;
struct UnitGroup;

/// Where class numbers come from. The default computes directly; the CLI
/// plugs in its persistent cache.
class ClassNumberSource {
 public:
  virtual ~ClassNumberSource() = default;
  virtual Int h_imag(const Int& disc) const { return class_number_imag(disc); }
  virtual RealClassNumber h_real(const Int& disc) const { return class_number_real(disc); }
  virtual PellUnit pell(const Int& disc) const { return pell_unit(disc); }
  /// Class number of the maximal order of F(sqrt(d0 + d1 sqrt m)).
  virtual Int h_quartic(const Int& m, const Rat& d0, const Rat& d1, const std::function<Int()>& compute) const {
    (void)m, (void)d0, (void)d1;
    return compute();
  }
};

const ClassNumberSource& direct_source();

/// Largest |D_L| accepted by the number-field engine.
inline const Int kDeskDiscriminantBound{100'000'000};

enum class Backend {
  automatic,  // binary forms over Q, number-field engine otherwise
  engine,     // number-field engine everywhere (used to cross-check)
};

/// One prime q | 2 of F with its exponent a_q in the conductor.
struct ConductorPart {
  Int norm;          // N(q)
  unsigned e = 1;    // ramification of q over 2
  unsigned f = 1;    // residue degree
  unsigned exponent = 0;
  std::vector<FieldElement> generators;  // of q
};

struct CMOrderDescriptor;

/// L = F(sqrt(-delta)) together with its maximal order data and the orders
/// containing R_F[sqrt(-delta)]. Despite the name, L need not be CM: the
/// real and mixed branches are handled by the same code.
struct CMExtension {
  std::shared_ptr<const BaseField> base;
  FieldElement delta;  // L = F(sqrt(-delta))
  Int disc_L;          // signed absolute discriminant
  Int abs_disc_L;
  Int rel_disc_norm;   // N(d_{L/F})
  Int conductor_norm;  // N(f)
  std::vector<ConductorPart> conductor;
  Int h_L;
  int real_places = 0;  // r1(L)
  Backend backend = Backend::automatic;
  bool via_forms() const { return base->is_rational() && backend == Backend::automatic; }

  std::vector<CMOrderDescriptor> orders;
  /// Engine data; null for the binary-form path.
  std::shared_ptr<const MaximalOrder> maximal_order;
  std::shared_ptr<const UnitGroup> units;
};

struct CMOrderDescriptor {
  std::vector<unsigned> exponents;  // exponent of each conductor part in f_S
  Int conductor_divisor_norm;       // N(f_S)
  Int discriminant;                 // of S, over Q only (0 otherwise)
  Int h_S;
  Int unit_index;                   // [O_L^* : S^*]
  unsigned e_S = 0;
  unsigned e_S_plus = 0;
  std::optional<bool> ample;        // unknown when the signature space is not full
  Lattice lattice;                  // S on the power basis of L (engine path)
};

/// The extension F(sqrt(-delta)), its conductor, and its order lattice.
/// Domain error when -delta is a square in F; unsupported-configuration
/// errors for the undetermined 2-adic case and above the desk bound.
std::shared_ptr<const CMExtension> conductor(const BaseField& F, const FieldElement& delta,
                                             const ClassNumberSource& source = direct_source(),
                                             Backend backend = Backend::automatic);

/// One descriptor per ideal divisor of the conductor, maximal order first.
std::vector<CMOrderDescriptor> order_lattice(const CMExtension& E);

struct MaximalOrderInfo {
  Int h;
  Int disc;
  std::vector<RatVec> integral_basis;  // on the power basis of L
};
MaximalOrderInfo classgroup_small(const CMExtension& E);

Int order_class_number(const CMOrderDescriptor& S);
std::pair<unsigned, unsigned> unit_norm_exponents(const CMOrderDescriptor& S);

/// a_q from the valuation k of (-delta - 1) at a prime over 2 with e = e_q:
/// [k/2] if k <= e + 1, e if [k/2] >= e, nullopt in the undetermined region.
/// k = nullopt stands for k = infinity.
std::optional<unsigned> conductor_exponent_rule(std::optional<unsigned> k, unsigned e);

/// Drops memoized extensions (tests and long scans).
void clear_extension_memo();

}  // namespace qmpol
