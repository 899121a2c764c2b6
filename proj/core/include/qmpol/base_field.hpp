#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qmpol/arith.hpp"
#include "qmpol/bqf.hpp"

namespace qmpol {

class MaximalOrder;

/// x + y*sqrt(m); y = 0 over Q. Coordinates are rationals so that the
/// half-integral elements of Z[(1+sqrt m)/2] are represented exactly.
struct FieldElement {
  Rat x = 0;
  Rat y = 0;
  bool operator==(const FieldElement&) const = default;
};

class BaseField {
 public:
  enum class Kind { rational, real_quadratic };

  static BaseField rational();
  /// m squarefree > 1. Fields with h > 1 are built but flagged restricted.
  static BaseField real_quadratic(const Int& m);

  Kind kind() const { return kind_; }
  bool is_rational() const { return kind_ == Kind::rational; }
  const Int& m() const { return m_; }  // 1 for Q
  const Int& disc() const { return disc_; }
  unsigned degree() const { return degree_; }
  const Int& h() const { return h_; }
  const Int& h_plus() const { return h_plus_; }
  const std::optional<PellUnit>& fundamental_unit() const { return unit_; }
  unsigned sigma_space_dim() const { return sigma_dim_; }
  /// Principality-dependent operations need h(F) = 1.
  bool restricted_support() const { return h_ != 1; }
  /// Sigma(R_F^*) = {+-1}^n.
  bool full_signature() const { return sigma_dim_ == degree_; }
  std::string name() const;

  FieldElement epsilon() const;  // fundamental unit > 1, or 1 over Q

  FieldElement add(const FieldElement& a, const FieldElement& b) const { return {a.x + b.x, a.y + b.y}; }
  FieldElement sub(const FieldElement& a, const FieldElement& b) const { return {a.x - b.x, a.y - b.y}; }
  FieldElement neg(const FieldElement& a) const { return {-a.x, -a.y}; }
  FieldElement mul(const FieldElement& a, const FieldElement& b) const;
  FieldElement inv(const FieldElement& a) const;
  FieldElement pow(const FieldElement& a, long e) const;
  FieldElement conj(const FieldElement& a) const { return {a.x, -a.y}; }
  /// N_{F/Q} and Tr_{F/Q} (degree 1 over Q).
  Rat norm(const FieldElement& a) const { return is_rational() ? a.x : Rat(a.x * a.x - m_ * a.y * a.y); }
  Rat trace(const FieldElement& a) const { return is_rational() ? a.x : Rat(2 * a.x); }
  bool is_integral(const FieldElement& a) const;
  bool is_unit(const FieldElement& a) const;

  /// Exact sign at real place i (i = 0: sqrt m > 0; i = 1: sqrt m < 0).
  int sign_at(const FieldElement& a, unsigned place) const;
  std::vector<int> signs(const FieldElement& a) const;
  bool is_totally_positive(const FieldElement& a) const;
  long double embed(const FieldElement& a, unsigned place) const;

  /// Class of a unit in R_F^*/R_F^{*2} as a vector over F_2: (sign, parity of
  /// the exponent of epsilon). Length = degree.
  std::vector<int> unit_class(const FieldElement& u) const;
  /// Subspace (basis) of totally positive unit classes.
  std::vector<std::vector<int>> totally_positive_unit_classes() const;

  std::string to_string(const FieldElement& a) const;
  /// Parses "7", "-3/2", "3+sqrt2", "1-2*sqrt(2)", "(1+sqrt5)/2".
  FieldElement parse(const std::string& text) const;

  /// Ring of integers as an engine order (real quadratic only).
  const MaximalOrder& ring() const;

 private:
  Kind kind_ = Kind::rational;
  Int m_ = 1;
  Int disc_ = 1;
  unsigned degree_ = 1;
  Int h_ = 1;
  Int h_plus_ = 1;
  std::optional<PellUnit> unit_;
  unsigned sigma_dim_ = 1;
  std::shared_ptr<const MaximalOrder> ring_;
};

/// Parses "Q", "Q(sqrt2)", "Q(sqrt(5))", "Q(sqrt 3)".
BaseField make_field(const std::string& spec);

std::vector<FieldElement> tp_units_mod_squares(const BaseField& F);
std::vector<FieldElement> units_mod_squares(const BaseField& F);

/// An ideal of R_F given by generators. `norm` is N(I); `generator` is set when
/// a single generator is known.
struct FieldIdeal {
  std::shared_ptr<const BaseField> field;
  std::vector<FieldElement> generators;
  Int norm;
  std::optional<FieldElement> generator;
  std::optional<FieldElement> totally_positive_generator;
};

FieldIdeal principal_ideal(const BaseField& F, const FieldElement& generator);
FieldIdeal make_ideal(const BaseField& F, const std::vector<FieldElement>& generators);
/// The different of F/Q: (1) over Q, (sqrt D_F) otherwise.
FieldIdeal different_ideal(const BaseField& F);
bool contains(const FieldIdeal& I, const FieldElement& a);

enum class SearchStatus { found, none, exhausted };
std::string to_string(SearchStatus s);

struct GeneratorSearch {
  SearchStatus status = SearchStatus::exhausted;
  std::optional<FieldElement> element;
  Int window;  // |y| bound actually searched (0 when no search was needed)
};

/// Documented constant C in the window |y| <= ceil(sqrt(norm/m)) + C.
inline constexpr long kGeneratorWindowSlack = 16;
/// Hard cap on the number of y values tried.
inline constexpr long kGeneratorWindowCap = 2'000'000;

/// A generator of I: the known one, or one found by a norm search over a
/// window widened to the bound that provably contains a generator up to units.
/// Unsupported error when h(F) > 1.
GeneratorSearch find_generator(const FieldIdeal& I);
/// A totally positive generator: a generator times one of +-1, +-eps.
/// `none` when no unit adjustment is totally positive.
GeneratorSearch totally_positive_generator(const FieldIdeal& I);

/// Prime ideal factorisation of (a): (norm of the prime, exponent) pairs,
/// one entry per prime ideal.
struct IdealFactor {
  Int prime;      // rational prime below
  Int norm;       // norm of the prime ideal
  unsigned exponent = 0;
};
std::vector<IdealFactor> factor_principal(const BaseField& F, const FieldElement& a);
/// (a) + (b) = R_F.
bool coprime(const BaseField& F, const FieldElement& a, const FieldElement& b);

}  // namespace qmpol
