#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qmpol/number_field.hpp"

namespace qmpol {

/// Unit group of a maximal order: torsion generator plus a basis of the free part.
struct UnitGroup {
  Elem torsion_generator;
  unsigned torsion_order = 2;
  std::vector<Elem> fundamental;
  long double regulator = 1;
  /// Largest prime at which the basis was proven saturated (0 when rank 0).
  unsigned saturated_below = 0;

  std::size_t rank() const { return fundamental.size(); }
  /// Torsion generator first, then the fundamental units.
  std::vector<Elem> generators() const;
};

/// Lower bound for the regulator of any number field (Friedman: 0.2052...).
inline constexpr long double kRegulatorLowerBound = 0.2L;

/// Unit group via short-element search and p-saturation at every p up to
/// regulator / kRegulatorLowerBound.
UnitGroup compute_units(const MaximalOrder& O);

/// Calls `visit` for nonzero elements of `lattice` with T2 <= bound, one of each +-pair.
void enumerate_short(const NumberField& K, const Lattice& lattice, long double bound,
                     const std::function<bool(const Elem&)>& visit);

/// LLL-reduced basis of a lattice for the T2 form.
std::vector<Elem> reduced_basis(const NumberField& K, const Lattice& lattice);

/// A generator of the integral ideal I, or nullopt when I is not principal.
/// Searches the T2 ball that contains a generator from every unit orbit.
std::optional<Elem> principal_generator(const MaximalOrder& O, const UnitGroup& units, const Lattice& ideal);

/// Integral ideal in the class of I with small norm.
Lattice reduce_ideal(const MaximalOrder& O, const Lattice& ideal);

long double minkowski_bound(const NumberField& K);

struct ClassGroupResult {
  Int h;
  std::vector<Lattice> representatives;  // one integral ideal per class
};

/// Class number by closing the classes of the prime ideals below the
/// Minkowski bound under multiplication; equivalence by principal_generator.
ClassGroupResult class_group(const MaximalOrder& O, const UnitGroup& units);

}  // namespace qmpol
