#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qmpol/cache.hpp"
#include "qmpol/polar_counts.hpp"

namespace qmpol {

struct ScanRow {
  FieldElement D;
  std::optional<Int> pi0;  // empty when skipped
  Int norm_disc;           // |N(D)| * D_F
  double ratio = 0;        // log pi0 / log sqrt(norm_disc)
  double seconds = 0;
  std::string skipped;     // reason, empty otherwise
};

struct ScanOptions {
  unsigned threads = 1;
  bool timing = false;  // fill the seconds column
};

/// D_k = product of the first 2k primes, k = 1..k_max.
std::vector<Int> primorial_discriminants(unsigned k_max);

/// Cache key of pi0 / pi_total for a context: (m, D as two rationals).
std::vector<Int> count_key(const QMContext& ctx);
/// pi0 through the cache when one is given.
Int memo_pi_zero(const QMContext& ctx, const ClassNumberCache* cache);
Int memo_pi_total(const QMContext& ctx, const ClassNumberCache* cache);

/// One row per D, in input order. Unsupported configurations (desk scale,
/// undecidable ampleness) become skipped rows; inconsistencies propagate.
std::vector<ScanRow> scan(const BaseField& F, const std::vector<FieldElement>& Ds, const ClassNumberCache* cache,
                          const ScanOptions& options = {});

/// Header D,pi0,norm_disc,ratio,seconds; ratio with 6 decimals; seconds empty
/// unless timing was requested.
void write_csv(std::ostream& os, const BaseField& F, const std::vector<ScanRow>& rows, bool timing);
/// Two-column gnuplot data: log sqrt(norm_disc), log pi0.
void write_plot_data(std::ostream& os, const BaseField& F, const std::vector<ScanRow>& rows);

}  // namespace qmpol
