#include "qmpol/scan.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>

#include "qmpol/errors.hpp"

namespace qmpol {

namespace {

double log_int(const Int& v) {
  // log of a big integer via mantissa/exponent.
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

ScanRow scan_one(const BaseField& F, const FieldElement& D, const ClassNumberCache* cache, bool timing) {
  ScanRow row;
  row.D = D;
  row.norm_disc = abs(F.norm(D).get_num()) * F.disc();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const QMContext ctx = make_context(F, D, 1, std::nullopt, {});
    row.pi0 = memo_pi_zero(ctx, cache);
    const double denom = log_int(row.norm_disc) / 2;
    row.ratio = (*row.pi0 > 1 && denom > 0) ? log_int(*row.pi0) / denom : 0.0;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::inconsistency) throw;
    row.skipped = std::string(to_string(e.kind())) + ": " + e.what();
    log_line("warning", "D=" + F.to_string(D) + " skipped: " + row.skipped);
  }
  if (timing) row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

}  // namespace

std::vector<Int> primorial_discriminants(unsigned k_max) {
  std::vector<Int> out;
  Int D = 1, p = 1;
  for (unsigned k = 1; k <= k_max; ++k) {
    for (int i = 0; i < 2; ++i) {
      mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
      D *= p;
    }
    out.push_back(D);
  }
  return out;
}

std::vector<Int> count_key(const QMContext& ctx) {
  const FieldElement& D = ctx.disc_generator;
  return {ctx.base->m(), D.x.get_num(), D.x.get_den(), D.y.get_num(), D.y.get_den()};
}

Int memo_pi_zero(const QMContext& ctx, const ClassNumberCache* cache) {
  if (!cache) return pi_zero(ctx);
  return cache->get_or_compute(CacheKind::pi0, count_key(ctx), [&] { return std::vector<Int>{pi_zero(ctx)}; })[0];
}

Int memo_pi_total(const QMContext& ctx, const ClassNumberCache* cache) {
  if (!cache) return pi_total(ctx);
  return cache->get_or_compute(CacheKind::pi_total, count_key(ctx), [&] { return std::vector<Int>{pi_total(ctx)}; })[0];
}

std::vector<ScanRow> scan(const BaseField& F, const std::vector<FieldElement>& Ds, const ClassNumberCache* cache,
                          const ScanOptions& options) {
  std::vector<ScanRow> rows(Ds.size());
  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < Ds.size(); ++i) rows[i] = scan_one(F, Ds[i], cache, options.timing);
    return rows;
  }
  // Strided workers; rows keep input order.
  std::vector<std::future<void>> jobs;
  for (unsigned t = 0; t < threads; ++t)
    jobs.push_back(std::async(std::launch::async, [&, t] {
      for (std::size_t i = t; i < Ds.size(); i += threads) rows[i] = scan_one(F, Ds[i], cache, options.timing);
    }));
  for (auto& j : jobs) j.get();
  return rows;
}

void write_csv(std::ostream& os, const BaseField& F, const std::vector<ScanRow>& rows, bool timing) {
  os << "D,pi0,norm_disc,ratio,seconds\n";
  for (const auto& r : rows) {
    os << F.to_string(r.D) << ',';
    if (r.pi0) os << r.pi0->get_str() << ',' << r.norm_disc.get_str() << ',' << fixed6(r.ratio);
    else os << "skipped," << r.norm_disc.get_str() << ',';
    os << ',';
    if (timing) os << fixed6(r.seconds);
    os << '\n';
  }
}

void write_plot_data(std::ostream& os, const BaseField& F, const std::vector<ScanRow>& rows) {
  os << "# D log_sqrt_norm_disc log_pi0\n";
  for (const auto& r : rows) {
    if (!r.pi0) continue;
    os << F.to_string(r.D) << ' ' << fixed6(log_int(r.norm_disc) / 2) << ' ' << fixed6(log_int(*r.pi0)) << '\n';
  }
}

}  // namespace qmpol
