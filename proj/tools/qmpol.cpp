// qmpol: principal polarizations of QM abelian varieties from the command line.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmpol/cache.hpp"
#include "qmpol/cm_orders.hpp"
#include "qmpol/errors.hpp"
#include "qmpol/polar_counts.hpp"
#include "qmpol/quat_alg.hpp"
#include "qmpol/scan.hpp"

using namespace qmpol;
using json = nlohmann::ordered_json;

namespace {

json jint(const Int& v) {
  if (fits_i64(v)) return to_i64(v);
  return v.get_str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

SignatureVector parse_signs(const std::string& s, unsigned n) {
  if (s.empty()) return SignatureVector(n, 1);
  SignatureVector out;
  for (const auto& t : split(s, ',')) {
    if (t == "+" || t == "+1" || t == "1") out.push_back(1);
    else if (t == "-" || t == "-1") out.push_back(-1);
    else throw_domain("signs are written +,- or +1,-1", s);
  }
  return out;
}

struct Common {
  std::string field = "Q";
  std::string disc;
  std::string level = "1";
  std::string ideal_norm;
  std::string tau;
};

void add_context_options(CLI::App* cmd, Common& c) {
  cmd->add_option("--field", c.field, "Base field: Q or Q(sqrtm)")->capture_default_str();
  cmd->add_option("--disc", c.disc, "Generator D of the discriminant ideal")->required();
  cmd->add_option("--level", c.level, "Squarefree level N (hereditary orders)")->capture_default_str();
  cmd->add_option("--ideal-norm", c.ideal_norm, "Generator of n(I) (default 1)");
  cmd->add_option("--tau", c.tau, "Signs of Im(tau) per real place, e.g. +,-");
}

QMContext context_from(const Common& c) {
  const BaseField F = make_field(c.field);
  std::optional<FieldElement> ni;
  if (!c.ideal_norm.empty()) ni = F.parse(c.ideal_norm);
  return make_context(F, F.parse(c.disc), Int(c.level), ni, parse_signs(c.tau, F.degree()));
}

json context_json(const QMContext& ctx) {
  return {{"field", ctx.base->name()},
          {"disc", ctx.base->to_string(ctx.disc_generator)},
          {"level", jint(ctx.level)},
          {"dimension", ctx.dimension()}};
}

json breakdown_json(const BaseField& F, const CountBreakdown& b) {
  json rows = json::array();
  for (const auto& c : b.orders)
    rows.push_back({{"unit", F.to_string(c.unit)},
                    {"delta", F.to_string(c.delta)},
                    {"conductor_norm", jint(c.conductor_norm)},
                    {"h_S", jint(c.h_S)},
                    {"e_S", c.e_S},
                    {"e_S_plus", c.e_S_plus},
                    {"weight", jint(c.weight)}});
  return {{"numerator", jint(b.numerator)}, {"denominator", jint(b.denominator)}, {"orders", rows}};
}

void print_breakdown(const BaseField& F, const CountBreakdown& b, bool plus) {
  std::cout << "  u  delta  N(f_S)  h(S)  " << (plus ? "e_S+" : "e_S") << "  weight\n";
  for (const auto& c : b.orders)
    std::cout << "  " << F.to_string(c.unit) << "  " << F.to_string(c.delta) << "  " << c.conductor_norm << "  "
              << c.h_S << "  " << (plus ? c.e_S_plus : c.e_S) << "  " << c.weight << '\n';
  std::cout << "  sum " << b.numerator << " / " << b.denominator << '\n';
}

void emit(bool as_json, const json& j, const std::function<void()>& text) {
  if (as_json) std::cout << j.dump(2) << '\n';
  else text();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Principal polarizations of abelian varieties with quaternionic multiplication"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  std::string cache_path;
  bool no_cache = false;
  app.add_flag("--json", as_json, "Machine-readable output");
  app.add_option("--cache", cache_path, "Cache file (default $QMPOL_CACHE or ~/.cache/qmpol/cache.jsonl)");
  app.add_flag("--no-cache", no_cache, "Do not read or write the cache");

  Common c;
  auto* pi0 = app.add_subcommand("pi0", "Number of principal polarizations up to isomorphism");
  add_context_options(pi0, c);
  auto* pitotal = app.add_subcommand("pitotal", "Number of principal line bundles up to isomorphism");
  add_context_options(pitotal, c);
  auto* profile = app.add_subcommand("profile", "Principal line bundles by index");
  add_context_options(profile, c);
  auto* polar = app.add_subcommand("polarizable", "Existence of principal line bundles and polarizations");
  add_context_options(polar, c);

  auto* classnum = app.add_subcommand("classnum", "Class numbers: quadratic discriminants or orders of F(sqrt(-delta))");
  std::string cn_disc, cn_delta, cn_field = "Q";
  bool cn_engine = false;
  classnum->add_option("--disc", cn_disc, "Quadratic discriminant (either sign)");
  classnum->add_option("--field", cn_field, "Base field for --delta")->capture_default_str();
  classnum->add_option("--delta", cn_delta, "Orders containing R_F[sqrt(-delta)]");
  classnum->add_flag("--engine", cn_engine, "Use the number-field engine over Q too");

  auto* hilbert = app.add_subcommand("hilbert", "Hilbert symbols and ramification of (a,b/Q)");
  std::string ha, hb;
  long hp = -1;
  hilbert->add_option("a", ha)->required();
  hilbert->add_option("b", hb)->required();
  hilbert->add_option("--place", hp, "Prime p, or 0 for the real place (default: full ramification)");

  auto* index = app.add_subcommand("index", "Index of the line bundle attached to a pure quaternion");
  std::string ia, ib, ix = "0", iy = "0", iz = "0", itau, ifield = "Q", iram;
  index->add_option("--field", ifield)->capture_default_str();
  index->add_option("--a", ia)->required();
  index->add_option("--b", ib)->required();
  index->add_option("--x", ix, "coefficient of i");
  index->add_option("--y", iy, "coefficient of j");
  index->add_option("--z", iz, "coefficient of ij");
  index->add_option("--tau", itau, "Signs of Im(tau) per real place");
  index->add_option("--ramified", iram, "Generators of the ramified primes (over real quadratic F)");

  auto* scancmd = app.add_subcommand("scan", "pi0 over a list of discriminants as CSV");
  std::string sfield = "Q", slist, sout, splot;
  unsigned kmax = 0, threads = 1;
  bool timing = false;
  scancmd->add_option("--field", sfield)->capture_default_str();
  scancmd->add_option("--discs", slist, "Comma-separated discriminant generators");
  scancmd->add_option("--primorial", kmax, "D_k = product of the first 2k primes, k = 1..K");
  scancmd->add_option("--threads", threads)->capture_default_str();
  scancmd->add_flag("--timing", timing, "Fill the seconds column");
  scancmd->add_option("--out", sout, "CSV file (default stdout)");
  scancmd->add_option("--plot", splot, "Also write gnuplot data to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::unique_ptr<ClassNumberCache> cache;
  if (no_cache) cache = std::make_unique<ClassNumberCache>(std::nullopt);
  else cache = std::make_unique<ClassNumberCache>(cache_path.empty() ? ClassNumberCache::default_path()
                                                                     : std::optional<std::filesystem::path>(cache_path));

  try {
    if (pi0->parsed() || pitotal->parsed() || profile->parsed() || polar->parsed()) {
      QMContext ctx = context_from(c);
      ctx.source = cache.get();
      const BaseField& F = *ctx.base;
      if (pi0->parsed()) {
        const CountBreakdown b = pi_zero_detail(ctx);
        json j = context_json(ctx);
        j["pi0"] = jint(b.value);
        j["breakdown"] = breakdown_json(F, b);
        emit(as_json, j, [&] {
          std::cout << b.value << '\n';
          print_breakdown(F, b, true);
        });
      } else if (pitotal->parsed()) {
        const CountBreakdown b = pi_total_detail(ctx);
        json j = context_json(ctx);
        j["pi_total"] = jint(b.value);
        j["breakdown"] = breakdown_json(F, b);
        emit(as_json, j, [&] {
          std::cout << b.value << '\n';
          print_breakdown(F, b, false);
        });
      } else if (profile->parsed()) {
        const PolarizationProfile P = pi_profile(ctx);
        json j = context_json(ctx);
        j["principal_exists"] = P.principal_exists;
        j["polarizable"] = P.polarizable;
        j["pi_total"] = jint(P.pi_total);
        j["pi_zero"] = jint(P.pi_zero);
        j["complete"] = P.complete;
        j["pi_by_index"] = json::array();
        for (const auto& v : P.pi_by_index) j["pi_by_index"].push_back(jint(v));
        emit(as_json, j, [&] {
          if (!P.complete) std::cout << "profile not fully determined\n";
          std::cout << "pi = " << P.pi_total << '\n';
          if (!P.complete) std::cout << "pi_0 = " << P.pi_zero << '\n';
          for (std::size_t i = 0; i < P.pi_by_index.size(); ++i)
            std::cout << "pi_" << i << " = " << P.pi_by_index[i] << '\n';
        });
      } else {
        const bool exists = principal_existence(ctx);
        const bool pol = exists && polarizable(ctx);
        json j = context_json(ctx);
        j["principal_exists"] = exists;
        j["polarizable"] = pol;
        j["coprimality_ok"] = ctx.coprimality_ok;
        emit(as_json, j, [&] {
          std::cout << "principal line bundle: " << (exists ? "yes" : "no") << '\n'
                    << "principal polarization: " << (pol ? "yes" : "no") << '\n';
        });
      }
    } else if (classnum->parsed()) {
      if (!cn_disc.empty()) {
        const Int d(cn_disc);
        json j{{"disc", jint(d)}};
        if (d < 0) {
          j["h"] = jint(cache->h_imag(d));
        } else {
          const RealClassNumber r = cache->h_real(d);
          const PellUnit u = cache->pell(d);
          j["h"] = jint(r.h_wide);
          j["h_narrow"] = jint(r.h_narrow);
          j["unit_norm"] = u.norm_sign;
        }
        emit(as_json, j, [&] {
          std::cout << "h(" << d << ") = " << j["h"].dump() << '\n';
          if (d > 0) std::cout << "h+(" << d << ") = " << j["h_narrow"].dump() << "\nN(eps) = " << j["unit_norm"].dump() << '\n';
        });
      } else if (!cn_delta.empty()) {
        const BaseField F = make_field(cn_field);
        const auto E = conductor(F, F.parse(cn_delta), *cache, cn_engine ? Backend::engine : Backend::automatic);
        json j{{"field", F.name()},
               {"delta", F.to_string(E->delta)},
               {"disc_L", jint(E->disc_L)},
               {"h_L", jint(E->h_L)},
               {"conductor_norm", jint(E->conductor_norm)}};
        j["orders"] = json::array();
        for (const auto& S : E->orders) {
          json o{{"conductor_norm", jint(S.conductor_divisor_norm)},
                 {"h_S", jint(S.h_S)},
                 {"unit_index", jint(S.unit_index)},
                 {"e_S", S.e_S},
                 {"e_S_plus", S.e_S_plus}};
          if (F.is_rational()) o["disc"] = jint(S.discriminant);
          j["orders"].push_back(o);
        }
        emit(as_json, j, [&] {
          std::cout << "L = " << F.name() << "(sqrt(" << F.to_string(F.neg(E->delta)) << ")), d_L = " << E->disc_L
                    << ", h_L = " << E->h_L << ", N(f) = " << E->conductor_norm << '\n';
          std::cout << "  N(f_S)  h(S)  [O*:S*]  e_S  e_S+\n";
          for (const auto& S : E->orders)
            std::cout << "  " << S.conductor_divisor_norm << "  " << S.h_S << "  " << S.unit_index << "  " << S.e_S
                      << "  " << S.e_S_plus << '\n';
        });
      } else {
        throw_domain("classnum needs --disc or --delta");
      }
    } else if (hilbert->parsed()) {
      const Rat a(ha), b(hb);
      if (hp >= 0) {
        const int s = hilbert_symbol(ratio(a.get_num(), a.get_den()), ratio(b.get_num(), b.get_den()), Int(hp));
        emit(as_json, json{{"a", ha}, {"b", hb}, {"place", hp}, {"symbol", s}}, [&] { std::cout << s << '\n'; });
      } else {
        const QuaternionAlgebra B = discriminant_of(ratio(a.get_num(), a.get_den()), ratio(b.get_num(), b.get_den()));
        Int D = 1;
        json primes = json::array();
        for (const auto& p : B.ramified_finite) {
          D *= p;
          primes.push_back(jint(p));
        }
        json j{{"a", ha}, {"b", hb}, {"ramified_primes", primes}, {"discriminant", jint(D)},
               {"indefinite", B.totally_indefinite}, {"division", B.is_division}};
        emit(as_json, j, [&] {
          std::cout << "D = " << D << '\n' << (B.totally_indefinite ? "indefinite" : "definite") << '\n';
        });
      }
    } else if (index->parsed()) {
      const BaseField F = make_field(ifield);
      std::vector<FieldIdeal> ram;
      for (const auto& g : split(iram, ',')) ram.push_back(principal_ideal(F, F.parse(g)));
      auto B = std::make_shared<const QuaternionAlgebra>(quaternion_algebra(F, F.parse(ia), F.parse(ib), ram));
      const PureQuaternion mu = PureQuaternion::make(B, F.parse(ix), F.parse(iy), F.parse(iz));
      const SignatureVector tau = parse_signs(itau, F.degree());
      const int i = global_index(mu, tau);
      json sig = json::array();
      for (unsigned s = 0; s < F.degree(); ++s) {
        const Orientation o = orientation(mu, s);
        sig.push_back({{"delta_sign", o.delta_sign}, {"det_sign", o.sign}, {"intrinsic", o.intrinsic}});
      }
      json j{{"field", F.name()}, {"delta", F.to_string(mu.delta)}, {"index", i}, {"places", sig}};
      emit(as_json, j, [&] { std::cout << i << '\n'; });
    } else if (scancmd->parsed()) {
      const BaseField F = make_field(sfield);
      std::vector<FieldElement> Ds;
      for (const auto& D : primorial_discriminants(kmax)) Ds.push_back({Rat(D), 0});
      for (const auto& t : split(slist, ',')) Ds.push_back(F.parse(t));
      if (Ds.empty()) throw_domain("scan needs --discs or --primorial");
      const auto rows = scan(F, Ds, cache.get(), {threads, timing});
      std::ofstream file;
      if (!sout.empty()) {
        file.open(sout);
        if (!file) throw_domain("cannot write " + sout);
      }
      std::ostream& os = sout.empty() ? std::cout : file;
      if (as_json) {
        json arr = json::array();
        for (const auto& r : rows) {
          json row{{"D", F.to_string(r.D)}, {"norm_disc", jint(r.norm_disc)}};
          if (r.pi0) {
            row["pi0"] = jint(*r.pi0);
            row["ratio"] = r.ratio;
          } else {
            row["skipped"] = r.skipped;
          }
          if (timing) row["seconds"] = r.seconds;
          arr.push_back(row);
        }
        os << arr.dump(2) << '\n';
      } else {
        write_csv(os, F, rows, timing);
      }
      if (!splot.empty()) {
        std::ofstream plot(splot);
        if (!plot) throw_domain("cannot write " + splot);
        write_plot_data(plot, F, rows);
      }
    }
  } catch (const Error& e) {
    const json j{{"error_kind", std::string(to_string(e.kind()))}, {"message", e.what()}, {"context", e.context()}};
    if (as_json) std::cout << j.dump(2) << '\n';
    else std::cerr << j.dump() << '\n';
    return exit_status(e.kind());
  } catch (const std::invalid_argument& e) {
    const json j{{"error_kind", "domain"}, {"message", std::string("malformed number: ") + e.what()}, {"context", ""}};
    if (as_json) std::cout << j.dump(2) << '\n';
    else std::cerr << j.dump() << '\n';
    return exit_status(ErrorKind::domain);
  }
  return 0;
}
