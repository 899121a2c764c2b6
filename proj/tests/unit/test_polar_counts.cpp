#include <doctest.h>

#include "qmpol/errors.hpp"
#include "qmpol/polar_counts.hpp"

using namespace qmpol;

namespace {

QMContext surface(long D) { return make_context(BaseField::rational(), {Rat(D), 0}); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::domain;
}

}  // namespace

TEST_CASE("surface D = 6") {
  // h(-24) = 2; h(24) = 1 with a norm +1 unit (PARI)
  const auto ctx = surface(6);
  CHECK(principal_existence(ctx));
  CHECK(polarizable(ctx));
  CHECK(pi_zero(ctx) == 1);
  CHECK(pi_total(ctx) == 3);
  CHECK(pi_one_surface(Int(6)) == 1);
  const auto P = pi_profile(ctx);
  CHECK(P.pi_by_index == std::vector<Int>{1, 1, 1});
  CHECK(P.complete);
}

TEST_CASE("surface D = 15") {
  // (h(-60) + h(-15))/2 = (2 + 2)/2; pi_1 = eps_60 h(60) = 1 * 2
  const auto ctx = surface(15);
  CHECK(pi_zero(ctx) == 2);
  CHECK(pi_zero_surface_closed_form(Int(15)) == 2);
  CHECK(pi_one_surface(Int(15)) == 2);
  CHECK(pi_total(ctx) == 2 * 2 + 2);
}

TEST_CASE("surface D = 65: both real discriminants") {
  // h(260) = 2 and h(65) = 2, both with norm -1 units: 1/2 * 2 + 1/2 * 2
  CHECK(pi_one_surface(Int(65)) == 2);
  const auto b = pi_total_detail(surface(65));
  std::size_t real_orders = 0;
  for (const auto& c : b.orders) real_orders += c.delta.x < 0;
  CHECK(real_orders == 2);
}

TEST_CASE("general formula over Q reproduces the closed form") {
  for (long D : {6L, 10L, 14L, 15L, 21L, 22L, 26L, 33L, 34L, 35L, 38L, 39L, 46L, 51L, 55L, 57L, 58L, 62L, 65L, 69L}) {
    CAPTURE(D);
    const auto b = pi_zero_detail(surface(D));
    CHECK(b.denominator == 2);
    for (const auto& c : b.orders) {
      CHECK(c.unit == FieldElement{1, 0});
      CHECK(c.e_S_plus == 0);
    }
    CHECK(b.value == pi_zero_surface_closed_form(Int(D)));
  }
}

TEST_CASE("Q(sqrt2), D = 7") {
  const BaseField F = BaseField::real_quadratic(Int(2));
  const auto ctx = make_context(F, {7, 0});
  CHECK(ctx.coprimality_ok);
  CHECK(ctx.dimension() == 4);
  CHECK(principal_existence(ctx));
  CHECK(polarizable(ctx));
  // PARI order table over L = Q(sqrt2, sqrt-7): h(S) = 2, 2, 4 and e_S^+ = 0
  CHECK(pi_zero(ctx) == (2 + 2 + 4) / 2);
  // units mod squares: 1, -1, eps, -eps; every order has e_S = 2
  // 4 * (2 + 2 + 4) + 4 * (1 + 1) + 4 * 2 + 4 * 2 = 56, over 2 h(F)
  CHECK(pi_total(ctx) == 28);
  const auto P = pi_profile(ctx);
  REQUIRE(P.pi_by_index.size() == 5);
  CHECK(P.pi_by_index[0] == P.pi_by_index[4]);
  CHECK(P.pi_by_index[1] == P.pi_by_index[3]);
}

TEST_CASE("existence and polarizability errors") {
  CHECK(kind_of([] { principal_existence(make_context(make_field("Q(sqrt10)"), {7, 0})); }) ==
        ErrorKind::unsupported_configuration);
  // 5 and 7 are inert in Q(sqrt3): D = 35 is totally positive but h+ = 2h
  CHECK(kind_of([] { polarizable(make_context(make_field("Q(sqrt3)"), {35, 0})); }) ==
        ErrorKind::unsupported_configuration);
  CHECK(kind_of([] { pi_zero(surface(7)); }) == ErrorKind::domain);    // odd number of primes
  CHECK(kind_of([] { pi_zero(surface(12)); }) == ErrorKind::domain);   // not squarefree
  CHECK(kind_of([] { pi_one_surface(Int(30)); }) == ErrorKind::domain);
  CHECK(kind_of([] { pi_zero(make_context(BaseField::rational(), {6, 0}, Int(5))); }) == ErrorKind::domain);
}

TEST_CASE("hereditary levels pass the existence test only") {
  const auto ctx = make_context(BaseField::rational(), {6, 0}, Int(5));
  CHECK(principal_existence(ctx));
  CHECK(kind_of([&] { pi_total(ctx); }) == ErrorKind::domain);
  CHECK(kind_of([] { principal_existence(make_context(BaseField::rational(), {6, 0}, Int(3))); }) ==
        ErrorKind::domain);
}

TEST_CASE("non-coprime different") {
  // D = sqrt2 shares the prime over 2 with the different (2 sqrt2)
  const BaseField F = BaseField::real_quadratic(Int(2));
  const auto ctx = make_context(F, {0, 1});
  CHECK(!ctx.coprimality_ok);
  CHECK(kind_of([&] { pi_zero(ctx); }) == ErrorKind::domain);
}

TEST_CASE("Pollack and Eichler counts") {
  const BaseField Q = BaseField::rational();
  const auto E = conductor(Q, {6, 0});  // disc -24, h = 2, e_S = 1
  CHECK(pollack_count(E->orders[0], Q) == 2);
  CHECK(eichler_count(E->orders[0], Q) == 2);
  CHECK(eichler_count(conductor(Q, {15, 0})->orders[0], Q) == 2);
  const auto R = conductor(Q, {-5, 0});  // Z[(1+sqrt5)/2]: h = 1, norm -1 unit, e_S = 0
  CHECK(R->orders[0].e_S == 0);
  CHECK_THROWS_AS(pollack_count(R->orders[0], Q), Error);
  const BaseField F = BaseField::real_quadratic(Int(2));
  for (const auto& S : conductor(F, {7, 0})->orders) CHECK(eichler_count(S, F) == S.h_S);
}
