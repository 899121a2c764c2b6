#include <doctest.h>

#include "qmpol/cm_orders.hpp"
#include "qmpol/errors.hpp"

using namespace qmpol;

namespace {

struct OrderRow {
  long m, delta;  // L = Q(sqrt m)(sqrt(-delta))
  long conductor_norm;
  std::vector<long> h, index;  // by increasing N(f_S)
};
// PARI oracle: h(S) = h_L |(O_L/f)^*| / (|(R_F/f)^*| [O_L^*:S^*]) with bnfinit
// units tested for membership in R_F + f O_L, idealstar for |(O_L/f)^*|.
const OrderRow kOrders[] = {
    {2, 7, 4, {2, 2, 4}, {1, 1, 1}},
    {2, -7, 2, {1, 1}, {1, 2}},
    {3, 1, 4, {1, 1, 1}, {1, 3, 6}},
    {3, 7, 4, {2, 2, 4}, {1, 1, 1}},
    {5, 3, 4, {1, 1}, {1, 3}},
    {5, 11, 4, {2, 6}, {1, 1}},
};

}  // namespace

TEST_CASE("orders over real quadratic fields against PARI") {
  for (const auto& r : kOrders) {
    CAPTURE(r.m);
    CAPTURE(r.delta);
    const BaseField F = BaseField::real_quadratic(Int(r.m));
    const auto E = conductor(F, {Rat(r.delta), 0});
    CHECK(E->conductor_norm == r.conductor_norm);
    REQUIRE(E->orders.size() == r.h.size());
    for (std::size_t i = 0; i < r.h.size(); ++i) {
      CHECK(E->orders[i].h_S == r.h[i]);
      CHECK(E->orders[i].unit_index == r.index[i]);
    }
  }
}

TEST_CASE("Q(sqrt2), delta = 7: unit norm exponents") {
  const BaseField F = BaseField::real_quadratic(Int(2));
  const auto E = conductor(F, {7, 0});
  CHECK(E->disc_L == 3136);
  CHECK(E->h_L == 2);
  for (const auto& S : E->orders) {
    CHECK(S.e_S == 2);
    CHECK(S.e_S_plus == 0);
    CHECK(S.ample == std::optional<bool>(true));
  }
  // totally positive units of Q(sqrt3) are visible in e_S^+
  const auto G = conductor(BaseField::real_quadratic(Int(3)), {7, 0});
  CHECK(G->orders.back().e_S_plus == 1);
  CHECK(!G->orders.back().ample.has_value());
}

TEST_CASE("unit conductor") {
  const BaseField F = BaseField::real_quadratic(Int(2));
  const auto E = conductor(F, {7, 7});
  CHECK(E->conductor_norm == 1);
  CHECK(E->orders.size() == 1);
  CHECK(E->h_L == 2);
  CHECK(E->real_places == 2);
}

TEST_CASE("forms and engine agree over Q") {
  const BaseField Q = BaseField::rational();
  for (long d : {15L, -21L, 3L, 35L, 6L, -6L, 1L, 2L, -15L, 39L, -65L, 91L}) {
    CAPTURE(d);
    const auto A = conductor(Q, {Rat(d), 0});
    const auto B = conductor(Q, {Rat(d), 0}, direct_source(), Backend::engine);
    REQUIRE(A->orders.size() == B->orders.size());
    CHECK(A->conductor_norm == B->conductor_norm);
    for (std::size_t i = 0; i < A->orders.size(); ++i) {
      CHECK(A->orders[i].h_S == B->orders[i].h_S);
      CHECK(A->orders[i].unit_index == B->orders[i].unit_index);
      CHECK(A->orders[i].e_S == B->orders[i].e_S);
    }
  }
}

TEST_CASE("orders over Q") {
  const BaseField Q = BaseField::rational();
  const auto E = conductor(Q, {15, 0});  // Z[sqrt -15] inside Z[(1+sqrt -15)/2]
  REQUIRE(E->orders.size() == 2);
  CHECK(E->orders[0].discriminant == -15);
  CHECK(E->orders[1].discriminant == -60);
  CHECK(E->orders[0].h_S == 2);
  CHECK(E->orders[1].h_S == 2);
  const auto R = conductor(Q, {-21, 0});  // Z[sqrt 21]: index 3 in the units of Q(sqrt21)
  CHECK(R->orders[1].discriminant == 84);
  CHECK(R->orders[1].h_S == 1);
  CHECK(R->orders[1].unit_index == 3);
  const auto T = conductor(Q, {3, 0});
  CHECK(T->orders[1].discriminant == -12);
  CHECK(T->orders[1].unit_index == 3);
  CHECK(conductor(Q, {35, 0})->orders[1].h_S == 6);  // h(-140)
}

TEST_CASE("conductor exponent rule") {
  CHECK(conductor_exponent_rule(std::nullopt, 1) == 1u);
  CHECK(conductor_exponent_rule(0u, 1) == 0u);
  CHECK(conductor_exponent_rule(2u, 1) == 1u);
  CHECK(conductor_exponent_rule(3u, 2) == 1u);
  CHECK(conductor_exponent_rule(4u, 2) == 2u);
  CHECK(conductor_exponent_rule(6u, 2) == 2u);
  CHECK(!conductor_exponent_rule(5u, 3).has_value());  // needs e >= 3: not over a quadratic field
}

TEST_CASE("domain and scale errors") {
  const BaseField F = BaseField::real_quadratic(Int(2));
  CHECK_THROWS_AS(conductor(F, {-2, 0}), Error);  // -delta = 2 is a square
  CHECK_THROWS_AS(conductor(F, {0, 0}), Error);
  CHECK_THROWS_AS(conductor(F, {Rat(1, 2), 0}), Error);
  try {
    conductor(F, {Rat(100003), 0});
    FAIL("expected the desk bound");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unsupported_configuration);
  }
}

TEST_CASE("order class numbers and exponents") {
  const auto E = conductor(BaseField::real_quadratic(Int(2)), {7, 0});
  CHECK(order_class_number(E->orders.back()) == 4);
  CHECK(unit_norm_exponents(E->orders.back()) == std::pair<unsigned, unsigned>{2, 0});
  const auto info = classgroup_small(*E);
  CHECK(info.h == 2);
  CHECK(info.disc == 3136);
}
