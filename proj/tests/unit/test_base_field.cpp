#include <doctest.h>

#include "qmpol/base_field.hpp"
#include "qmpol/errors.hpp"

using namespace qmpol;

TEST_CASE("field construction") {
  const BaseField Q = make_field("Q");
  CHECK(Q.is_rational());
  CHECK(Q.degree() == 1);
  const BaseField F = make_field("Q(sqrt2)");
  CHECK(F.disc() == 8);
  CHECK(F.h() == 1);
  CHECK(F.h_plus() == 1);
  CHECK(F.full_signature());
  const BaseField G = make_field("Q(sqrt(3))");
  CHECK(G.disc() == 12);
  CHECK(G.h_plus() == 2);
  CHECK(!G.full_signature());
  const BaseField H = make_field("Q(sqrt5)");
  CHECK(H.disc() == 5);
  CHECK(H.to_string(H.epsilon()) == "1/2+1/2*sqrt(5)");
  CHECK(make_field("Q(sqrt10)").restricted_support());
  CHECK_THROWS_AS(make_field("Q(sqrt4)"), Error);
  CHECK_THROWS_AS(make_field("Q(sqrt-3)"), Error);
}

TEST_CASE("parse and print") {
  const BaseField F = BaseField::real_quadratic(Int(2));
  CHECK(F.parse("3+2*sqrt(2)") == FieldElement{3, 2});
  CHECK(F.parse("3+2sqrt2") == FieldElement{3, 2});
  CHECK(F.parse("(1-sqrt2)/2") == FieldElement{Rat(1, 2), Rat(-1, 2)});
  CHECK(F.to_string({7, 0}) == "7");
  CHECK(F.to_string({-7, -7}) == "-7-7*sqrt(2)");
  CHECK_THROWS_AS(F.parse("3+sqrt3"), Error);
  CHECK_THROWS_AS(F.parse("3+"), Error);
}

TEST_CASE("arithmetic, norms and signs") {
  const BaseField F = BaseField::real_quadratic(Int(2));
  const FieldElement e = F.epsilon();
  CHECK(e == FieldElement{1, 1});
  CHECK(F.norm(e) == -1);
  CHECK(F.mul(e, F.inv(e)) == FieldElement{1, 0});
  CHECK(F.pow(e, 2) == FieldElement{3, 2});
  CHECK(F.signs(e) == std::vector<int>{1, -1});
  CHECK(F.is_totally_positive({3, 2}));
  CHECK(F.trace({3, 2}) == 6);
  const BaseField Q = BaseField::rational();
  CHECK(Q.norm({7, 0}) == 7);  // degree 1
}

TEST_CASE("unit classes") {
  const BaseField F = BaseField::real_quadratic(Int(2));
  CHECK(tp_units_mod_squares(F).size() == 1);
  CHECK(units_mod_squares(F).size() == 4);
  const BaseField G = BaseField::real_quadratic(Int(3));
  // 2 + sqrt3 has norm +1 and is totally positive
  CHECK(tp_units_mod_squares(G).size() == 2);
  CHECK(G.unit_class(G.epsilon()) == std::vector<int>{0, 1});
  CHECK(G.totally_positive_unit_classes().size() == 1);
}

TEST_CASE("ideals and generators") {
  const BaseField F = BaseField::real_quadratic(Int(2));
  const FieldIdeal theta = different_ideal(F);
  CHECK(theta.norm == 8);  // (2 sqrt2)
  const FieldIdeal I = make_ideal(F, {{7, 0}, {3, 1}});  // prime over 7
  CHECK(I.norm == 7);
  const auto g = find_generator(I);
  REQUIRE(g.status == SearchStatus::found);
  CHECK(abs(F.norm(*g.element)) == 7);
  CHECK(contains(I, *g.element));
  const auto tp = totally_positive_generator(I);
  REQUIRE(tp.status == SearchStatus::found);
  CHECK(F.is_totally_positive(*tp.element));

  const BaseField G = BaseField::real_quadratic(Int(3));
  // (sqrt3) has no totally positive generator: N(sqrt3) = -3 and every unit has norm +1
  CHECK(totally_positive_generator(principal_ideal(G, {0, 1})).status == SearchStatus::none);
  CHECK_THROWS_AS(find_generator(make_ideal(make_field("Q(sqrt10)"), {{2, 0}, {0, 1}})), Error);
}

TEST_CASE("factorisation and coprimality") {
  const BaseField F = BaseField::real_quadratic(Int(2));
  const auto f = factor_principal(F, {7, 0});  // 7 splits
  CHECK(f.size() == 2);
  const auto g = factor_principal(F, {2, 0});  // (sqrt2)^2
  REQUIRE(g.size() == 1);
  CHECK(g[0].exponent == 2);
  CHECK(coprime(F, {0, 2}, {7, 0}));
  CHECK(!coprime(F, {0, 2}, {0, 1}));
}
