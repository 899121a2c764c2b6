#include <doctest.h>

#include "qmpol/class_group.hpp"
#include "qmpol/number_field.hpp"

using namespace qmpol;

namespace {

struct QuarticRow {
  long m, d0, d1;  // L = Q(sqrt m)(sqrt(d0 + d1 sqrt m))
  long disc, h;
};
// nfdisc / bnfinit(...).no from PARI/GP on the compositum
const QuarticRow kQuartic[] = {
    {2, -7, 0, 3136, 2},  {2, 7, 0, 12544, 1},  {2, 7, 7, -50176, 2}, {3, -7, 0, 7056, 2},
    {5, -19, 0, 9025, 4}, {13, -3, 0, 1521, 2}, {5, -1, 0, 400, 1},  {3, -1, 0, 144, 1},
    {2, -1, 0, 256, 1},   {2, -3, 0, 576, 1},   {3, 7, 0, 7056, 1},
};

Int class_number(const NumberField& K) {
  const MaximalOrder O(K);
  const UnitGroup U = compute_units(O);
  return class_group(O, U).h;
}

}  // namespace

TEST_CASE("quadratic fields through the engine") {
  // PARI: h(Q(sqrt -15)) = 2, h(Q(sqrt -23)) = 3, h(Q(sqrt 10)) = 2, h(Q(sqrt 79)) = 3
  CHECK(class_number(NumberField::quadratic(Int(-15))) == 2);
  CHECK(class_number(NumberField::quadratic(Int(-23))) == 3);
  CHECK(class_number(NumberField::quadratic(Int(10))) == 2);
  CHECK(class_number(NumberField::quadratic(Int(79))) == 3);
  CHECK(NumberField::quadratic(Int(-15)).discriminant() == -15);
  CHECK(NumberField::quadratic(Int(10)).discriminant() == 40);
}

TEST_CASE("biquadratic fields against PARI") {
  for (const auto& r : kQuartic) {
    CAPTURE(r.m);
    CAPTURE(r.d0);
    CAPTURE(r.d1);
    const auto K = NumberField::relative_quadratic(Int(r.m), Rat(r.d0), Rat(r.d1));
    CHECK(K.discriminant() == r.disc);
    CHECK(class_number(K) == r.h);
  }
}

TEST_CASE("signature and torsion") {
  const auto K = NumberField::relative_quadratic(Int(3), Rat(-1), Rat(0));  // Q(zeta12)
  CHECK(K.r1() == 0);
  CHECK(K.r2() == 2);
  const MaximalOrder O(K);
  const UnitGroup U = compute_units(O);
  CHECK(U.torsion_order == 12);
  CHECK(U.rank() == 1);
  const auto R = NumberField::relative_quadratic(Int(2), Rat(7), Rat(7));  // mixed signature
  CHECK(R.r1() == 2);
  CHECK(R.r2() == 1);
}

TEST_CASE("element arithmetic") {
  const auto K = NumberField::relative_quadratic(Int(2), Rat(-7), Rat(0));
  const Elem w = K.w();
  CHECK(K.mul(w, w) == K.from_base(Rat(-7), Rat(0)));
  const Elem a = K.from_base(Rat(1), Rat(1)) + w;
  CHECK(K.mul(a, K.inverse(a)) == K.one());
  CHECK(K.norm(a) == K.norm(K.relative_conjugate(a)));
  const auto [x, y] = K.relative_norm(a);
  // (1 + sqrt2)^2 + 7 = 10 + 2 sqrt2
  CHECK(x == 10);
  CHECK(y == 2);
  CHECK(K.is_integral(Rat(1, 2) * (K.one() + w)));
}

TEST_CASE("prime decomposition") {
  const MaximalOrder O(NumberField::relative_quadratic(Int(2), Rat(-7), Rat(0)));
  // 2 = (sqrt2)^2 and -7 = 1 mod 8: e = 2, two primes
  const auto& P2 = O.primes_above(Int(2));
  unsigned total = 0;
  for (const auto& P : P2) total += P.e * P.f;
  CHECK(P2.size() == 2);
  CHECK(total == 4);
  const auto& P3 = O.primes_above(Int(3));  // 3 inert in Q(sqrt2), (-7/3) = -1
  CHECK(P3.size() == 2);
}
