#include <doctest.h>

#include "qmpol/bqf.hpp"
#include "qmpol/errors.hpp"

using namespace qmpol;

namespace {

// quadclassunit(D).no from PARI/GP 2.15
const std::pair<long, long> kImag[] = {
    {-3, 1},     {-4, 1},     {-7, 1},    {-8, 1},    {-15, 2},     {-20, 2},        {-23, 3},
    {-24, 2},    {-31, 3},    {-47, 5},   {-56, 4},   {-71, 7},     {-84, 4},        {-140, 6},
    {-195, 4},   {-231, 12},  {-420, 8},  {-4620, 24}, {-3299, 27}, {-39996, 88},    {-120120, 128},
    {-38798760, 2048},
};

struct RealRow {
  long D, h, norm, x, y;  // unit (x + y sqrt D)/2
};
// quadclassunit(D).no, norm(quadunit(D)), quadunit(D) from PARI/GP
const RealRow kReal[] = {
    {5, 1, -1, 1, 1},    {8, 1, -1, 2, 1},    {12, 1, 1, 4, 1},     {13, 1, -1, 3, 1},
    {21, 1, 1, 5, 1},    {24, 1, 1, 10, 2},   {28, 1, 1, 16, 3},    {40, 2, -1, 6, 1},
    {60, 2, 1, 8, 1},    {65, 2, -1, 16, 2},  {84, 1, 1, 110, 12},  {85, 2, -1, 9, 1},
    {105, 2, 1, 82, 8},  {136, 2, 1, 70, 6},  {140, 2, 1, 12, 1},   {221, 2, 1, 15, 1},
    {229, 3, -1, 15, 1}, {260, 2, -1, 16, 1},
};

}  // namespace

TEST_CASE("imaginary class numbers against PARI") {
  for (const auto& [d, h] : kImag) {
    CAPTURE(d);
    CHECK(class_number_imag(Int(d)) == h);
  }
}

TEST_CASE("thread count does not change the count") {
  CHECK(class_number_imag(Int(-39996), 3) == 88);
  CHECK(class_number_imag(Int(-38798760), 2) == 2048);
}

TEST_CASE("analytic formula agrees on fundamental discriminants") {
  for (long d : {-7L, -8L, -15L, -20L, -23L, -24L, -47L, -3299L})
    CHECK(analytic_h(Int(d)) == class_number_imag(Int(d)));
  CHECK_THROWS_AS(analytic_h(Int(-12)), Error);
}

TEST_CASE("non-fundamental imaginary discriminants") {
  // h(-12) = 1 (order of conductor 2 in Z[zeta3]); h(-16) = 1; h(-60) = 2
  CHECK(class_number_imag(Int(-12)) == 1);
  CHECK(class_number_imag(Int(-16)) == 1);
  CHECK(class_number_imag(Int(-60)) == 2);
  CHECK(class_number_imag(Int(-36)) == 2);
  CHECK_THROWS_AS(class_number_imag(Int(-5)), Error);
  CHECK_THROWS_AS(class_number_imag(Int(5)), Error);
}

TEST_CASE("real class numbers and Pell units against PARI") {
  for (const auto& r : kReal) {
    CAPTURE(r.D);
    const auto h = class_number_real(Int(r.D));
    CHECK(h.h_wide == r.h);
    CHECK(h.h_narrow == (r.norm == 1 ? 2 * r.h : r.h));
    const PellUnit u = pell_unit(Int(r.D));
    CHECK(u.x == r.x);
    CHECK(u.y == r.y);
    CHECK(u.norm_sign == r.norm);
    CHECK(u.x * u.x - r.D * u.y * u.y == 4 * r.norm);
  }
}

TEST_CASE("reduced form count reports the method") {
  const auto c = reduced_form_count(Int(-23));
  CHECK(c.h == 3);
  CHECK(c.method == ClassNumberMethod::definite_enumeration);
  CHECK(c.discriminant.fundamental_part == -23);
}
