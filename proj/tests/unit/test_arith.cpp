#include <doctest.h>

#include "qmpol/arith.hpp"
#include "qmpol/errors.hpp"

using namespace qmpol;

TEST_CASE("factorize") {
  const auto f = factorize(Int(9699690));
  CHECK(f.size() == 8);
  CHECK(f.is_squarefree());
  CHECK(f.value() == 9699690);
  CHECK(factorize(Int(-360)).to_string() == "2^3*3^2*5");
  // 2^61 - 1 is prime; the product needs rho
  const Int big = Int("2305843009213693951") * Int(1000003);
  const auto g = factorize(big);
  REQUIRE(g.size() == 2);
  CHECK(g.factors[1].prime == Int("2305843009213693951"));
  CHECK_THROWS_AS(factorize(Int(0)), Error);
}

TEST_CASE("divisors") {
  const auto d = divisors(factorize(Int(12)));
  CHECK(d == std::vector<Int>{1, 2, 3, 4, 6, 12});
}

TEST_CASE("kronecker symbol") {
  // values from the quadratic reciprocity tables
  CHECK(kronecker(Int(2), Int(7)) == 1);
  CHECK(kronecker(Int(3), Int(7)) == -1);
  CHECK(kronecker(Int(-1), Int(3)) == -1);
  CHECK(kronecker(Int(-4), Int(5)) == 1);
  CHECK(kronecker(Int(5), Int(2)) == -1);  // 5 = 5 mod 8
  CHECK(kronecker(Int(-7), Int(2)) == 1);  // -7 = 1 mod 8
  CHECK(kronecker(Int(6), Int(4)) == 0);
  CHECK(kronecker(Int(-5), Int(-1)) == -1);
  CHECK(kronecker(std::int64_t{-24}, std::int64_t{5}) == kronecker(Int(-24), Int(5)));
}

TEST_CASE("primality") {
  CHECK(is_prime(Int(2)));
  CHECK(!is_prime(Int(1)));
  CHECK(!is_prime(Int(561)));  // Carmichael
  CHECK(is_prime(Int("1000000007")));
  CHECK(!is_prime(Int("3215031751")));  // strong pseudoprime to 2,3,5,7
}

TEST_CASE("discriminants") {
  CHECK(is_fundamental_discriminant(Int(-4)));
  CHECK(is_fundamental_discriminant(Int(-24)));
  CHECK(!is_fundamental_discriminant(Int(-12)));
  CHECK(!is_fundamental_discriminant(Int(-16)));
  CHECK(is_fundamental_discriminant(Int(8)));
  const auto d = decompose_discriminant(Int(-60));
  CHECK(d.fundamental_part == -15);
  CHECK(d.conductor == 2);
  const auto e = decompose_discriminant(Int(-38798760));
  CHECK(e.fundamental_part == -38798760);
  CHECK(decompose_discriminant(Int(-108)).conductor == 6);
  CHECK(decompose_discriminant(Int(-64)).fundamental_part == -4);
  CHECK_THROWS_AS(decompose_discriminant(Int(-6)), Error);
  CHECK_THROWS_AS(decompose_discriminant(Int(0)), Error);
}

TEST_CASE("exact signs and roots") {
  CHECK(sign_of_quadratic(Rat(-1), Rat(1), Int(2)) == 1);
  CHECK(sign_of_quadratic(Rat(-3), Rat(2), Int(2)) == -1);  // 2.828 < 3
  CHECK(sign_of_quadratic(Rat(0), Rat(0), Int(2)) == 0);
  CHECK(isqrt(Int(99)) == 9);
  CHECK(is_square(Int(144)));
  CHECK(!is_squarefree(Int(18)));
  CHECK(valuation(Int(96), Int(2)) == 5);
  CHECK(ratio(Int(2), Int(-4)) == Rat(-1, 2));
}
