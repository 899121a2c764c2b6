#include <doctest.h>

#include <random>

#include "qmpol/errors.hpp"
#include "qmpol/quat_alg.hpp"

using namespace qmpol;

namespace {

struct HilbertRow {
  long a, b, p, value;
};
// hilbert(a, b, p) from PARI/GP; p = 0 is the real place
const HilbertRow kHilbert[] = {
    {-1, -1, 2, -1}, {-1, -1, 0, -1}, {-1, 3, 3, -1}, {-1, 3, 2, -1}, {2, 5, 5, -1},
    {3, 5, 2, 1},    {-2, -5, 5, -1}, {7, -3, 7, 1},  {6, -1, 3, -1}, {10, -3, 2, -1},
};

std::shared_ptr<const QuaternionAlgebra> algebra(long a, long b) {
  return std::make_shared<const QuaternionAlgebra>(discriminant_of(Rat(a), Rat(b)));
}

}  // namespace

TEST_CASE("Hilbert symbols against PARI") {
  for (const auto& r : kHilbert) {
    CAPTURE(r.a);
    CAPTURE(r.b);
    CAPTURE(r.p);
    CHECK(hilbert_symbol(Rat(r.a), Rat(r.b), Int(r.p)) == r.value);
  }
  // square classes: (4a, 9b) = (a, b); fractions reduce to num * den
  CHECK(hilbert_symbol(Rat(-4), Rat(-9), Int(2)) == -1);
  CHECK(hilbert_symbol(Rat(-1, 3), Rat(3), Int(3)) == hilbert_symbol(Rat(-3), Rat(3), Int(3)));
  CHECK_THROWS_AS(hilbert_symbol(Rat(0), Rat(1), Int(2)), Error);
  CHECK_THROWS_AS(hilbert_symbol(Rat(1), Rat(1), Int(4)), Error);
}

TEST_CASE("ramification") {
  const auto B = discriminant_of(Rat(-1), Rat(3));
  CHECK(B.ramified_finite == std::vector<Int>{2, 3});
  CHECK(B.totally_indefinite);
  const auto H = discriminant_of(Rat(-1), Rat(-1));
  CHECK(H.ramified_finite == std::vector<Int>{2});
  CHECK(!H.totally_indefinite);
  const auto M = discriminant_of(Rat(1), Rat(5));
  CHECK(M.ramified_finite.empty());
  CHECK(!M.is_division);
  const auto N = discriminant_of(Rat(-2), Rat(5));  // ramified at 2 and 5 (PARI: hilbert(-2,5,5) = -1)
  CHECK(N.disc_ideal.norm == 10);
}

TEST_CASE("quaternion arithmetic") {
  const auto B = algebra(-1, 3);
  const Quaternion p{{FieldElement{1, 0}, {2, 0}, {-1, 0}, {3, 0}}};
  const Quaternion q{{FieldElement{0, 0}, {1, 0}, {Rat(1, 2), 0}, {-2, 0}}};
  const Quaternion r{{FieldElement{2, 0}, {0, 0}, {1, 0}, {1, 0}}};
  const auto pq_r = qmul(*B, qmul(*B, p, q), r);
  const auto p_qr = qmul(*B, p, qmul(*B, q, r));
  for (int i = 0; i < 4; ++i) CHECK(pq_r.c[i] == p_qr.c[i]);
  const BaseField& Q = *B->base;
  CHECK(reduced_norm(*B, qmul(*B, p, q)) == Q.mul(reduced_norm(*B, p), reduced_norm(*B, q)));
  const auto one = qmul(*B, p, qinverse(*B, p));
  CHECK(one.c[0] == FieldElement{1, 0});
  CHECK(one.c[1] == FieldElement{});
  CHECK(reduced_trace(*B, p) == FieldElement{2, 0});
}

TEST_CASE("orientation of i and -i") {
  const auto B = algebra(-1, 3);
  const auto mu = PureQuaternion::make(B, {1, 0}, {0, 0}, {0, 0});
  CHECK(mu.delta == FieldElement{1, 0});
  CHECK(orientation(mu, 0).sign == 1);
  CHECK(orientation(mu.negated(), 0).sign == -1);
  CHECK(global_index(mu, {1}) == 0);
  CHECK(global_index(mu.negated(), {1}) == 2);
  CHECK(global_index(mu, {-1}) == 2);
  CHECK(signature(mu) == SignatureVector{1});
}

TEST_CASE("negative delta: index one, conventional sign") {
  const auto B = algebra(-1, 3);
  const auto mu = PureQuaternion::make(B, {0, 0}, {1, 0}, {0, 0});  // j^2 = 3
  CHECK(mu.delta == FieldElement{-3, 0});
  const Orientation o = orientation(mu, 0);
  CHECK(!o.intrinsic);
  CHECK(o.delta_sign == -1);
  CHECK(global_index(mu, {1}) == 1);
  CHECK(global_index(mu.negated(), {-1}) == 1);
  CHECK(local_index(-1, 1, -1) == 1);
}

TEST_CASE("conjugation twists the orientation by the norm sign") {
  std::mt19937 rng(20261016);
  std::uniform_int_distribution<int> coef(-5, 5);
  const auto B = algebra(-1, 3);
  int checked = 0;
  while (checked < 200) {
    const auto mu = PureQuaternion::make(B, {coef(rng), 0}, {coef(rng), 0}, {coef(rng), 0});
    if (!(B->base->sign_at(mu.delta, 0) > 0)) continue;
    const Quaternion alpha{{FieldElement{coef(rng), 0}, {coef(rng), 0}, {coef(rng), 0}, {coef(rng), 0}}};
    const FieldElement n = reduced_norm(*B, alpha);
    if (n == FieldElement{}) continue;
    const Quaternion conj = qmul(*B, qinverse(*B, alpha), qmul(*B, mu.as_quaternion(), alpha));
    const auto nu = PureQuaternion::from(B, conj);
    CHECK(nu.delta == mu.delta);
    CHECK(orientation(nu, 0).sign == (n.x > 0 ? 1 : -1) * orientation(mu, 0).sign);
    ++checked;
  }
}

TEST_CASE("real quadratic base") {
  const BaseField F = BaseField::real_quadratic(Int(2));
  // (-1, 7) over Q(sqrt2): the two primes over 7 are supplied
  const FieldIdeal P1 = principal_ideal(F, {3, 1}), P2 = principal_ideal(F, {3, -1});
  auto B = std::make_shared<const QuaternionAlgebra>(quaternion_algebra(F, {-1, 0}, {7, 0}, {P1, P2}));
  CHECK(B->totally_indefinite);
  CHECK(B->disc_ideal.norm == 49);
  const auto mu = PureQuaternion::make(B, {1, 0}, {0, 0}, {0, 0});
  CHECK(global_index(mu, {1, 1}) + global_index(mu.negated(), {1, 1}) == 4);
  CHECK(global_index(mu, {1, -1}) == 2);
  CHECK_THROWS_AS(quaternion_algebra(F, {-1, 0}, {7, 0}, {P1}), Error);
}

TEST_CASE("degree of phi") {
  const BaseField Q = BaseField::rational();
  CHECK(degree_of_phi(Q, Int(1), Int(6), {6, 0}) == 1296);
  const BaseField F = BaseField::real_quadratic(Int(2));
  // N(2 sqrt2) = -8, N((7)) = 49, N(7) = 49
  CHECK(degree_of_phi(F, Int(8), Int(49), {7, 0}) == Int(64 * 49 * 49) * Int(64 * 49 * 49));
  CHECK_THROWS_AS(degree_of_phi(Q, Int(1), Int(6), {0, 0}), Error);
}
