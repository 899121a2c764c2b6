#include "qmpol/lattice.hpp"

#include <cmath>
#include <utility>

#include "qmpol/errors.hpp"

namespace qmpol {

IntMat hermite_normal_form(IntMat rows, std::size_t ncols) {
  std::size_t pivot_row = 0;
  std::vector<std::size_t> pivot_cols;
  for (std::size_t col = 0; col < ncols && pivot_row < rows.size(); ++col) {
    // Euclid on column `col` among rows >= pivot_row.
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t r = pivot_row; r < rows.size(); ++r) {
        if (rows[r][col] == 0) continue;
        if (best == rows.size() || abs(rows[r][col]) < abs(rows[best][col])) best = r;
      }
      if (best == rows.size()) break;
      std::swap(rows[pivot_row], rows[best]);
      bool done = true;
      for (std::size_t r = pivot_row + 1; r < rows.size(); ++r) {
        if (rows[r][col] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), rows[r][col].get_mpz_t(), rows[pivot_row][col].get_mpz_t());
        for (std::size_t c = col; c < ncols; ++c) rows[r][c] -= q * rows[pivot_row][c];
        if (rows[r][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[pivot_row][col] == 0) continue;
    if (rows[pivot_row][col] < 0)
      for (auto& v : rows[pivot_row]) v = -v;
    pivot_cols.push_back(col);
    ++pivot_row;
  }
  rows.resize(pivot_row);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t col = pivot_cols[i];
    for (std::size_t r = 0; r < i; ++r) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), rows[r][col].get_mpz_t(), rows[i][col].get_mpz_t());
      if (q == 0) continue;
      for (std::size_t c = col; c < ncols; ++c) rows[r][c] -= q * rows[i][c];
    }
  }
  return rows;
}

Int determinant(IntMat m) {
  // Bareiss fraction-free elimination.
  const std::size_t n = m.size();
  if (n == 0) return 1;
  int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

Rat determinant(const RatMat& a) {
  RatMat m = a;
  const std::size_t n = m.size();
  Rat det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k] == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      std::swap(m[p], m[k]);
      det = -det;
    }
    det *= m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m[i][k] == 0) continue;
      const Rat f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return det;
}

RatMat inverse(const RatMat& a) {
  const std::size_t n = a.size();
  RatMat m = a;
  RatMat inv(n, RatVec(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k] == 0) ++p;
    if (p == n) throw_domain("singular matrix");
    std::swap(m[p], m[k]);
    std::swap(inv[p], inv[k]);
    const Rat piv = m[k][k];
    for (std::size_t j = 0; j < n; ++j) {
      m[k][j] /= piv;
      inv[k][j] /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || m[i][k] == 0) continue;
      const Rat f = m[i][k];
      for (std::size_t j = 0; j < n; ++j) {
        m[i][j] -= f * m[k][j];
        inv[i][j] -= f * inv[k][j];
      }
    }
  }
  return inv;
}

RatMat multiply(const RatMat& a, const RatMat& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  RatMat out(n, RatVec(m, Rat(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][l] * b[l][j];
    }
  return out;
}

RatMat transpose(const RatMat& a) {
  if (a.empty()) return {};
  RatMat t(a[0].size(), RatVec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

RatVec row_times(const RatVec& v, const RatMat& m) {
  RatVec out(m.empty() ? 0 : m[0].size(), Rat(0));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += v[i] * m[i][j];
  }
  return out;
}

Lattice Lattice::from_generators(const std::vector<RatVec>& gens, std::size_t n) {
  Int denom = 1;
  for (const auto& g : gens) {
    if (g.size() != n) throw_domain("lattice generator has the wrong length");
    for (const auto& x : g) mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), x.get_den_mpz_t());
  }
  IntMat rows;
  rows.reserve(gens.size());
  for (const auto& g : gens) {
    IntVec r(n);
    for (std::size_t i = 0; i < n; ++i) {
      Rat s = g[i] * denom;
      r[i] = s.get_num();
    }
    rows.push_back(std::move(r));
  }
  Lattice out;
  out.dim_ = n;
  out.hnf_ = hermite_normal_form(std::move(rows), n);
  if (out.hnf_.size() != n) throw_domain("lattice generators are not of full rank");
  Int g = denom;
  for (const auto& r : out.hnf_)
    for (const auto& x : r) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g != 1) {
    for (auto& r : out.hnf_)
      for (auto& x : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(denom.get_mpz_t(), denom.get_mpz_t(), g.get_mpz_t());
  }
  out.denom_ = denom;
  return out;
}

std::vector<RatVec> Lattice::basis() const {
  std::vector<RatVec> out(dim_, RatVec(dim_));
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) {
      out[i][j] = ratio(hnf_[i][j], denom_);
      out[i][j].canonicalize();
    }
  return out;
}

Rat Lattice::covolume() const {
  Int d = 1;
  for (std::size_t i = 0; i < dim_; ++i) d *= hnf_[i][i];
  Int dn;
  mpz_pow_ui(dn.get_mpz_t(), denom_.get_mpz_t(), dim_);
  Rat out(d, dn);
  out.canonicalize();
  return out;
}

std::optional<IntVec> Lattice::coordinates(const RatVec& v) const {
  // x * H = v * denom with H upper triangular.
  IntVec x(dim_);
  RatVec rest(dim_);
  for (std::size_t j = 0; j < dim_; ++j) rest[j] = v[j] * denom_;
  for (std::size_t j = 0; j < dim_; ++j) {
    Rat r = rest[j];
    for (std::size_t i = 0; i < j; ++i) r -= Rat(x[i] * hnf_[i][j]);
    if (r.get_den() != 1) return std::nullopt;
    const Int num = r.get_num();
    if (num % hnf_[j][j] != 0) return std::nullopt;
    x[j] = num / hnf_[j][j];
  }
  return x;
}

bool Lattice::contains(const RatVec& v) const { return coordinates(v).has_value(); }

bool Lattice::contains(const Lattice& other) const {
  for (const auto& b : other.basis())
    if (!contains(b)) return false;
  return true;
}

Lattice Lattice::operator+(const Lattice& other) const {
  auto gens = basis();
  for (auto& b : other.basis()) gens.push_back(std::move(b));
  return from_generators(gens, dim_);
}

Lattice Lattice::scaled(const Rat& c) const {
  auto gens = basis();
  for (auto& g : gens)
    for (auto& x : g) x *= c;
  return from_generators(gens, dim_);
}

std::vector<std::vector<std::int64_t>> lll_reduce(RealMat& b, long double delta) {
  const std::size_t n = b.size();
  const std::size_t dim = n ? b[0].size() : 0;
  std::vector<std::vector<std::int64_t>> u(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  auto dot = [&](const std::vector<long double>& x, const std::vector<long double>& y) {
    long double s = 0;
    for (std::size_t i = 0; i < dim; ++i) s += x[i] * y[i];
    return s;
  };
  RealMat bstar(n);
  std::vector<long double> bnorm(n);
  std::vector<std::vector<long double>> mu(n, std::vector<long double>(n, 0));
  auto gram_schmidt = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      bstar[i] = b[i];
      for (std::size_t j = 0; j < i; ++j) {
        mu[i][j] = dot(b[i], bstar[j]) / bnorm[j];
        for (std::size_t k = 0; k < dim; ++k) bstar[i][k] -= mu[i][j] * bstar[j][k];
      }
      bnorm[i] = dot(bstar[i], bstar[i]);
    }
  };
  gram_schmidt();
  std::size_t k = 1;
  std::size_t guard = 0;
  while (k < n) {
    if (++guard > 100000) throw_inconsistency("LLL reduction did not terminate");
    for (std::size_t jj = k; jj-- > 0;) {
      const long double q = std::roundl(mu[k][jj]);
      if (q == 0) continue;
      const auto qi = static_cast<std::int64_t>(q);
      for (std::size_t t = 0; t < dim; ++t) b[k][t] -= q * b[jj][t];
      for (std::size_t t = 0; t < n; ++t) u[k][t] -= qi * u[jj][t];
      gram_schmidt();
    }
    if (bnorm[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * bnorm[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      std::swap(u[k], u[k - 1]);
      gram_schmidt();
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return u;
}

namespace {

struct FinckePohst {
  std::size_t n;
  std::vector<std::vector<long double>> q;
  const RealMat& gram;
  long double bound;
  long double slack;
  const std::function<bool(const std::vector<std::int64_t>&, long double)>& visit;
  std::vector<std::int64_t> x;

  long double exact_norm() const {
    long double s = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s += gram[i][j] * x[i] * x[j];
    return s;
  }

  bool rec(std::size_t i, long double remaining) {
    long double c = 0;
    for (std::size_t j = i + 1; j < n; ++j) c -= q[i][j] * x[j];
    const long double r = std::sqrt(std::max<long double>(remaining, 0) / q[i][i]);
    const auto lo = static_cast<std::int64_t>(std::ceil(c - r - 1e-9L));
    const auto hi = static_cast<std::int64_t>(std::floor(c + r + 1e-9L));
    for (std::int64_t xi = lo; xi <= hi; ++xi) {
      const long double t = q[i][i] * (xi - c) * (xi - c);
      if (t > remaining + slack) continue;
      x[i] = xi;
      if (i == 0) {
        // Keep one of +-x: the last nonzero coordinate must be positive.
        std::size_t last = n;
        for (std::size_t j = n; j-- > 0;)
          if (x[j] != 0) {
            last = j;
            break;
          }
        if (last == n || x[last] < 0) continue;
        const long double nv = exact_norm();
        if (nv > bound + slack) continue;
        if (!visit(x, nv)) return false;
      } else if (!rec(i - 1, remaining - t)) {
        return false;
      }
    }
    x[i] = 0;
    return true;
  }
};

}  // namespace

void fincke_pohst(const RealMat& gram, long double bound,
                  const std::function<bool(const std::vector<std::int64_t>&, long double)>& visit) {
  const std::size_t n = gram.size();
  std::vector<std::vector<long double>> q(n, std::vector<long double>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q[i][j] = gram[i][j];
  // In-place decomposition: x^T G x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      q[j][i] = q[i][j];
      q[i][j] /= q[i][i];
    }
    for (std::size_t k = i + 1; k < n; ++k)
      for (std::size_t l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
    if (q[i][i] <= 0) throw_inconsistency("Fincke-Pohst: form is not positive definite");
  }
  FinckePohst fp{n, q, gram, bound, 1e-9L * std::max<long double>(1, bound), visit, std::vector<std::int64_t>(n, 0)};
  fp.rec(n - 1, bound + fp.slack);
}

}  // namespace qmpol
