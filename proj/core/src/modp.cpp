#include "modp.hpp"

#include <utility>

#include <tuple>

#include "qmpol/errors.hpp"

namespace qmpol::modp {

std::int64_t pow(std::int64_t a, std::uint64_t e, std::int64_t p) {
  __int128 r = 1, b = reduce(a, p);
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<std::int64_t>(r);
}

std::int64_t inv(std::int64_t a, std::int64_t p) {
  std::int64_t g = p, x = 0, x1 = 1, r = reduce(a, p);
  while (r) {
    const std::int64_t q = g / r;
    std::tie(g, r) = std::make_pair(r, g - q * r);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw_inconsistency("modular inverse of a non-unit");
  return reduce(x, p);
}

namespace {

// In-place RREF; returns pivot columns.
std::vector<std::size_t> rref(Mat& m, std::size_t ncols, std::int64_t p) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    const std::int64_t iv = inv(m[row][col], p);
    for (auto& v : m[row]) v = static_cast<std::int64_t>(static_cast<__int128>(v) * iv % p);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      const std::int64_t f = m[r][col];
      for (std::size_t c = 0; c < ncols; ++c)
        m[r][c] = reduce(m[r][c] - static_cast<std::int64_t>(static_cast<__int128>(f) * m[row][c] % p), p);
    }
    pivots.push_back(col);
    ++row;
  }
  m.resize(row);
  return pivots;
}

}  // namespace

Mat row_basis(Mat rows, std::int64_t p) {
  if (rows.empty()) return rows;
  const std::size_t ncols = rows[0].size();
  for (auto& r : rows)
    for (auto& v : r) v = reduce(v, p);
  rref(rows, ncols, p);
  return rows;
}

Mat left_kernel(const Mat& m, std::size_t ncols, std::int64_t p) {
  // x * m = 0  <=>  m^T x^T = 0: right kernel of the transpose.
  const std::size_t n = m.size();
  Mat t(ncols, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < ncols; ++j) t[j][i] = reduce(m[i][j], p);
  const auto pivots = rref(t, n, p);
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;
  Mat out;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    Vec x(n, 0);
    x[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = reduce(-t[r][free], p);
    out.push_back(std::move(x));
  }
  return out;
}

Mat preimage(const Mat& a, const Mat& r, std::size_t ncols, std::int64_t p) {
  Mat stacked = a;
  stacked.insert(stacked.end(), r.begin(), r.end());
  const Mat ker = left_kernel(stacked, ncols, p);
  Mat xs;
  for (const auto& k : ker) xs.emplace_back(k.begin(), k.begin() + static_cast<std::ptrdiff_t>(a.size()));
  return row_basis(xs, p);
}

Mat mat_mul(const Mat& a, const Mat& b, std::int64_t p) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Mat out(n, Vec(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j)
        out[i][j] = static_cast<std::int64_t>((out[i][j] + static_cast<__int128>(a[i][l]) * b[l][j]) % p);
    }
  return out;
}

}  // namespace qmpol::modp
