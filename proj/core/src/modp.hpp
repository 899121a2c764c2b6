#pragma once

// Dense linear algebra over F_p for small matrices (p < 2^31).

#include <cstdint>
#include <vector>

namespace qmpol::modp {

using Vec = std::vector<std::int64_t>;
using Mat = std::vector<Vec>;

inline std::int64_t reduce(std::int64_t a, std::int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}

std::int64_t inv(std::int64_t a, std::int64_t p);
std::int64_t pow(std::int64_t a, std::uint64_t e, std::int64_t p);

/// Reduced row echelon basis of the row space.
Mat row_basis(Mat rows, std::int64_t p);

/// Basis of {x : x * m = 0}, x a row vector of length m.size().
Mat left_kernel(const Mat& m, std::size_t ncols, std::int64_t p);

/// Basis of {x : x * a lies in the row space of r}.
Mat preimage(const Mat& a, const Mat& r, std::size_t ncols, std::int64_t p);

Mat mat_mul(const Mat& a, const Mat& b, std::int64_t p);

}  // namespace qmpol::modp
