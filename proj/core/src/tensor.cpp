#include "acfleet/tensor.hpp"

#include <cmath>
#include <cstring>

#include "acfleet/errors.hpp"
#include "acfleet/rng.hpp"

namespace acfleet {

Tensor2::Tensor2(int rows, int cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
  if (data_.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols)) {
    throw ShapeMismatch("tensor: value count does not match shape");
  }
}

void Tensor2::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void Tensor2::require_finite(const char* what) const {
  for (double v : data_) {
    if (!std::isfinite(v)) {
      throw NonFiniteResult(std::string("non-finite value in ") + what);
    }
  }
}

double Tensor2::checksum() const {
  uint64_t h = 0x9e3779b97f4a7c15ull;
  for (double v : data_) {
    uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    h = splitmix64(h ^ bits);
  }
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

namespace {
void check(bool ok, const char* what) {
  if (!ok) throw ShapeMismatch(what);
}
}  // namespace

void matmul(const Tensor2& a, const Tensor2& b, Tensor2& out) {
  check(a.cols() == b.rows(), "matmul: inner dims differ");
  check(out.rows() == a.rows() && out.cols() == b.cols(), "matmul: bad output shape");
  out.fill(0.0);
  const int m = a.rows(), k = a.cols(), n = b.cols();
  for (int i = 0; i < m; ++i) {
    const double* arow = a.row(i);
    double* orow = out.row(i);
    for (int p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = b.row(p);
      for (int j = 0; j < n; ++j) orow[j] += av * brow[j];
    }
  }
}

void matmul_tn(const Tensor2& a, const Tensor2& b, Tensor2& out) {
  check(a.rows() == b.rows(), "matmul_tn: inner dims differ");
  check(out.rows() == a.cols() && out.cols() == b.cols(), "matmul_tn: bad output shape");
  out.fill(0.0);
  const int k = a.rows(), m = a.cols(), n = b.cols();
  for (int p = 0; p < k; ++p) {
    const double* arow = a.row(p);
    const double* brow = b.row(p);
    for (int i = 0; i < m; ++i) {
      const double av = arow[i];
      if (av == 0.0) continue;
      double* orow = out.row(i);
      for (int j = 0; j < n; ++j) orow[j] += av * brow[j];
    }
  }
}

void matmul_nt(const Tensor2& a, const Tensor2& b, Tensor2& out) {
  check(a.cols() == b.cols(), "matmul_nt: inner dims differ");
  check(out.rows() == a.rows() && out.cols() == b.rows(), "matmul_nt: bad output shape");
  const int m = a.rows(), k = a.cols(), n = b.rows();
  for (int i = 0; i < m; ++i) {
    const double* arow = a.row(i);
    double* orow = out.row(i);
    for (int j = 0; j < n; ++j) {
      const double* brow = b.row(j);
      double acc = 0.0;
      for (int p = 0; p < k; ++p) acc += arow[p] * brow[p];
      orow[j] = acc;
    }
  }
}

void add_inplace(Tensor2& a, const Tensor2& b) {
  check(a.same_shape(b), "add: shapes differ");
  double* ap = a.data();
  const double* bp = b.data();
  for (size_t i = 0; i < a.size(); ++i) ap[i] += bp[i];
}

void axpy(double alpha, const Tensor2& x, Tensor2& y) {
  check(x.same_shape(y), "axpy: shapes differ");
  double* yp = y.data();
  const double* xp = x.data();
  for (size_t i = 0; i < x.size(); ++i) yp[i] += alpha * xp[i];
}

void scale_inplace(Tensor2& a, double s) {
  double* ap = a.data();
  for (size_t i = 0; i < a.size(); ++i) ap[i] *= s;
}

}  // namespace acfleet
