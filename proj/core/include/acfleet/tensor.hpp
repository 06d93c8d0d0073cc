#pragma once

#include <span>
#include <vector>

namespace acfleet {

/// Dense row-major matrix of doubles. Everything trains in 64-bit floats;
/// determinism and gradient-check fidelity matter more than speed here.
class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(int rows, int cols) : rows_(rows), cols_(cols),
      data_(static_cast<size_t>(rows) * static_cast<size_t>(cols), 0.0) {}
  Tensor2(int rows, int cols, std::vector<double> values);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool same_shape(const Tensor2& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  double& operator()(int r, int c) {
    return data_[static_cast<size_t>(r) * static_cast<size_t>(cols_) + static_cast<size_t>(c)];
  }
  double operator()(int r, int c) const {
    return data_[static_cast<size_t>(r) * static_cast<size_t>(cols_) + static_cast<size_t>(c)];
  }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row(int r) { return data_.data() + static_cast<size_t>(r) * static_cast<size_t>(cols_); }
  const double* row(int r) const {
    return data_.data() + static_cast<size_t>(r) * static_cast<size_t>(cols_);
  }

  void fill(double v);
  void require_finite(const char* what) const;  // throws NonFiniteResult
  double checksum() const;                      // order-stable content hash

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// out = a * b            (m,k) x (k,n) -> (m,n)
void matmul(const Tensor2& a, const Tensor2& b, Tensor2& out);
// out = a^T * b          (k,m) x (k,n) -> (m,n)
void matmul_tn(const Tensor2& a, const Tensor2& b, Tensor2& out);
// out = a * b^T          (m,k) x (n,k) -> (m,n)
void matmul_nt(const Tensor2& a, const Tensor2& b, Tensor2& out);

void add_inplace(Tensor2& a, const Tensor2& b);          // a += b
void axpy(double alpha, const Tensor2& x, Tensor2& y);   // y += alpha * x
void scale_inplace(Tensor2& a, double s);

}  // namespace acfleet
