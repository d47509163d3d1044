#ifndef VEGFLOW_FIELD_HPP_
#define VEGFLOW_FIELD_HPP_

#include <cstddef>
#include <vector>

namespace vegflow {

// Dense 2D scalar field, index (i, j) with i the fast (y1) direction.
class Field2D {
 public:
  Field2D() = default;
  Field2D(int n1, int n2, double value = 0.0)
      : n1_(n1), n2_(n2), data_(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2), value) {}

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(int i, int j) { return data_[idx(i, j)]; }
  double operator()(int i, int j) const { return data_[idx(i, j)]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const Field2D& o) const { return n1_ == o.n1_ && n2_ == o.n2_; }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n1_) + static_cast<std::size_t>(i);
  }

  int n1_ = 0;
  int n2_ = 0;
  std::vector<double> data_;
};

// Second-order finite differences on uniform grids. Interior points use
// central stencils, boundary points one-sided stencils of the same order.
// axis 0 differentiates along i (y1), axis 1 along j (y2).
Field2D fd_derivative(const Field2D& f, int axis, double spacing);
Field2D fd_second_derivative(const Field2D& f, int axis, double spacing);

}  // namespace vegflow

#endif  // VEGFLOW_FIELD_HPP_
