#ifndef ELECTION_DIFF_TENSOR_H_
#define ELECTION_DIFF_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace election::diff {

using Shape = std::vector<std::size_t>;

std::size_t ShapeSize(const Shape& shape);
std::string ShapeString(const Shape& shape);

// Dense row-major array of doubles with rank 0, 1 or 2.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> values);

  static Tensor Scalar(double value);
  static Tensor Vector(std::vector<double> values);
  static Tensor Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  static Tensor OneHot(std::size_t size, std::size_t index);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty() && shape_.empty(); }
  // Rank-1 tensors are treated as a column: rows() == size(), cols() == 1.
  std::size_t rows() const { return shape_.empty() ? 1 : shape_[0]; }
  std::size_t cols() const { return shape_.size() < 2 ? 1 : shape_[1]; }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& at(std::size_t r, std::size_t c) { return values_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }
  double item() const;

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::vector<double> Row(std::size_t r) const;

  bool SameShape(const Tensor& other) const { return shape_ == other.shape_; }
  void Fill(double value);
  // this += other (shapes must agree).
  void Accumulate(const Tensor& other);

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<double> values_;
};

}  // namespace election::diff

#endif  // ELECTION_DIFF_TENSOR_H_
