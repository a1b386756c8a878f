#include "election/diff/tensor.h"

#include <algorithm>
#include <sstream>

#include "election/errors.h"

namespace election::diff {

std::size_t ShapeSize(const Shape& shape) {
  std::size_t n = 1;
  for (auto e : shape) n *= e;
  return n;
}

std::string ShapeString(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)) {
  if (shape_.size() > 2) throw ContractError("Tensor: rank > 2 unsupported");
  values_.assign(ShapeSize(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (shape_.size() > 2) throw ContractError("Tensor: rank > 2 unsupported");
  if (values_.size() != ShapeSize(shape_)) {
    throw ContractError("Tensor: " + std::to_string(values_.size()) +
                        " values for shape " + ShapeString(shape_));
  }
}

Tensor Tensor::Scalar(double value) { return Tensor(Shape{}, std::vector<double>{value}); }

Tensor Tensor::Vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor(Shape{n}, std::move(values));
}

Tensor Tensor::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
  return Tensor(Shape{rows, cols}, std::move(values));
}

Tensor Tensor::OneHot(std::size_t size, std::size_t index) {
  if (index >= size) throw ContractError("OneHot: index out of range");
  Tensor t(Shape{size});
  t[index] = 1.0;
  return t;
}

double Tensor::item() const {
  if (values_.size() != 1) throw ContractError("item() on tensor of shape " + ShapeString(shape_));
  return values_[0];
}

std::vector<double> Tensor::Row(std::size_t r) const {
  const std::size_t c = cols();
  return {values_.begin() + static_cast<std::ptrdiff_t>(r * c),
          values_.begin() + static_cast<std::ptrdiff_t>((r + 1) * c)};
}

void Tensor::Fill(double value) { std::fill(values_.begin(), values_.end(), value); }

void Tensor::Accumulate(const Tensor& other) {
  if (other.size() != size()) {
    throw ContractError("Accumulate: " + ShapeString(other.shape_) + " into " + ShapeString(shape_));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
}

}  // namespace election::diff
