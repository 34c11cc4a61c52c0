#include "rcm/dataset.hpp"

#include <algorithm>

namespace rcm {

Dataset::Dataset(std::vector<Vector> xs, std::vector<int> ys) {
  if (xs.size() != ys.size())
    throw DimensionError("Dataset: sample/label count mismatch");
  for (std::size_t i = 0; i < xs.size(); ++i) add(std::move(xs[i]), ys[i]);
}

void Dataset::add(Vector x, int y) {
  if (y != 1 && y != -1)
    throw InvalidParameter("Dataset: label must be +1 or -1");
  if (!x.allFinite())
    throw InvalidMatrix("Dataset: sample has non-finite entries");
  if (!x_.empty() && x.size() != x_.front().size())
    throw DimensionError("Dataset: inconsistent sample dimension");
  x_.push_back(std::move(x));
  y_.push_back(y);
}

int Dataset::count(int label) const {
  return static_cast<int>(std::count(y_.begin(), y_.end(), label));
}

std::vector<int> Dataset::indices_of(int label) const {
  std::vector<int> idx;
  for (int i = 0; i < size(); ++i)
    if (y_[i] == label) idx.push_back(i);
  return idx;
}

std::vector<Vector> Dataset::points_of(int label) const {
  std::vector<Vector> pts;
  for (int i = 0; i < size(); ++i)
    if (y_[i] == label) pts.push_back(x_[i]);
  return pts;
}

void Dataset::require_both_classes() const {
  if (count(+1) == 0) throw EmptyClass("Dataset: no samples with label +1");
  if (count(-1) == 0) throw EmptyClass("Dataset: no samples with label -1");
}

}  // namespace rcm
