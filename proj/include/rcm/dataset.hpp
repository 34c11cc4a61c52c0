#pragma once

#include <vector>

#include "rcm/errors.hpp"
#include "rcm/linalg.hpp"

namespace rcm {

/// Labeled samples (x_i, y_i) with y_i in {+1, -1}.
class Dataset {
 public:
  Dataset() = default;

  /// Throws DimensionError on mixed dimensions, InvalidParameter on labels
  /// outside {+1, -1}, InvalidMatrix on non-finite features.
  Dataset(std::vector<Vector> xs, std::vector<int> ys);

  void add(Vector x, int y);

  int size() const { return static_cast<int>(x_.size()); }
  Eigen::Index dim() const { return x_.empty() ? 0 : x_.front().size(); }
  const Vector& x(int i) const { return x_[i]; }
  int y(int i) const { return y_[i]; }
  const std::vector<Vector>& points() const { return x_; }
  const std::vector<int>& labels() const { return y_; }

  int count(int label) const;
  std::vector<int> indices_of(int label) const;
  std::vector<Vector> points_of(int label) const;

  /// Throws EmptyClass unless both classes have at least one sample.
  void require_both_classes() const;

 private:
  std::vector<Vector> x_;
  std::vector<int> y_;
};

}  // namespace rcm
