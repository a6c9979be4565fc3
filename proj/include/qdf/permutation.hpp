#pragma once

#include <algorithm>
#include <vector>

#include "qdf/errors.hpp"

namespace qdf {

// A bijection on {0..n-1}, stored as its image sequence.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    const int n = static_cast<int>(images_.size());
    if (n == 0) throw bad_parameters("permutation must have positive order");
    std::vector<char> seen(n, 0);
    for (int x : images_) {
      if (x < 0 || x >= n) throw bad_parameters("permutation image out of range");
      if (seen[x]) throw bad_parameters("permutation image repeated");
      seen[x] = 1;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> im(n);
    for (int i = 0; i < n; ++i) im[i] = i;
    return Permutation(std::move(im));
  }

  // y -> the unique x with images[x] == y
  Permutation inverse() const {
    std::vector<int> inv(images_.size());
    for (int i = 0; i < order(); ++i) inv[images_[i]] = i;
    return Permutation(std::move(inv));
  }

  int order() const { return static_cast<int>(images_.size()); }
  int operator()(int x) const { return images_[x]; }
  const std::vector<int>& images() const { return images_; }

  bool is_identity() const {
    for (int i = 0; i < order(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  friend bool operator==(const Permutation& a, const Permutation& b) = default;

 private:
  std::vector<int> images_;
};

}  // namespace qdf
