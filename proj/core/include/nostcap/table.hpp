#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace nostcap {

// Dense row-major 2-D array. Probability tables in this library are small,
// so a flat vector with computed strides is all we need.
template <typename T>
class Table2 {
 public:
  Table2() = default;
  Table2(int d0, int d1, T fill = T{})
      : d0_(d0),
        d1_(d1),
        v_(static_cast<std::size_t>(d0) * static_cast<std::size_t>(d1), fill) {
    assert(d0 >= 0 && d1 >= 0);
  }

  T& operator()(int i, int j) {
    assert(i >= 0 && i < d0_ && j >= 0 && j < d1_);
    return v_[static_cast<std::size_t>(i) * d1_ + j];
  }
  const T& operator()(int i, int j) const {
    assert(i >= 0 && i < d0_ && j >= 0 && j < d1_);
    return v_[static_cast<std::size_t>(i) * d1_ + j];
  }

  int dim0() const { return d0_; }
  int dim1() const { return d1_; }
  std::size_t size() const { return v_.size(); }
  std::vector<T>& data() { return v_; }
  const std::vector<T>& data() const { return v_; }

  friend bool operator==(const Table2&, const Table2&) = default;

 private:
  int d0_ = 0;
  int d1_ = 0;
  std::vector<T> v_;
};

// Dense row-major 3-D array.
template <typename T>
class Table3 {
 public:
  Table3() = default;
  Table3(int d0, int d1, int d2, T fill = T{})
      : d0_(d0),
        d1_(d1),
        d2_(d2),
        v_(static_cast<std::size_t>(d0) * static_cast<std::size_t>(d1) *
               static_cast<std::size_t>(d2),
           fill) {
    assert(d0 >= 0 && d1 >= 0 && d2 >= 0);
  }

  T& operator()(int i, int j, int k) {
    assert(i >= 0 && i < d0_ && j >= 0 && j < d1_ && k >= 0 && k < d2_);
    return v_[(static_cast<std::size_t>(i) * d1_ + j) * d2_ + k];
  }
  const T& operator()(int i, int j, int k) const {
    assert(i >= 0 && i < d0_ && j >= 0 && j < d1_ && k >= 0 && k < d2_);
    return v_[(static_cast<std::size_t>(i) * d1_ + j) * d2_ + k];
  }

  int dim0() const { return d0_; }
  int dim1() const { return d1_; }
  int dim2() const { return d2_; }
  std::size_t size() const { return v_.size(); }
  std::vector<T>& data() { return v_; }
  const std::vector<T>& data() const { return v_; }

  friend bool operator==(const Table3&, const Table3&) = default;

 private:
  int d0_ = 0;
  int d1_ = 0;
  int d2_ = 0;
  std::vector<T> v_;
};

}  // namespace nostcap
