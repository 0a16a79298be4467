#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <type_traits>
#include <vector>

namespace rollgeo {

// Dense rank-k tensor with all indices running over 0..n-1, row-major.
// Sized for the n <= 6 regime; no sparsity.
class Tensor {
public:
    Tensor() = default;
    Tensor(int rank, int n)
        : rank_(rank), n_(n), data_(pow_(n, rank), 0.0) {}

    int rank() const { return rank_; }
    int dim() const { return n_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    template <class... I>
    double& operator()(I... idx) {
        static_assert((std::is_integral_v<I> && ...));
        assert(sizeof...(idx) == static_cast<std::size_t>(rank_));
        return data_[flat_(static_cast<int>(idx)...)];
    }
    template <class... I>
    double operator()(I... idx) const {
        assert(sizeof...(idx) == static_cast<std::size_t>(rank_));
        return data_[flat_(static_cast<int>(idx)...)];
    }

    double& at(const std::vector<int>& idx) {
        return data_[flatv_(idx)];
    }
    double at(const std::vector<int>& idx) const {
        return data_[flatv_(idx)];
    }

    double maxAbs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    Tensor& operator+=(const Tensor& o) {
        assert(o.size() == size());
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Tensor& operator-=(const Tensor& o) {
        assert(o.size() == size());
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Tensor& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }

private:
    template <class... I>
    std::size_t flat_(int first, I... rest) const {
        std::size_t f = static_cast<std::size_t>(first);
        ((f = f * n_ + static_cast<std::size_t>(rest)), ...);
        return f;
    }
    std::size_t flatv_(const std::vector<int>& idx) const {
        assert(idx.size() == static_cast<std::size_t>(rank_));
        std::size_t f = 0;
        for (int i : idx) f = f * n_ + static_cast<std::size_t>(i);
        return f;
    }
    static std::size_t pow_(int n, int k) {
        std::size_t r = 1;
        for (int i = 0; i < k; ++i) r *= static_cast<std::size_t>(n);
        return r;
    }

    int rank_ = 0;
    int n_ = 0;
    std::vector<double> data_;
};

}  // namespace rollgeo
