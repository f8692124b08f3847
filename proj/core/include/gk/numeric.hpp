// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

namespace gk {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// e(x) = exp(2 pi i x)
inline cplx e(double x) {
    double r = x - std::floor(x);
    return {std::cos(two_pi * r), std::sin(two_pi * r)};
}

// e(num/den) for an exact fraction, reduced first so the angle stays in [0, 2pi).
inline cplx e_frac(std::int64_t num, std::int64_t den) {
    std::int64_t r = num % den;
    if (r < 0) r += den;
    return e(double(r) / double(den));
}

// Neumaier summation of complex terms. The error estimate bounds the rounding
// left after compensation: a few ulps of the absolute sum.
class CompensatedSum {
public:
    void add(cplx x) {
        add_part(sum_re_, comp_re_, x.real());
        add_part(sum_im_, comp_im_, x.imag());
        abs_total_ += std::abs(x);
        ++count_;
    }
    cplx value() const { return {sum_re_ + comp_re_, sum_im_ + comp_im_}; }
    double error() const {
        return 4.0 * std::numeric_limits<double>::epsilon() * (abs_total_ + std::abs(value())) +
               double(count_) * 1e-17;
    }
    std::int64_t count() const { return count_; }
    void merge(const CompensatedSum& o) {
        add_part(sum_re_, comp_re_, o.sum_re_);
        add_part(sum_re_, comp_re_, o.comp_re_);
        add_part(sum_im_, comp_im_, o.sum_im_);
        add_part(sum_im_, comp_im_, o.comp_im_);
        abs_total_ += o.abs_total_;
        count_ += o.count_;
    }

private:
    static void add_part(double& s, double& c, double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double sum_re_ = 0, comp_re_ = 0, sum_im_ = 0, comp_im_ = 0;
    double abs_total_ = 0;
    std::int64_t count_ = 0;
};

// Table of e(k/n), k = 0..n-1.
class RootTable {
public:
    explicit RootTable(std::int64_t n) : n_(n), w_(static_cast<std::size_t>(n)) {
        for (std::int64_t k = 0; k < n; ++k) w_[k] = e(double(k) / double(n));
    }
    std::int64_t size() const { return n_; }
    const cplx& operator[](std::int64_t k) const { return w_[static_cast<std::size_t>(k)]; }
    const cplx& at_mod(std::int64_t k) const {
        std::int64_t r = k % n_;
        return w_[static_cast<std::size_t>(r < 0 ? r + n_ : r)];
    }

private:
    std::int64_t n_;
    std::vector<cplx> w_;
};

}  // namespace gk
