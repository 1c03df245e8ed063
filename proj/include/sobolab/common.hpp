#pragma once

#include <cmath>
#include <complex>
#include <type_traits>
#include <span>
#include <stdexcept>
#include <string>

namespace sobolab {

using Complex = std::complex<double>;

/// Raised when an argument lies outside the range where an operation is defined
/// (e.g. a Sobolev index outside the admissible interval).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Two fields or systems that must share a discretization do not.
class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input data that contradicts itself, e.g. an extension of Lu that disagrees
/// with Lu on interior test functions.
class InconsistentData : public std::runtime_error {
public:
    InconsistentData(const std::string& what, double defect)
        : std::runtime_error(what), defect_(defect) {}
    double defect() const noexcept { return defect_; }

private:
    double defect_;
};

/// A linear solve or quadrature that did not produce a usable answer.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& what, double condition_estimate = 0.0)
        : std::runtime_error(what), condition_estimate_(condition_estimate) {}
    double condition_estimate() const noexcept { return condition_estimate_; }

private:
    double condition_estimate_;
};

/// Neumaier-compensated accumulator; all norm reductions go through this.
template <typename T>
class CompensatedSum {
public:
    void add(T x) {
        T t = sum_ + x;
        if constexpr (std::is_same_v<T, double>) {
            if (std::abs(sum_) >= std::abs(x))
                comp_ += (sum_ - t) + x;
            else
                comp_ += (x - t) + sum_;
        } else {
            comp_ += component_correction(sum_, x, t);
        }
        sum_ = t;
    }
    T value() const { return sum_ + comp_; }

private:
    static T component_correction(T s, T x, T t) {
        auto corr = [](double a, double b, double c) {
            return std::abs(a) >= std::abs(b) ? (a - c) + b : (b - c) + a;
        };
        return T(corr(s.real(), x.real(), t.real()), corr(s.imag(), x.imag(), t.imag()));
    }
    T sum_{};
    T comp_{};
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace sobolab
