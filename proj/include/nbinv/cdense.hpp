#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace nbinv {

using Complex = std::complex<double>;

// Plain dense complex matrix used for flattened representations and the
// brute-force oracle. Row-major storage.
class CDense {
public:
    CDense() = default;
    CDense(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

    static CDense identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& at(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    const std::vector<Complex>& data() const { return data_; }
    std::vector<Complex>& data() { return data_; }

    CDense block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const;
    void set_block(std::size_t i0, std::size_t j0, const CDense& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

CDense cd_mul(const CDense& a, const CDense& b);
CDense cd_add(const CDense& a, const CDense& b);
CDense cd_sub(const CDense& a, const CDense& b);
CDense cd_scale(Complex s, const CDense& a);
CDense cd_adjoint(const CDense& a);

double cd_max_abs(const CDense& a);
double cd_frobenius(const CDense& a);

// Gaussian elimination with partial pivoting. Throws
// SingularToWorkingPrecision when a pivot column is numerically zero.
CDense cd_invert(const CDense& a);

// Largest/smallest singular value and eigen helpers (Eigen-backed).
double cd_sigma_max(const CDense& a);
double cd_sigma_min(const CDense& a);
std::vector<Complex> cd_eigenvalues(const CDense& a);
// Smallest eigenvalue of a hermitian matrix.
double cd_min_eig_hermitian(const CDense& a);

} // namespace nbinv
