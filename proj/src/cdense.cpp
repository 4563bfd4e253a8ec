#include "nbinv/cdense.hpp"

#include "nbinv/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace nbinv {

CDense CDense::identity(std::size_t n) {
    CDense m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Complex{1.0, 0.0};
    return m;
}

CDense CDense::block(std::size_t i0, std::size_t j0, std::size_t r,
                     std::size_t c) const {
    CDense out(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) out.at(i, j) = at(i0 + i, j0 + j);
    return out;
}

void CDense::set_block(std::size_t i0, std::size_t j0, const CDense& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) at(i0 + i, j0 + j) = b.at(i, j);
}

CDense cd_mul(const CDense& a, const CDense& b) {
    if (a.cols() != b.rows())
        raise(ErrorCode::DimensionMismatch, "cd_mul: inner dimensions differ");
    CDense out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t l = 0; l < a.cols(); ++l) {
            Complex ail = a.at(i, l);
            if (ail == Complex{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out.at(i, j) += ail * b.at(l, j);
        }
    }
    return out;
}

CDense cd_add(const CDense& a, const CDense& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        raise(ErrorCode::DimensionMismatch, "cd_add: shape mismatch");
    CDense out(a.rows(), a.cols());
    for (std::size_t i = 0; i < out.data().size(); ++i)
        out.data()[i] = a.data()[i] + b.data()[i];
    return out;
}

CDense cd_sub(const CDense& a, const CDense& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        raise(ErrorCode::DimensionMismatch, "cd_sub: shape mismatch");
    CDense out(a.rows(), a.cols());
    for (std::size_t i = 0; i < out.data().size(); ++i)
        out.data()[i] = a.data()[i] - b.data()[i];
    return out;
}

CDense cd_scale(Complex s, const CDense& a) {
    CDense out(a.rows(), a.cols());
    for (std::size_t i = 0; i < out.data().size(); ++i)
        out.data()[i] = s * a.data()[i];
    return out;
}

CDense cd_adjoint(const CDense& a) {
    CDense out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out.at(j, i) = std::conj(a.at(i, j));
    return out;
}

double cd_max_abs(const CDense& a) {
    double m = 0.0;
    for (const auto& v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

double cd_frobenius(const CDense& a) {
    double s = 0.0;
    for (const auto& v : a.data()) s += std::norm(v);
    return std::sqrt(s);
}

CDense cd_invert(const CDense& a) {
    if (a.rows() != a.cols())
        raise(ErrorCode::DimensionMismatch, "cd_invert: matrix not square");
    const std::size_t n = a.rows();
    CDense work = a;
    CDense inv = CDense::identity(n);
    const double scale = std::max(cd_max_abs(a), 1.0);

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(work.at(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            double v = std::abs(work.at(r, col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best <= 1e-14 * scale)
            raise(ErrorCode::SingularToWorkingPrecision,
                  "cd_invert: pivot below working precision");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(work.at(pivot, j), work.at(col, j));
                std::swap(inv.at(pivot, j), inv.at(col, j));
            }
        }
        const Complex d = work.at(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            work.at(col, j) /= d;
            inv.at(col, j) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const Complex f = work.at(r, col);
            if (f == Complex{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < n; ++j) {
                work.at(r, j) -= f * work.at(col, j);
                inv.at(r, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

namespace {

Eigen::MatrixXcd to_eigen(const CDense& a) {
    Eigen::MatrixXcd m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a.at(i, j);
    return m;
}

} // namespace

double cd_sigma_max(const CDense& a) {
    if (a.rows() == 0) return 0.0;
    if (a.rows() == 1 && a.cols() == 1) return std::abs(a.at(0, 0));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a));
    return svd.singularValues()(0);
}

double cd_sigma_min(const CDense& a) {
    if (a.rows() == 0) return 0.0;
    if (a.rows() == 1 && a.cols() == 1) return std::abs(a.at(0, 0));
    if (a.rows() <= 16) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a));
        return svd.singularValues()(svd.singularValues().size() - 1);
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(to_eigen(a));
    return svd.singularValues()(svd.singularValues().size() - 1);
}

std::vector<Complex> cd_eigenvalues(const CDense& a) {
    if (a.rows() != a.cols())
        raise(ErrorCode::DimensionMismatch, "cd_eigenvalues: matrix not square");
    if (a.rows() == 1) return {a.at(0, 0)};
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(a), false);
    std::vector<Complex> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) out[i] = es.eigenvalues()(i);
    return out;
}

double cd_min_eig_hermitian(const CDense& a) {
    if (a.rows() != a.cols())
        raise(ErrorCode::DimensionMismatch, "cd_min_eig_hermitian: not square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(a),
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Ok: return "ok";
        case ErrorCode::Parse: return "parse_error";
        case ErrorCode::Io: return "io_error";
        case ErrorCode::Config: return "config_invalid";
        case ErrorCode::DimensionMismatch: return "dimension_mismatch";
        case ErrorCode::DegreeMismatch: return "degree_mismatch";
        case ErrorCode::GridMismatch: return "grid_mismatch";
        case ErrorCode::NotConvergent: return "not_convergent";
        case ErrorCode::Overflow: return "overflow";
        case ErrorCode::NotSupported: return "not_supported";
        case ErrorCode::NoInvolution: return "no_involution";
        case ErrorCode::NotHermitian: return "not_hermitian";
        case ErrorCode::NotInvertible: return "not_invertible";
        case ErrorCode::ZeroScalarPart: return "zero_scalar_part";
        case ErrorCode::SingularToWorkingPrecision:
            return "singular_to_working_precision";
        case ErrorCode::DiagonalNotInvertible: return "diagonal_not_invertible";
        case ErrorCode::PivotNotUnit: return "pivot_not_unit";
        case ErrorCode::NotInvertibleInAmbient: return "not_invertible_in_ambient";
        case ErrorCode::MaskViolation: return "mask_violation";
        case ErrorCode::ApproximationStalled: return "approximation_stalled";
        case ErrorCode::PropertyFailed: return "property_failed";
    }
    return "unknown";
}

} // namespace nbinv
