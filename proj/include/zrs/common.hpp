#pragma once

#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace zrs {

using dcomplex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr dcomplex I{0.0, 1.0};

// Base of every error raised by the library. Each derived type carries the
// name used in reports and by the CLI exit-code mapping.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define ZRS_DEFINE_ERROR(Name)                                               \
    class Name : public Error {                                              \
    public:                                                                  \
        using Error::Error;                                                  \
        const char* kind() const noexcept override { return #Name; }         \
    };

ZRS_DEFINE_ERROR(DuplicatePoint)
ZRS_DEFINE_ERROR(BadParams)
ZRS_DEFINE_ERROR(ZeroDistance)
ZRS_DEFINE_ERROR(NonPositiveGram)
ZRS_DEFINE_ERROR(BadOrder)
ZRS_DEFINE_ERROR(GridMismatch)
ZRS_DEFINE_ERROR(FitUnstable)
ZRS_DEFINE_ERROR(TailNotContractive)

#undef ZRS_DEFINE_ERROR

// Raised when a dense inversion is numerically singular. The reciprocal
// condition estimate and, when known, the spectral point are attached.
class SingularMatrix : public Error {
public:
    SingularMatrix(const std::string& what, double rcond,
                   std::optional<double> lambda = std::nullopt)
        : Error(what), rcond_(rcond), lambda_(lambda) {}
    const char* kind() const noexcept override { return "SingularMatrix"; }
    double rcond() const noexcept { return rcond_; }
    std::optional<double> lambda() const noexcept { return lambda_; }

private:
    double rcond_;
    std::optional<double> lambda_;
};

class SingularSchurComplement : public SingularMatrix {
public:
    using SingularMatrix::SingularMatrix;
    const char* kind() const noexcept override { return "SingularSchurComplement"; }
};

/// Largest singular value.
double spectral_norm(const CMatrix& m);
double spectral_norm(const RMatrix& m);

/// ||A|| * ||A^-1|| from the singular values; infinity if A is singular.
double condition_number(const CMatrix& m);

/// Inverse through partial-pivot LU. Throws SingularMatrix when the
/// reciprocal condition estimate falls below `min_rcond`.
CMatrix checked_inverse(const CMatrix& m, double min_rcond = 1e-14,
                        const char* what = "matrix");

/// Hermitian part (A - A^H)/(2i), i.e. the "imaginary part" of a matrix as a form.
CMatrix imag_part(const CMatrix& m);

}  // namespace zrs
