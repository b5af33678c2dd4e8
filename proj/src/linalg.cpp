#include "zrs/common.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace zrs {

double spectral_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

double spectral_norm(const RMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<RMatrix> svd(m);
    return svd.singularValues()(0);
}

double condition_number(const CMatrix& m) {
    if (m.size() == 0) return 1.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / smin;
}

CMatrix checked_inverse(const CMatrix& m, double min_rcond, const char* what) {
    Eigen::PartialPivLU<CMatrix> lu(m);
    double rc = lu.rcond();
    if (std::isnan(rc)) rc = 0.0;
    if (!(rc >= min_rcond)) {
        std::ostringstream os;
        os << what << " is numerically singular (rcond estimate " << rc << ")";
        throw SingularMatrix(os.str(), rc);
    }
    return lu.inverse();
}

CMatrix imag_part(const CMatrix& m) {
    return (m - m.adjoint()) / (2.0 * I);
}

}  // namespace zrs
