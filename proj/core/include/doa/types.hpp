#ifndef DOA_TYPES_HPP
#define DOA_TYPES_HPP

#include <complex>

#include <Eigen/Core>

namespace doa {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

}  // namespace doa

#endif  // DOA_TYPES_HPP
