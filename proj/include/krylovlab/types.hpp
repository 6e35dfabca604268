#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace krylovlab {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using MatrixXr = Eigen::MatrixXd;
using VectorXc = Eigen::VectorXcd;
using VectorXr = Eigen::VectorXd;

// Computational basis state of an L-site chain. Site 1 is the most
// significant bit; bit value 0 is spin up (sigma^z = +1).
using BasisState = std::uint64_t;

}  // namespace krylovlab
