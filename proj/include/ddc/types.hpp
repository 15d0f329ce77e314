#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace ddc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Base for everything this library throws. Catch this to map failures to CLI
// exit codes without enumerating the concrete types.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonSquare : Error {
    using Error::Error;
};
struct NotSymmetric : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct ConvergenceFailure : Error {
    using Error::Error;
};
struct NotHurwitz : Error {
    using Error::Error;
};
struct SingularSystem : Error {
    using Error::Error;
};
struct UnstablePoleRequested : Error {
    using Error::Error;
};
struct NonConjugateSet : Error {
    using Error::Error;
};
struct IterationDivergence : Error {
    using Error::Error;
};
struct NotStabilizing : Error {
    using Error::Error;
};
struct SignMismatch : Error {
    using Error::Error;
};
struct StepTooLarge : Error {
    using Error::Error;
};
struct EmptyInput : Error {
    using Error::Error;
};
struct NonFiniteState : Error {
    using Error::Error;
};
struct UnstableAtCap : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace ddc
