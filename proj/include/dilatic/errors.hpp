#ifndef DILATIC_ERRORS_HPP
#define DILATIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dilatic {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotHermitian : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

struct NotPositive : Error {
    using Error::Error;
};

struct NotContraction : Error {
    double norm;
    explicit NotContraction(double measured)
        : Error("matrix is not a contraction, operator norm = " + std::to_string(measured)),
          norm(measured) {}
};

struct NotUnitary : Error {
    using Error::Error;
};

struct NotComplete : Error {
    double residual;
    explicit NotComplete(double r)
        : Error("POVM elements do not sum to identity, completeness residual = " + std::to_string(r)),
          residual(r) {}
};

struct StageInfeasible : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct ZeroOutcome : Error {
    using Error::Error;
};

struct KrausBoundViolated : Error {
    using Error::Error;
};

struct DegenerateInput : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

} // namespace dilatic

#endif
