#pragma once

#include <stdexcept>
#include <string>

namespace ftf {

// Each error category maps onto one CLI exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 2; }
};

// Malformed curve / pair spec input.
class SpecError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 1; }
};

// Numerical or geometric failure inside an analysis (lift diverged, non-generic
// curve, singular parallel curve, ...).
class AnalysisError : public Error {
public:
    using Error::Error;
};

// Empty mu-admissibility window or a violated pair precondition.
class AdmissibilityError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
};

class IoError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 4; }
};

}  // namespace ftf
