#pragma once

#include <stdexcept>
#include <string>

namespace ordwalk {

// Exit-code contract shared with the CLI: 2 invalid input, 3 capability,
// 5 numerical consistency.
class Error : public std::runtime_error {
public:
    Error(std::string msg, int exit_code)
        : std::runtime_error(std::move(msg)), exit_code_(exit_code) {}
    int exit_code() const { return exit_code_; }

private:
    int exit_code_;
};

class InvalidInputError : public Error {
public:
    explicit InvalidInputError(const std::string& msg) : Error(msg, 2) {}
};

class DimensionError : public InvalidInputError {
public:
    explicit DimensionError(const std::string& msg) : InvalidInputError(msg) {}
};

class DomainError : public InvalidInputError {
public:
    explicit DomainError(const std::string& msg) : InvalidInputError(msg) {}
};

class RegimeError : public InvalidInputError {
public:
    explicit RegimeError(const std::string& msg) : InvalidInputError(msg) {}
};

class AtomError : public InvalidInputError {
public:
    explicit AtomError(const std::string& msg) : InvalidInputError(msg) {}
};

class CapabilityError : public Error {
public:
    explicit CapabilityError(const std::string& msg) : Error(msg, 3) {}
};

class NumericalConsistencyError : public Error {
public:
    explicit NumericalConsistencyError(const std::string& msg) : Error(msg, 5) {}
};

class SingularityError : public NumericalConsistencyError {
public:
    SingularityError(const std::string& msg, double condition_estimate)
        : NumericalConsistencyError(msg + " (condition estimate " +
                                    std::to_string(condition_estimate) + ")"),
          condition_estimate_(condition_estimate) {}
    double condition_estimate() const { return condition_estimate_; }

private:
    double condition_estimate_;
};

class AccuracyError : public NumericalConsistencyError {
public:
    AccuracyError(const std::string& msg, double coarse, double fine)
        : NumericalConsistencyError(msg + " (coarse " + std::to_string(coarse) +
                                    ", fine " + std::to_string(fine) + ")"),
          coarse_(coarse), fine_(fine) {}
    double coarse() const { return coarse_; }
    double fine() const { return fine_; }

private:
    double coarse_, fine_;
};

class VerificationError : public Error {
public:
    explicit VerificationError(const std::string& msg) : Error(msg, 4) {}
};

}  // namespace ordwalk
