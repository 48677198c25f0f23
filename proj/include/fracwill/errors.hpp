#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fracwill {

enum class ErrorKind {
    Domain,
    Range,
    Configuration,
    Convergence,
    SingularPoint,
    NonUniqueProjection,
    Fold,
    Accuracy
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ErrorKind::Domain, w) {}
};

struct RangeError : Error {
    explicit RangeError(const std::string& w) : Error(ErrorKind::Range, w) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorKind::Configuration, w) {}
};

struct SingularPointError : Error {
    explicit SingularPointError(const std::string& w) : Error(ErrorKind::SingularPoint, w) {}
};

struct NonUniqueProjectionError : Error {
    explicit NonUniqueProjectionError(const std::string& w)
        : Error(ErrorKind::NonUniqueProjection, w) {}
};

struct FoldError : Error {
    explicit FoldError(const std::string& w) : Error(ErrorKind::Fold, w) {}
};

// Carries the last residual (or the observed sequence) that failed to settle.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& w, double residual, std::vector<double> seq = {})
        : Error(ErrorKind::Convergence, w), residual(residual), sequence(std::move(seq)) {}
    double residual;
    std::vector<double> sequence;
};

struct AccuracyError : Error {
    AccuracyError(const std::string& w, double estimate)
        : Error(ErrorKind::Accuracy, w), estimate(estimate) {}
    double estimate;
};

}  // namespace fracwill
