#pragma once

#include <stdexcept>
#include <string>

namespace lowk {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Raised when a delta shell is asked for a pointwise value.
struct DistributionalError : std::domain_error {
    using std::domain_error::domain_error;
};

struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IntegrationError : std::runtime_error {
    IntegrationError(const std::string& what, double r)
        : std::runtime_error(what + " (r = " + std::to_string(r) + ")"), radius(r) {}
    double radius;
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TailTooLong : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TailTooShort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConditionViolation : std::runtime_error {
    ConditionViolation(const std::string& name, const std::string& what)
        : std::runtime_error(what), condition(name) {}
    std::string condition;
};

struct IndeterminateCondition : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoSignChange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Low-k data not yet in the asymptotic regime.
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    ParseError(int line_, int column_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ", column " +
                             std::to_string(column_) + ": " + msg),
          line(line_), column(column_) {}
    int line;
    int column;
};

}  // namespace lowk
