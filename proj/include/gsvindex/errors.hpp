// Error hierarchy shared by all modules.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gsv {

class EngineError : public std::runtime_error {
public:
    explicit EngineError(const std::string& what) : std::runtime_error(what) {}
};

// Input-side failures (parser).
class SyntaxError : public EngineError {
public:
    SyntaxError(const std::string& what, int line, int col)
        : EngineError("syntax error at " + std::to_string(line) + ":" +
                      std::to_string(col) + ": " + what),
          line(line), col(col) {}
    int line;
    int col;
};

class UnknownVariableError : public EngineError {
public:
    explicit UnknownVariableError(const std::string& name, int line, int col)
        : EngineError("unknown variable '" + name + "' at " + std::to_string(line) +
                      ":" + std::to_string(col)) {}
};

class ArityMismatchError : public EngineError {
public:
    using EngineError::EngineError;
};

class NotAGermError : public EngineError {
public:
    using EngineError::EngineError;
};

class TangencyMismatchError : public EngineError {
public:
    using EngineError::EngineError;
};

// Arithmetic guards.
class DegreeOverflowError : public EngineError {
public:
    using EngineError::EngineError;
};

class RingMismatchError : public EngineError {
public:
    using EngineError::EngineError;
};

class SingularMatrixError : public EngineError {
public:
    using EngineError::EngineError;
};

// Truncation engine.
class NoStabilizationError : public EngineError {
public:
    NoStabilizationError(const std::string& what, std::vector<int> orders)
        : EngineError(what), orders(std::move(orders)) {}
    std::vector<int> orders;
};

class NotNestedError : public EngineError {
public:
    using EngineError::EngineError;
};

class NormalizationFailedError : public EngineError {
public:
    using EngineError::EngineError;
};

// Residue module.
class NotRegularError : public EngineError {
public:
    using EngineError::EngineError;
};

// Index module.
class NotTangentError : public EngineError {
public:
    using EngineError::EngineError;
};

// Cross-route disagreement that indicates a bug, not bad input.
class InternalInconsistencyError : public EngineError {
public:
    using EngineError::EngineError;
};

} // namespace gsv
