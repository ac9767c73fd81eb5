// errors.hpp: exception types shared by all sqcavity modules

#pragma once

#include <stdexcept>
#include <string>

namespace sqcavity {

// Operator shapes or spaces do not match, or a cutoff is out of range.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Unknown atomic level label.
class LabelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The Bogoliubov-frame generator only exists at resonance with a real squeezing parameter.
class UnsupportedFrameError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Base for every failure of a numerical solve or integration.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonUniqueSteadyStateError : public SolverError {
public:
    using SolverError::SolverError;
};

class StepTooLargeError : public SolverError {
public:
    using SolverError::SolverError;
};

class DivergenceError : public SolverError {
public:
    using SolverError::SolverError;
};

// A state failed validation (negative populations, non-real moments, ...).
class CorruptedStateError : public SolverError {
public:
    using SolverError::SolverError;
};

// The Fock cutoff leaks too much population into the guard levels.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, int current_cutoff, int suggested_cutoff)
        : std::runtime_error(what), current_cutoff_(current_cutoff), suggested_cutoff_(suggested_cutoff) {}

    int current_cutoff() const noexcept { return current_cutoff_; }
    int suggested_cutoff() const noexcept { return suggested_cutoff_; }

private:
    int current_cutoff_;
    int suggested_cutoff_;
};

} // namespace sqcavity
