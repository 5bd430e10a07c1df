// Error taxonomy shared by all modules. InputError covers anything wrong
// with what the caller handed us (files, config, dimensions); PipelineError
// covers inputs that decode fine but carry no usable signal.

#pragma once

#include <stdexcept>
#include <string>

namespace chromatone {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: missing/corrupt files, invalid config, mismatched dimensions.
class InputError : public Error {
public:
    using Error::Error;
};

class MissingFileError : public InputError {
public:
    using InputError::InputError;
};

class DecodeError : public InputError {
public:
    using InputError::InputError;
};

class DimensionMismatchError : public InputError {
public:
    using InputError::InputError;
};

class ConfigError : public InputError {
public:
    using InputError::InputError;
};

// Input was well-formed but the pipeline could not extract a result
// (too few masked pixels, no veins after thresholding, degenerate landmarks).
class PipelineError : public Error {
public:
    using Error::Error;
};

class EmptyRegionError : public PipelineError {
public:
    using PipelineError::PipelineError;
};

} // namespace chromatone
