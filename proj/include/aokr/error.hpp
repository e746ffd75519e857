#pragma once

#include <stdexcept>
#include <string>

namespace aokr {

/// Base class for every model-level failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Δ < 10·Ω: the large-detuning form of the kicking potential does not apply.
class DetuningTooSmall : public Error {
 public:
  using Error::Error;
};

/// Noise level outside its admissible range (𝓛_A ∈ [0,2], 𝓛_P ∈ [0,1)).
class InvalidNoiseLevel : public Error {
 public:
  using Error::Error;
};

/// A perturbed pulse landed on or before its predecessor.
class NonpositiveInterval : public Error {
 public:
  using Error::Error;
};

/// Probability reached the outer 10% of the momentum ladder.
class CutoffInsufficient : public Error {
 public:
  using Error::Error;
};

/// ε = 0 where the ε⁻² energy rescaling is required.
class EpsilonZero : public Error {
 public:
  using Error::Error;
};

/// Closed-form resonance height requested for a level other than 0 or 2.
class UnsupportedNoiseLevel : public Error {
 public:
  using Error::Error;
};

/// Bad user configuration; the message names the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace aokr
