/*
 * Copyright 2026 The bbalgebra Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BBA_ERRORS_HPP_
#define BBA_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bba {

class CryptoElement;

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation or constant was requested that the signature does not declare,
// or two structures of different kinds were combined.
class SignatureError : public Error {
 public:
  using Error::Error;
};

// Wrong arity, malformed element string, or an out-of-range parameter.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A declared-partial operation was evaluated at an undefined point
// (field inverse at zero).
class PartialityError : public Error {
 public:
  using Error::Error;
};

// Input data failed a structural check (reducible modulus, non-prime p, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// element_order: the order is larger than the supplied bound.
class BoundExceededError : public Error {
 public:
  using Error::Error;
};

// A closure or enumeration grew past its cap. Carries what was collected.
class CapExceededError : public Error {
 public:
  CapExceededError(const std::string& what, std::vector<CryptoElement> partial);
  const std::vector<CryptoElement>& partial() const { return partial_; }

 private:
  std::vector<CryptoElement> partial_;
};

// A sampled law check failed: a claimed congruence, action or recognition
// map does not behave as promised.
class ContractViolationError : public Error {
 public:
  using Error::Error;
};

// A system of local involutions does not glue into one automorphism.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

// No element of the box induces the given automorphism by conjugation.
class NotInnerError : public Error {
 public:
  using Error::Error;
};

// Discrete logarithm does not exist for the given base.
class NoSolutionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain (log of zero).
class DomainError : public Error {
 public:
  using Error::Error;
};

// p is not the characteristic of the box.
class CharacteristicMismatchError : public Error {
 public:
  using Error::Error;
};

// The sampler never produced an element with the required property.
class DegenerateSamplerError : public Error {
 public:
  using Error::Error;
};

// Bad CLI input: unknown structure descriptor, malformed option values.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace bba

#endif  // BBA_ERRORS_HPP_
