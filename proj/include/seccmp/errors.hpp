/*
 * Copyright 2026 The seccmp Authors.
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

#ifndef SECCMP_ERRORS_HPP_
#define SECCMP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace seccmp {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments to a numeric routine (modulus < 2, non-coprime CRT moduli...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Key parameters that cannot be realised (k <= t, no room for cofactors...).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// A value outside the domain of an operation (plaintext >= u, s = 0...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Shares or ciphertexts that are internally inconsistent.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// An operation invoked by the wrong role or out of sequence.
class StateError : public Error {
 public:
  using Error::Error;
};

// Malformed protocol traffic (length mismatches, wrong message kind).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Frame-level decode failures.
class MalformedFrameError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

// Encode failures (an integer too large for its length prefix).
class EncodingError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

// Channel failures: timeouts, disconnects, handshake mismatch.
class TransportError : public Error {
 public:
  using Error::Error;
};

class TimeoutError : public TransportError {
 public:
  using TransportError::TransportError;
};

}  // namespace seccmp

#endif  // SECCMP_ERRORS_HPP_
