/* Copyright 2026 The nsbf-dirac Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef NSBF_ERROR_HPP
#define NSBF_ERROR_HPP

#include <stdexcept>
#include <string>

namespace nsbf {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (pole, negative order at zero, ...).
class DomainError : public Error
{
  public:
    using Error::Error;
};

/// A numerical evaluation failed (overflow, non-finite intermediate).
class EvaluationError : public Error
{
  public:
    using Error::Error;
};

/// Two grid functions defined on different grids were combined.
class GridMismatch : public Error
{
  public:
    using Error::Error;
};

/// The non-vanishing assumption on g0 could not be restored by any spectral shift on the search ladder.
class UnsupportedPotential : public Error
{
  public:
    using Error::Error;
};

/// The truncation criterion failed already at the first interior grid point.
class DegenerateTruncation : public Error
{
  public:
    using Error::Error;
};

/// Invalid run configuration. `field` names the offending key when known.
class ConfigError : public Error
{
  public:
    ConfigError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what)
        , field_(std::move(field))
    {
    }

    const std::string& field() const noexcept
    {
        return field_;
    }

  private:
    std::string field_;
};

} // namespace nsbf

#endif
