#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace akreg {

//! Raised when a numerical routine (quadrature) fails to reach its tolerance.
class numeric_error : public std::runtime_error
{
public:
  numeric_error(const std::string& what, double residual)
    : std::runtime_error(what)
    , residual_(residual)
  {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

//! Raised when every bandwidth candidate is penalized by the NA policy.
class selection_error : public std::runtime_error
{
public:
  selection_error(const std::string& what, std::size_t skipped)
    : std::runtime_error(what)
    , skipped_(skipped)
  {}
  std::size_t skipped() const noexcept { return skipped_; }

private:
  std::size_t skipped_;
};

//! Input data does not satisfy its schema (parse failure, kind violation,
//! missing column). Carries a 1-based line and the column name when known.
class data_error : public std::runtime_error
{
public:
  explicit data_error(const std::string& what, std::size_t line = 0,
                      std::string column = {})
    : std::runtime_error(what)
    , line_(line)
    , column_(std::move(column))
  {}
  std::size_t line() const noexcept { return line_; }
  const std::string& column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::string column_;
};

//! Malformed run configuration, schema or command line.
class config_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace akreg
