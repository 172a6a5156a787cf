#pragma once

#include <stdexcept>
#include <string>

namespace nuqrom {

// Exit-code classes used by the CLI: 0 ok, 2 config, 3 cap, 4 numeric, 5 internal.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual int exit_code() const { return 5; }
};

class ConfigError : public Error {
public:
  using Error::Error;
  int exit_code() const override { return 2; }
};

class CapExceeded : public Error {
public:
  using Error::Error;
  int exit_code() const override { return 3; }
};

class NumericError : public Error {
public:
  using Error::Error;
  int exit_code() const override { return 4; }
};

#define NUQROM_CONFIG_ERROR(NAME)              \
  class NAME : public ConfigError {            \
  public:                                      \
    using ConfigError::ConfigError;            \
  }

NUQROM_CONFIG_ERROR(DimensionMismatch);
NUQROM_CONFIG_ERROR(SaltOutOfRange);
NUQROM_CONFIG_ERROR(CoinOutOfRange);
NUQROM_CONFIG_ERROR(AnswerOutOfRange);
NUQROM_CONFIG_ERROR(UnknownChallenge);
NUQROM_CONFIG_ERROR(EvenRounds);
NUQROM_CONFIG_ERROR(EmptyGrid);
NUQROM_CONFIG_ERROR(MissingParam);

#undef NUQROM_CONFIG_ERROR

class EigensolverFailure : public NumericError {
public:
  using NumericError::NumericError;
};

class ZeroMean : public NumericError {
public:
  using NumericError::NumericError;
};

class ZeroSuccess : public NumericError {
public:
  using NumericError::NumericError;
};

class NeverAccepts : public NumericError {
public:
  using NumericError::NumericError;
};

class DegenerateEigenvalue : public NumericError {
public:
  using NumericError::NumericError;
};

}  // namespace nuqrom
