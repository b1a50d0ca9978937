#pragma once

#include <stdexcept>
#include <string>

namespace gridpanel {

// Error classes map one-to-one onto CLI exit codes; see exit_code().
enum class ErrorClass {
  Usage,
  Schema,
  Integrity,
  DataQuality,
  Domain,
  Estimation,
  Config,
  MissingInput,
  Io,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, std::string msg)
      : std::runtime_error(std::move(msg)), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

class SchemaError : public Error {
 public:
  explicit SchemaError(std::string msg) : Error(ErrorClass::Schema, std::move(msg)) {}
};

class IntegrityError : public Error {
 public:
  explicit IntegrityError(std::string msg) : Error(ErrorClass::Integrity, std::move(msg)) {}
};

class DataQualityError : public Error {
 public:
  explicit DataQualityError(std::string msg) : Error(ErrorClass::DataQuality, std::move(msg)) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(std::string msg) : Error(ErrorClass::Domain, std::move(msg)) {}
};

class EstimationError : public Error {
 public:
  explicit EstimationError(std::string msg) : Error(ErrorClass::Estimation, std::move(msg)) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::string msg) : Error(ErrorClass::Config, std::move(msg)) {}
};

class MissingInputError : public Error {
 public:
  explicit MissingInputError(std::string msg) : Error(ErrorClass::MissingInput, std::move(msg)) {}
};

class IoError : public Error {
 public:
  explicit IoError(std::string msg) : Error(ErrorClass::Io, std::move(msg)) {}
};

inline int exit_code(ErrorClass cls) noexcept {
  switch (cls) {
    case ErrorClass::Usage: return 64;
    case ErrorClass::Schema: return 65;
    case ErrorClass::Integrity: return 66;
    case ErrorClass::DataQuality: return 67;
    case ErrorClass::Domain: return 68;
    case ErrorClass::Estimation: return 69;
    case ErrorClass::Config: return 70;
    case ErrorClass::MissingInput: return 71;
    case ErrorClass::Io: return 74;
    case ErrorClass::Internal: return 80;
  }
  return 80;
}

inline const char* error_class_name(ErrorClass cls) noexcept {
  switch (cls) {
    case ErrorClass::Usage: return "usage";
    case ErrorClass::Schema: return "schema";
    case ErrorClass::Integrity: return "integrity";
    case ErrorClass::DataQuality: return "data-quality";
    case ErrorClass::Domain: return "domain";
    case ErrorClass::Estimation: return "estimation";
    case ErrorClass::Config: return "config";
    case ErrorClass::MissingInput: return "missing-input";
    case ErrorClass::Io: return "io";
    case ErrorClass::Internal: return "internal";
  }
  return "internal";
}

}  // namespace gridpanel
