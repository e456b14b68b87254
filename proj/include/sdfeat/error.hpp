#pragma once

#include <stdexcept>
#include <string>

namespace sdfeat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raster or vector shapes that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value outside the domain an operation accepts.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Parameters that cannot form a valid encoder or experiment.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Features encoded under different fingerprints were compared.
class IncompatibleFeatures : public Error {
 public:
  using Error::Error;
};

class DatasetError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sdfeat
