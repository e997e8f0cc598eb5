#ifndef ELBERT_ERRORS_HPP_
#define ELBERT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace elbert {

// Base for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Tensor/operation shape mismatch.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error(what) {}
};

// NaN/Inf produced where a finite value is required.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(what) {}
};

// Cumulative demand of some group is not positive; a benefit rate cannot be
// formed. Carries the offending group (and supply-demand pair).
class DegenerateDemandError : public Error {
 public:
  DegenerateDemandError(int group, int pair, const std::string& what)
      : Error(what), group_(group), pair_(pair) {}
  int group() const { return group_; }
  int pair() const { return pair_; }

 private:
  int group_;
  int pair_;
};

// Invalid configuration; names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error("config field '" + field + "': " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace elbert

#endif  // ELBERT_ERRORS_HPP_
