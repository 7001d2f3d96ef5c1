#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flatspin {

/// Broad class of a failure; the CLI maps each class to one exit code.
enum class ErrorClass {
  input,       // malformed configuration, expression or patch files
  hypothesis,  // seed data violates a requirement of the construction
  numerical,   // integration or a residual budget went out of bounds
  algebra,     // misuse of an algebraic operation
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  [[nodiscard]] ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

/// Grid location attached to pointwise failures.
struct GridIndex {
  std::size_t i = 0;
  std::size_t j = 0;
};

inline std::string at_point(GridIndex p) {
  return " at grid point (" + std::to_string(p.i) + ", " + std::to_string(p.j) + ")";
}

// cquat
class NotInvertible : public Error {
 public:
  explicit NotInvertible(const std::string& what) : Error(ErrorClass::algebra, "NotInvertible: " + what) {}
};

class NotASpinElement : public Error {
 public:
  explicit NotASpinElement(const std::string& what)
      : Error(ErrorClass::algebra, "NotASpinElement: " + what) {}
};

class RealityViolation : public Error {
 public:
  explicit RealityViolation(const std::string& what)
      : Error(ErrorClass::numerical, "RealityViolation: " + what) {}
};

// holoexpr
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& what)
      : Error(ErrorClass::input, "SyntaxError at offset " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class ModeError : public Error {
 public:
  explicit ModeError(const std::string& what) : Error(ErrorClass::input, "ModeError: " + what) {}
};

class EvalError : public Error {
 public:
  explicit EvalError(const std::string& what) : Error(ErrorClass::numerical, "EvalError: " + what) {}
};

// seed validation
class InvalidDomain : public Error {
 public:
  explicit InvalidDomain(const std::string& what) : Error(ErrorClass::input, "InvalidDomain: " + what) {}
};

class DegenerateOsculating : public Error {
 public:
  explicit DegenerateOsculating(GridIndex p)
      : Error(ErrorClass::hypothesis, "DegenerateOsculating: f1^2 - f2^2 vanishes" + at_point(p)),
        point_(p) {}
  [[nodiscard]] GridIndex point() const noexcept { return point_; }

 private:
  GridIndex point_;
};

class DependentFrame : public Error {
 public:
  DependentFrame(GridIndex p, const std::string& what)
      : Error(ErrorClass::hypothesis, "DependentFrame: " + what + at_point(p)), point_(p) {}
  [[nodiscard]] GridIndex point() const noexcept { return point_; }

 private:
  GridIndex point_;
};

class SeedInvalid : public Error {
 public:
  SeedInvalid(GridIndex p, const std::string& what)
      : Error(ErrorClass::hypothesis, "SeedInvalid: " + what + at_point(p)), point_(p) {}
  [[nodiscard]] GridIndex point() const noexcept { return point_; }

 private:
  GridIndex point_;
};

class BranchConflict : public Error {
 public:
  BranchConflict(GridIndex p, const std::string& what)
      : Error(ErrorClass::hypothesis, "BranchConflict: " + what + at_point(p)), point_(p) {}
  [[nodiscard]] GridIndex point() const noexcept { return point_; }

 private:
  GridIndex point_;
};

class CommutatorFailure : public Error {
 public:
  explicit CommutatorFailure(const std::string& what)
      : Error(ErrorClass::hypothesis, "CommutatorFailure: " + what) {}
};

// integration and verification
class RenormalizationFailure : public Error {
 public:
  RenormalizationFailure(GridIndex p, const std::string& what)
      : Error(ErrorClass::numerical, "RenormalizationFailure: " + what + at_point(p)) {}
};

class ClosednessFailure : public Error {
 public:
  explicit ClosednessFailure(const std::string& what)
      : Error(ErrorClass::numerical, "ClosednessFailure: " + what) {}
};

class NotUnimodular : public Error {
 public:
  explicit NotUnimodular(const std::string& what) : Error(ErrorClass::algebra, "NotUnimodular: " + what) {}
};

class NonOffDiagonal : public Error {
 public:
  NonOffDiagonal(GridIndex p, const std::string& what)
      : Error(ErrorClass::numerical, "NonOffDiagonal: " + what + at_point(p)) {}
};

class PreconditionViolated : public Error {
 public:
  explicit PreconditionViolated(const std::string& what)
      : Error(ErrorClass::input, "PreconditionViolated: " + what) {}
};

class SignatureError : public Error {
 public:
  SignatureError(GridIndex p, const std::string& what)
      : Error(ErrorClass::numerical, "SignatureError: " + what + at_point(p)) {}
};

// configuration and patch files
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorClass::input, "ConfigError: " + what) {}
};

class PatchFormatError : public Error {
 public:
  explicit PatchFormatError(const std::string& what)
      : Error(ErrorClass::input, "PatchFormatError: " + what) {}
};

/// A vertex sits on the projection pole.
class ProjectionError : public Error {
 public:
  ProjectionError(std::size_t index, const std::string& what)
      : Error(ErrorClass::input, "ProjectionError: " + what + " at vertex " + std::to_string(index)),
        index_(index) {}
  [[nodiscard]] std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace flatspin
