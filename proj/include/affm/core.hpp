#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace affm {

using cplx = std::complex<double>;
using Vec = std::vector<double>;
using CVec = std::vector<cplx>;

enum class ErrorCode {
  InvalidSpec,
  InvalidInput,
  DomainError,
  InvalidTime,
  OdeBlowup,
  DegenerateVariance,
  NonmonotoneInput,
  Infeasible,
  NotUnimodal,
  PoleError,
  ContourError,
  OutOfBounds,
  WrongSpec,
  LayoutError,
  StageInfeasible,
  Io,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidTime: return "InvalidTime";
    case ErrorCode::OdeBlowup: return "OdeBlowup";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::NonmonotoneInput: return "NonmonotoneInput";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NotUnimodal: return "NotUnimodal";
    case ErrorCode::PoleError: return "PoleError";
    case ErrorCode::ContourError: return "ContourError";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::WrongSpec: return "WrongSpec";
    case ErrorCode::LayoutError: return "LayoutError";
    case ErrorCode::StageInfeasible: return "StageInfeasible";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace affm
