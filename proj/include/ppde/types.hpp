#ifndef PPDE_TYPES_HPP
#define PPDE_TYPES_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace ppde {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Err {
  OutOfDomain,
  HorizonExceeded,
  IndexMismatch,
  GridMismatch,
  NotInClosure,
  SearchSpaceTooLarge,
  NotSmooth,
  DimensionMismatch,
  TimeMismatch,
  UnknownName,
  BadParams,
  ZeroTime,
  CflViolation,
  LiftMismatch,
  StubNotInLattice,
  PreconditionFailed,
  ConfigError,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}
  Err code() const { return code_; }

private:
  Err code_;
};

}  // namespace ppde

#endif
