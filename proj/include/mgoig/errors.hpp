#pragma once

#include <stdexcept>
#include <string>

namespace mgoig {

enum class Errc {
  DomainTooLarge,
  GraphTooLarge,
  InstanceTooLarge,
  InconsistentSample,
  KOutOfRange,
  EpsilonOutOfRange,
  BudgetExceeded,
  ConfigInvalid,
  SolverStuck,  // no valid augmenting matching found before the optimum
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace mgoig
