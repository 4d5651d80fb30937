#pragma once

#include <stdexcept>
#include <string>

namespace radcool {

// Error taxonomy mirrors the CLI exit codes: config 1, non-convergence 2,
// data inconsistency 3. Value-domain violations use std::domain_error and
// structural precondition failures std::invalid_argument; the CLI maps both
// to exit code 1.

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace radcool
