#pragma once

#include <stdexcept>
#include <string>

namespace qgd {

enum class Errc {
  infeasible_packing,
  oracle_scale,
  out_of_range,
  degenerate_input,
  shape_mismatch,
  degenerate_curvature,
  ill_posed_cone,
  domain,
  format,
  out_of_radius,
  invalid_lambda,
  invalid_spectrum,
  contract_violation,
  invariant_failure,
  schedule_violation,
  step_budget_exceeded,
  params_out_of_range,
  recovery_failure,
  instance_construction,
  usage,
};

const char* errc_name(Errc c);

/// Library-wide exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace qgd
