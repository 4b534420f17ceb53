#include "qgd/bits.hpp"

#include "qgd/error.hpp"

namespace qgd {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::infeasible_packing: return "infeasible-packing";
    case Errc::oracle_scale: return "oracle-scale";
    case Errc::out_of_range: return "out-of-range";
    case Errc::degenerate_input: return "degenerate-input";
    case Errc::shape_mismatch: return "shape-mismatch";
    case Errc::degenerate_curvature: return "degenerate-curvature";
    case Errc::ill_posed_cone: return "ill-posed-cone";
    case Errc::domain: return "domain";
    case Errc::format: return "format";
    case Errc::out_of_radius: return "out-of-radius";
    case Errc::invalid_lambda: return "invalid-lambda";
    case Errc::invalid_spectrum: return "invalid-spectrum";
    case Errc::contract_violation: return "contract-violation";
    case Errc::invariant_failure: return "invariant-failure";
    case Errc::schedule_violation: return "schedule-violation";
    case Errc::step_budget_exceeded: return "step-budget-exceeded";
    case Errc::params_out_of_range: return "parameters-out-of-range";
    case Errc::recovery_failure: return "recovery-failure";
    case Errc::instance_construction: return "instance-construction";
    case Errc::usage: return "usage";
  }
  return "unknown";
}

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  fail(Errc::format, "invalid hex digit");
}
}  // namespace

std::string BitString::to_hex() const {
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (uint8_t b : bytes_) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0xf]);
  }
  return out;
}

BitString BitString::from_hex(const std::string& hex, size_t nbits) {
  if (hex.size() % 2 != 0) fail(Errc::format, "hex string must be even length");
  size_t nbytes = hex.size() / 2;
  if (nbits > nbytes * 8 || (nbits + 7) / 8 != nbytes)
    fail(Errc::format, "hex length does not match declared bit count");
  BitString s;
  s.nbits_ = nbits;
  s.bytes_.resize(nbytes);
  for (size_t i = 0; i < nbytes; ++i)
    s.bytes_[i] = static_cast<uint8_t>((hex_value(hex[2 * i]) << 4) |
                                       hex_value(hex[2 * i + 1]));
  // trailing pad bits must be zero
  for (size_t i = nbits; i < nbytes * 8; ++i)
    if ((s.bytes_[i >> 3] >> (i & 7)) & 1)
      fail(Errc::format, "nonzero padding bits");
  return s;
}

}  // namespace qgd
