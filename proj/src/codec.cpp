#include "qgd/codec.hpp"

#include <bit>
#include <cmath>

namespace qgd {

QuantiserConfig QuantiserConfig::create(int d, double eps, double R) {
  if (d < 1) fail(Errc::domain, "dimension must be >= 1");
  if (!std::isfinite(eps) || !std::isfinite(R) || !(eps > 0) || !(R > 0))
    fail(Errc::domain, "eps and R must be finite and positive");
  if (!(eps < R)) fail(Errc::invalid_lambda, "requires eps < R (lambda < 1)");
  QuantiserConfig cfg;
  cfg.d = d;
  cfg.eps = eps;
  cfg.R = R;
  double sqd = std::sqrt(static_cast<double>(d));
  cfg.step = 2.0 * eps / sqd;
  cfg.residues = static_cast<int64_t>(std::ceil(R * sqd / eps)) + 2;
  cfg.bits_per_coord =
      static_cast<int>(std::bit_width(static_cast<uint64_t>(cfg.residues - 1)));
  cfg.total_bits = static_cast<int64_t>(d) * cfg.bits_per_coord;
  return cfg;
}

QuantiserConfig QuantiserConfig::create_scaled(int d, double R, double lambda) {
  if (d < 1) fail(Errc::domain, "dimension must be >= 1");
  if (!std::isfinite(R) || !(R > 0)) fail(Errc::domain, "R must be positive");
  if (!(lambda > 0) || !(lambda < 1))
    fail(Errc::invalid_lambda, "requires 0 < lambda < 1");
  QuantiserConfig cfg;
  cfg.d = d;
  cfg.R = R;
  cfg.eps = R * lambda;
  double sqd = std::sqrt(static_cast<double>(d));
  cfg.step = 2.0 * cfg.eps / sqd;
  cfg.residues = static_cast<int64_t>(std::ceil(sqd / lambda)) + 2;
  cfg.bits_per_coord =
      static_cast<int>(std::bit_width(static_cast<uint64_t>(cfg.residues - 1)));
  cfg.total_bits = static_cast<int64_t>(d) * cfg.bits_per_coord;
  return cfg;
}

EncodedVector encode(const QuantiserConfig& cfg, const Vec& x) {
  if (static_cast<int>(x.size()) != cfg.d)
    fail(Errc::shape_mismatch, "input dimension mismatch");
  if (!all_finite(x)) fail(Errc::domain, "input must be finite");
  EncodedVector out;
  out.d = cfg.d;
  out.eps = cfg.eps;
  out.R = cfg.R;
  const double m = static_cast<double>(cfg.residues);
  for (int j = 0; j < cfg.d; ++j) {
    // round half toward +inf
    double kd = std::floor(x[j] / cfg.step + 0.5);
    if (std::abs(kd) >= 0x1.0p62)
      fail(Errc::domain, "coordinate magnitude exceeds the codec range");
    double r = std::fmod(kd, m);
    if (r < 0) r += m;
    out.bits.append_uint(static_cast<uint64_t>(r), cfg.bits_per_coord);
  }
  return out;
}

Vec decode(const QuantiserConfig& cfg, const Vec& q, const EncodedVector& msg) {
  if (static_cast<int>(q.size()) != cfg.d)
    fail(Errc::shape_mismatch, "estimate dimension mismatch");
  if (msg.d != cfg.d || msg.eps != cfg.eps || msg.R != cfg.R ||
      static_cast<int64_t>(msg.bits.size()) != cfg.total_bits)
    fail(Errc::format, "message does not match the quantiser config");
  const double m = static_cast<double>(cfg.residues);
  const double s = cfg.step;
  // Half-width of the feasible window in units of s. Residue spacing M*s
  // exceeds the window length, so at most one representative can be inside.
  const double half_window = cfg.R / s + 0.5;
  Vec out(static_cast<size_t>(cfg.d));
  for (int j = 0; j < cfg.d; ++j) {
    double k = static_cast<double>(
        msg.bits.read_uint(static_cast<size_t>(j) * cfg.bits_per_coord,
                           cfg.bits_per_coord));
    if (k >= m) fail(Errc::format, "residue index out of range");
    double c = q[j] / s;
    double n = k + m * std::floor((c - k) / m + 0.5);
    double lower = n - m;
    if (std::abs(lower - c) <= std::abs(n - c)) n = lower;  // ties: smaller n
    double upper = n + m;
    if (std::abs(upper - c) < std::abs(n - c)) n = upper;
    int in_window = (std::abs(n - c) <= half_window) ? 1 : 0;
    if (std::abs(n - m - c) <= half_window || std::abs(n + m - c) <= half_window)
      ++in_window;
    if (in_window > 1)
      fail(Errc::invariant_failure, "residue window admits two representatives");
    out[j] = n * s;
  }
  return out;
}

Vec quantise(const QuantiserConfig& cfg, const Vec& x, const Vec& q) {
  require_same_dim(x, q);
  if (!all_finite(x) || !all_finite(q))
    fail(Errc::domain, "inputs must be finite");
  if (dist2(x, q) > cfg.R)
    fail(Errc::out_of_radius, "||x - q|| exceeds the codec radius");
  return decode(cfg, q, encode(cfg, x));
}

int64_t bit_cost(int d, double eps, double R) {
  return QuantiserConfig::create(d, eps, R).total_bits;
}

EncodedVector GridCodec::encode(int d, double eps, double R, const Vec& x) const {
  return qgd::encode(QuantiserConfig::create(d, eps, R), x);
}

Vec GridCodec::decode(int d, double eps, double R, const Vec& q,
                      const EncodedVector& msg) const {
  return qgd::decode(QuantiserConfig::create(d, eps, R), q, msg);
}

int64_t GridCodec::bits(int d, double eps, double R) const {
  return bit_cost(d, eps, R);
}

std::unique_ptr<VectorCodec> make_codec(const std::string& name) {
  if (name == "grid") return std::make_unique<GridCodec>();
  fail(Errc::usage, "unknown codec '" + name + "'");
}

}  // namespace qgd
