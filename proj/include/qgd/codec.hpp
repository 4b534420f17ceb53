#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "qgd/bits.hpp"
#include "qgd/vec.hpp"

namespace qgd {

/// Parameters of the modulo-grid quantiser for accuracy eps at radius R.
///
/// Per-coordinate step s = 2*eps/sqrt(d), residue count M = ceil(R*sqrt(d)/eps)+2,
/// so M*s >= 2R + 2s and each residue class has at most one representative
/// within R + s/2 of any estimate coordinate. Total bits B = d*ceil(log2 M).
struct QuantiserConfig {
  int d = 0;
  double eps = 0;
  double R = 0;
  double step = 0;        // s
  int64_t residues = 0;   // M
  int bits_per_coord = 0;
  int64_t total_bits = 0;  // B

  static QuantiserConfig create(int d, double eps, double R);

  /// Config with eps = R*lambda and residue count M = ceil(sqrt(d)/lambda)+2
  /// computed from the ratio alone, so stages that keep lambda fixed get the
  /// same bit width at every scale R.
  static QuantiserConfig create_scaled(int d, double R, double lambda);

  bool operator==(const QuantiserConfig& o) const {
    return d == o.d && eps == o.eps && R == o.R;
  }
};

/// Exactly B payload bits plus the config fingerprint they were encoded under.
struct EncodedVector {
  BitString bits;
  int d = 0;
  double eps = 0;
  double R = 0;
};

/// Estimate-free modular encoding: per coordinate, round(x_j/s) mod M with
/// round-half-toward-+inf, packed little-endian in fixed-width fields,
/// coordinate 0 first.
EncodedVector encode(const QuantiserConfig& cfg, const Vec& x);

/// Pick per residue class the unique integer n with n = k (mod M) minimising
/// |n*s - q_j| (ties: smaller n) and output n*s. If the encoder's input was
/// within R of q, the result is within eps of it.
Vec decode(const QuantiserConfig& cfg, const Vec& q, const EncodedVector& msg);

/// decode(cfg, q, encode(cfg, x)), after checking ||x - q|| <= R.
Vec quantise(const QuantiserConfig& cfg, const Vec& x, const Vec& q);

/// Total payload bits for one vector at (d, eps, R).
int64_t bit_cost(int d, double eps, double R);

/// Codec interface so the grid scheme can be swapped for another construction
/// with the same validity/accuracy/determinism contract.
class VectorCodec {
 public:
  virtual ~VectorCodec() = default;
  virtual std::string name() const = 0;
  virtual EncodedVector encode(int d, double eps, double R, const Vec& x) const = 0;
  virtual Vec decode(int d, double eps, double R, const Vec& q,
                     const EncodedVector& msg) const = 0;
  virtual int64_t bits(int d, double eps, double R) const = 0;
};

class GridCodec final : public VectorCodec {
 public:
  std::string name() const override { return "grid"; }
  EncodedVector encode(int d, double eps, double R, const Vec& x) const override;
  Vec decode(int d, double eps, double R, const Vec& q,
             const EncodedVector& msg) const override;
  int64_t bits(int d, double eps, double R) const override;
};

std::unique_ptr<VectorCodec> make_codec(const std::string& name);

}  // namespace qgd
