#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qgd/codec.hpp"
#include "qgd/descent.hpp"
#include "qgd/geometry.hpp"
#include "qgd/lowerbound.hpp"
#include "qgd/objectives.hpp"
#include "qgd/runtime.hpp"

namespace qgd::io {

/// Doubles are serialised with 17 significant digits (value-exact round trip).
std::string g17(double v);

// Point-set text format: first line "d <param> n", then n lines of d
// coordinates. <param> is delta for packings and the radius for nets.
void write_packing(std::ostream& os, const PackingSet& s);
void write_packing_file(const std::string& path, const PackingSet& s);
PackingSet read_packing(std::istream& is);
PackingSet read_packing_file(const std::string& path);

void write_net(std::ostream& os, const NetSet& s);
void write_net_file(const std::string& path, const NetSet& s);
NetSet read_net(std::istream& is);
NetSet read_net_file(const std::string& path);

// Objective text format: header "quadsum d n", then n lines "a y_1 ... y_d".
void write_quadsum(std::ostream& os, const QuadraticSum& f);
void write_quadsum_file(const std::string& path, const QuadraticSum& f);
QuadraticSum read_quadsum(std::istream& is);
QuadraticSum read_quadsum_file(const std::string& path);

// Cone objective spec: references a packing file plus a hex selection string.
//   cone
//   packing <path>
//   beta <v>
//   eps <v>
//   select <nbits> <hex>
struct ConeSpec {
  std::string packing_path;
  double beta = 0;
  double eps = 0;
  BitString selection;
};
void write_cone_spec_file(const std::string& path, const ConeSpec& spec);
ConeSpec read_cone_spec_file(const std::string& path);

/// Build the objective a spec describes (reads the referenced packing file).
ConeObjective load_cone(const ConeSpec& spec);

// Averaging-instance file: references a packing file; codewords are hex
// strings with their bit width declared.
//   avg <N> <d> <eps> <beta>
//   packing <path>
//   codeword <D> <hex>          (N lines)
void write_avg_instance_file(const std::string& path, const AvgInstance& inst,
                             const std::string& packing_path);
AvgInstance read_avg_instance_file(const std::string& path);

// Encoded-vector wire format: 24-byte header (u64 d, binary64 eps, binary64 R,
// all little-endian) followed by the payload padded with zero bits to a byte
// boundary. Only the payload bits are ever metered.
void write_encoded(std::ostream& os, const EncodedVector& v);
EncodedVector read_encoded(std::istream& is);

// Run manifest (text, "key value" lines; one "objective <path>" line per node).
struct RunManifest {
  double alpha = 0, beta = 0, W = 0, eps_target = 0;
  int n_nodes = 0, d = 0;
  uint64_t seed = 0;
  std::vector<std::string> objective_paths;
};
void write_manifest_file(const std::string& path, const RunManifest& m);
RunManifest read_manifest_file(const std::string& path);

/// Per-round CSV: t,err,R_t,q1_margin,q2_margin,q3_margin,bits_round,bits_total
std::string round_csv(const std::vector<RoundRecord>& records);

/// One line per message: "round direction node nbits hexpayload" with
/// direction c2n/n2c; control messages meter zero bits and dump "-".
std::string transcript_dump(const Transcript& tr);

/// JSON object with totals, per-endpoint and per-round breakdowns.
std::string meter_json(const BitMeter& m);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qgd::io
