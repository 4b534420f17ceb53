#include "qgd/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qgd::io {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(Errc::format, "cannot open '" + path + "'");
  return is;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) fail(Errc::format, "cannot open '" + path + "' for writing");
  return os;
}

void write_point_set(std::ostream& os, int d, double param, const PointSet& pts) {
  os << d << ' ' << g17(param) << ' ' << pts.size() << '\n';
  for (size_t i = 0; i < pts.size(); ++i) {
    auto p = pts[i];
    for (int k = 0; k < d; ++k) {
      if (k) os << ' ';
      os << g17(p[k]);
    }
    os << '\n';
  }
}

void read_point_set(std::istream& is, int& d, double& param, PointSet& pts) {
  size_t n = 0;
  if (!(is >> d >> param >> n)) fail(Errc::format, "bad point-set header");
  if (d < 1) fail(Errc::format, "bad dimension in point-set header");
  pts = PointSet(d);
  pts.data.reserve(n * static_cast<size_t>(d));
  for (size_t i = 0; i < n * static_cast<size_t>(d); ++i) {
    double v;
    if (!(is >> v)) fail(Errc::format, "truncated point-set file");
    pts.data.push_back(v);
  }
}

}  // namespace

void write_packing(std::ostream& os, const PackingSet& s) {
  write_point_set(os, s.d, s.delta, s.points);
}
void write_packing_file(const std::string& path, const PackingSet& s) {
  auto os = open_out(path);
  write_packing(os, s);
}
PackingSet read_packing(std::istream& is) {
  int d;
  double delta;
  PointSet pts;
  read_point_set(is, d, delta, pts);
  return packing_from_points(std::move(pts), delta);
}
PackingSet read_packing_file(const std::string& path) {
  auto is = open_in(path);
  return read_packing(is);
}

void write_net(std::ostream& os, const NetSet& s) {
  write_point_set(os, s.d, s.radius, s.points);
}
void write_net_file(const std::string& path, const NetSet& s) {
  auto os = open_out(path);
  write_net(os, s);
}
NetSet read_net(std::istream& is) {
  NetSet s;
  read_point_set(is, s.d, s.radius, s.points);
  s.d = s.points.dim;
  return s;
}
NetSet read_net_file(const std::string& path) {
  auto is = open_in(path);
  return read_net(is);
}

void write_quadsum(std::ostream& os, const QuadraticSum& f) {
  os << "quadsum " << f.d << ' ' << f.terms.size() << '\n';
  for (const auto& t : f.terms) {
    os << g17(t.weight);
    for (double c : t.center) os << ' ' << g17(c);
    os << '\n';
  }
}
void write_quadsum_file(const std::string& path, const QuadraticSum& f) {
  auto os = open_out(path);
  write_quadsum(os, f);
}
QuadraticSum read_quadsum(std::istream& is) {
  std::string tag;
  int d;
  size_t n;
  if (!(is >> tag >> d >> n) || tag != "quadsum")
    fail(Errc::format, "bad quadsum header");
  std::vector<QuadraticTerm> terms;
  for (size_t i = 0; i < n; ++i) {
    QuadraticTerm t;
    if (!(is >> t.weight)) fail(Errc::format, "truncated quadsum file");
    t.center.resize(static_cast<size_t>(d));
    for (auto& c : t.center)
      if (!(is >> c)) fail(Errc::format, "truncated quadsum file");
    terms.push_back(std::move(t));
  }
  return QuadraticSum::make(d, std::move(terms));
}
QuadraticSum read_quadsum_file(const std::string& path) {
  auto is = open_in(path);
  return read_quadsum(is);
}

void write_cone_spec_file(const std::string& path, const ConeSpec& spec) {
  auto os = open_out(path);
  os << "cone\n";
  os << "packing " << spec.packing_path << '\n';
  os << "beta " << g17(spec.beta) << '\n';
  os << "eps " << g17(spec.eps) << '\n';
  os << "select " << spec.selection.size() << ' ' << spec.selection.to_hex()
     << '\n';
}

ConeSpec read_cone_spec_file(const std::string& path) {
  auto is = open_in(path);
  std::string tag;
  if (!(is >> tag) || tag != "cone") fail(Errc::format, "bad cone header");
  ConeSpec spec;
  std::string key;
  size_t nbits = 0;
  std::string hex;
  while (is >> key) {
    if (key == "packing") is >> spec.packing_path;
    else if (key == "beta") is >> spec.beta;
    else if (key == "eps") is >> spec.eps;
    else if (key == "select") {
      is >> nbits >> hex;
      spec.selection = BitString::from_hex(hex, nbits);
    } else {
      fail(Errc::format, "unknown cone key '" + key + "'");
    }
  }
  return spec;
}

ConeObjective load_cone(const ConeSpec& spec) {
  PackingSet packing = read_packing_file(spec.packing_path);
  return ConeObjective(packing, spec.selection, spec.beta, spec.eps);
}

void write_avg_instance_file(const std::string& path, const AvgInstance& inst,
                             const std::string& packing_path) {
  write_packing_file(packing_path, inst.packing);
  auto os = open_out(path);
  os << "avg " << inst.params.n_nodes << ' ' << inst.params.d << ' '
     << g17(inst.params.eps) << ' ' << g17(inst.params.beta) << '\n';
  os << "packing " << packing_path << '\n';
  int width = inst.packing.codeword_bits();
  for (uint64_t b : inst.codewords) {
    BitString cw = BitString::from_uint(b, width);
    os << "codeword " << cw.size() << ' ' << cw.to_hex() << '\n';
  }
}

AvgInstance read_avg_instance_file(const std::string& path) {
  auto is = open_in(path);
  std::string tag;
  AvgInstance inst;
  if (!(is >> tag >> inst.params.n_nodes >> inst.params.d >>
        inst.params.eps >> inst.params.beta) ||
      tag != "avg")
    fail(Errc::format, "bad avg-instance header");
  std::string key;
  while (is >> key) {
    if (key == "packing") {
      std::string p;
      is >> p;
      inst.packing = read_packing_file(p);
    } else if (key == "codeword") {
      size_t nbits;
      std::string hex;
      if (!(is >> nbits >> hex)) fail(Errc::format, "bad codeword line");
      inst.codewords.push_back(BitString::from_hex(hex, nbits).as_uint());
    } else {
      fail(Errc::format, "unknown avg-instance key '" + key + "'");
    }
  }
  if (inst.packing.size() < 2)
    fail(Errc::format, "avg instance needs a packing with at least 2 points");
  if (static_cast<int>(inst.codewords.size()) != inst.params.n_nodes)
    fail(Errc::format, "codeword count != node count");
  for (uint64_t b : inst.codewords)
    if (b >= inst.packing.size())
      fail(Errc::format, "codeword indexes past the packing");
  inst.net = epsilon_net(inst.params.d,
                         std::sqrt(inst.params.eps / (4.0 * inst.params.beta)));
  inst.xstar.assign(static_cast<size_t>(inst.params.d), 0.0);
  for (uint64_t b : inst.codewords) {
    auto p = inst.packing.points[b];
    for (int k = 0; k < inst.params.d; ++k)
      inst.xstar[static_cast<size_t>(k)] += p[k];
  }
  for (auto& v : inst.xstar) v /= inst.params.n_nodes;
  return inst;
}

namespace {
void put_u64(std::ostream& os, uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(buf, 8);
}
uint64_t get_u64(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  if (!is) fail(Errc::format, "truncated wire header");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
  return v;
}
uint64_t double_bits(double d) {
  uint64_t v;
  std::memcpy(&v, &d, 8);
  return v;
}
double bits_double(uint64_t v) {
  double d;
  std::memcpy(&d, &v, 8);
  return d;
}
}  // namespace

void write_encoded(std::ostream& os, const EncodedVector& v) {
  put_u64(os, static_cast<uint64_t>(v.d));
  put_u64(os, double_bits(v.eps));
  put_u64(os, double_bits(v.R));
  os.write(reinterpret_cast<const char*>(v.bits.bytes().data()),
           static_cast<std::streamsize>(v.bits.bytes().size()));
}

EncodedVector read_encoded(std::istream& is) {
  EncodedVector v;
  v.d = static_cast<int>(get_u64(is));
  v.eps = bits_double(get_u64(is));
  v.R = bits_double(get_u64(is));
  QuantiserConfig cfg = QuantiserConfig::create(v.d, v.eps, v.R);
  size_t nbytes = (static_cast<size_t>(cfg.total_bits) + 7) / 8;
  std::vector<char> buf(nbytes);
  is.read(buf.data(), static_cast<std::streamsize>(nbytes));
  if (!is) fail(Errc::format, "truncated wire payload");
  std::string hex;
  for (char c : buf) {
    static const char* dig = "0123456789abcdef";
    hex.push_back(dig[(static_cast<unsigned char>(c) >> 4) & 0xf]);
    hex.push_back(dig[static_cast<unsigned char>(c) & 0xf]);
  }
  v.bits = BitString::from_hex(hex, static_cast<size_t>(cfg.total_bits));
  return v;
}

void write_manifest_file(const std::string& path, const RunManifest& m) {
  auto os = open_out(path);
  os << "alpha " << g17(m.alpha) << '\n';
  os << "beta " << g17(m.beta) << '\n';
  os << "W " << g17(m.W) << '\n';
  os << "eps_target " << g17(m.eps_target) << '\n';
  os << "n_nodes " << m.n_nodes << '\n';
  os << "dim " << m.d << '\n';
  os << "seed " << m.seed << '\n';
  for (const auto& p : m.objective_paths) os << "objective " << p << '\n';
}

RunManifest read_manifest_file(const std::string& path) {
  auto is = open_in(path);
  RunManifest m;
  std::string key;
  while (is >> key) {
    if (key == "alpha") is >> m.alpha;
    else if (key == "beta") is >> m.beta;
    else if (key == "W") is >> m.W;
    else if (key == "eps_target") is >> m.eps_target;
    else if (key == "n_nodes") is >> m.n_nodes;
    else if (key == "dim") is >> m.d;
    else if (key == "seed") is >> m.seed;
    else if (key == "objective") {
      std::string p;
      is >> p;
      m.objective_paths.push_back(p);
    } else {
      fail(Errc::format, "unknown manifest key '" + key + "'");
    }
    if (!is) fail(Errc::format, "bad manifest value for '" + key + "'");
  }
  return m;
}

std::string round_csv(const std::vector<RoundRecord>& records) {
  std::ostringstream os;
  os << "t,err,R_t,q1_margin,q2_margin,q3_margin,bits_round,bits_total\n";
  for (const auto& r : records) {
    os << r.t << ',' << g17(r.err) << ',' << g17(r.R_t) << ','
       << g17(r.q1_margin) << ',' << g17(r.q2_margin) << ','
       << g17(r.q3_margin) << ',' << r.bits_round << ',' << r.bits_cum << '\n';
  }
  return os.str();
}

std::string transcript_dump(const Transcript& tr) {
  std::ostringstream os;
  for (const auto& m : tr.messages) {
    os << m.round << ' ' << (m.from_coordinator ? "c2n" : "n2c") << ' '
       << m.node << ' ';
    if (m.payload.control) {
      os << "0 -";
    } else {
      os << m.payload.bits.size() << ' ' << m.payload.bits.to_hex();
    }
    os << '\n';
  }
  return os.str();
}

std::string meter_json(const BitMeter& m) {
  nlohmann::json j;
  j["total"] = m.total;
  j["sent"] = m.sent;
  j["received"] = m.received;
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& [tag, bits] : m.per_tag)
    rounds.push_back({{"round", tag}, {"bits", bits}});
  j["per_round"] = rounds;
  return j.dump(2);
}

std::string read_text_file(const std::string& path) {
  auto is = open_in(path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  auto os = open_out(path);
  os << content;
}

}  // namespace qgd::io
