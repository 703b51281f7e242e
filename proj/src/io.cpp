#include "advrecon/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace advrecon {

namespace {

constexpr char kMagic[] = "ADVRECON-MAT"; // stored with its trailing NUL
constexpr std::uint8_t kVersion = 1;
constexpr Index kMaxDim = Index(1) << 24;

void put_u64_le(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}

void put_f64_le(std::string& buf, double v) {
  put_u64_le(buf, std::bit_cast<std::uint64_t>(v));
}

struct ByteReader {
  const std::string& bytes;
  std::size_t pos = 0;

  void need(std::size_t count) const {
    if (pos + count > bytes.size()) throw std::runtime_error("matrix file truncated");
  }
  std::uint8_t u8() {
    need(1);
    return std::uint8_t(bytes[pos++]);
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(std::uint8_t(bytes[pos++])) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_bytes(const std::string& path, const std::string& buf) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.good()) throw std::runtime_error("cannot open file: " + path);
  out.write(buf.data(), std::streamsize(buf.size()));
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

void append_provenance(std::string& buf, const Provenance& prov) {
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(prov.config_hash));
  buf += "# version: " + std::to_string(prov.version) + "\n";
  buf += "# config-hash: " + std::string(hex) + "\n";
  buf += "# seed: " + std::to_string(prov.seed) + "\n";
}

} // namespace

void write_matrix_file(const std::string& path, const Mat& entries, std::uint8_t kind_tag,
                       std::int64_t seed) {
  if (entries.rows() < 1 || entries.cols() < 1)
    throw std::invalid_argument("write_matrix_file: empty matrix");
  std::string buf;
  buf.append(kMagic, sizeof(kMagic)); // 13 bytes including the NUL
  buf.push_back(char(kVersion));
  put_u64_le(buf, std::uint64_t(entries.rows()));
  put_u64_le(buf, std::uint64_t(entries.cols()));
  buf.push_back(char(kind_tag));
  put_u64_le(buf, std::bit_cast<std::uint64_t>(seed));
  for (Index i = 0; i < entries.rows(); ++i)
    for (Index j = 0; j < entries.cols(); ++j) put_f64_le(buf, entries(i, j));
  write_bytes(path, buf);
}

MatrixFile read_matrix_file(const std::string& path) {
  const std::string bytes = slurp(path);
  ByteReader r{bytes};

  r.need(sizeof(kMagic));
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("matrix file magic mismatch");
  r.pos += sizeof(kMagic);
  if (r.u8() != kVersion) throw std::runtime_error("matrix file version unsupported");

  const std::uint64_t rows = r.u64();
  const std::uint64_t cols = r.u64();
  if (rows < 1 || cols < 1 || rows > std::uint64_t(kMaxDim) || cols > std::uint64_t(kMaxDim))
    throw std::runtime_error("matrix file dimension invalid");

  MatrixFile out;
  out.kind_tag = r.u8();
  out.seed = std::bit_cast<std::int64_t>(r.u64());
  out.entries.resize(Index(rows), Index(cols));
  for (Index i = 0; i < out.entries.rows(); ++i)
    for (Index j = 0; j < out.entries.cols(); ++j) out.entries(i, j) = r.f64();
  if (r.pos != bytes.size()) throw std::runtime_error("matrix file trailing bytes");
  return out;
}

void save_operator(const std::string& path, const MeasurementOperatorD& op) {
  write_matrix_file(path, op.entries, std::uint8_t(op.kind), op.seed);
}

MeasurementOperatorD load_operator(const std::string& path) {
  const MatrixFile file = read_matrix_file(path);
  if (file.kind_tag > std::uint8_t(OperatorKind::ModifiedSpectrum))
    throw std::runtime_error("matrix file kind tag invalid for an operator");
  return make_operator(file.entries, OperatorKind(file.kind_tag), file.seed);
}

void save_dataset(const std::string& path, const Dataset& data) {
  write_matrix_file(path, data.samples, std::uint8_t(data.source), 0);
}

Dataset load_dataset(const std::string& path) {
  const MatrixFile file = read_matrix_file(path);
  if (file.kind_tag > std::uint8_t(DataSource::SyntheticGaussian))
    throw std::runtime_error("matrix file kind tag invalid for a dataset");
  Dataset out;
  out.samples = file.entries;
  out.n = file.entries.rows();
  out.source = DataSource(file.kind_tag);
  return out;
}

std::uint64_t fnv1a_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_conditioning_csv(const std::string& path, const ConditioningReport& report,
                            const Provenance& prov) {
  std::string buf;
  append_provenance(buf, prov);
  buf += "bin_lower,bin_upper,count\n";
  for (const HistogramBin& bin : report.histogram)
    buf += format_double(bin.lower) + "," + format_double(bin.upper) + "," +
           std::to_string(bin.count) + "\n";
  buf += "sigma_min,sigma_max,kappa\n";
  buf += format_double(report.sigma_min) + "," + format_double(report.sigma_max) + "," +
         format_double(report.kappa) + "\n";
  write_bytes(path, buf);
}

void write_loss_csv(const std::string& path, const std::vector<double>& losses,
                    const Provenance& prov) {
  std::string buf;
  append_provenance(buf, prov);
  buf += "epoch,loss\n";
  for (std::size_t e = 0; e < losses.size(); ++e)
    buf += std::to_string(e) + "," + format_double(losses[e]) + "\n";
  write_bytes(path, buf);
}

void write_metrics_csv(const std::string& path,
                       const std::vector<std::pair<std::string, double>>& metrics,
                       const Provenance& prov) {
  std::string buf;
  append_provenance(buf, prov);
  buf += "metric,value\n";
  for (const auto& [name, value] : metrics) buf += name + "," + format_double(value) + "\n";
  write_bytes(path, buf);
}

void write_trace_csv(const std::string& path, const TrainHistory& history,
                     const Provenance& prov) {
  if (history.clean_loss.size() != history.adv_loss.size() ||
      history.clean_loss.size() != history.gen_norm_mean.size())
    throw std::invalid_argument("write_trace_csv: ragged history columns");
  std::string buf;
  append_provenance(buf, prov);
  buf += "epoch,clean_loss,adv_loss,gen_norm_mean\n";
  for (std::size_t e = 0; e < history.clean_loss.size(); ++e)
    buf += std::to_string(e) + "," + format_double(history.clean_loss[e]) + "," +
           format_double(history.adv_loss[e]) + "," + format_double(history.gen_norm_mean[e]) +
           "\n";
  write_bytes(path, buf);
}

void write_robustness_csv(const std::string& path, const RobustnessReport& report,
                          const AttackConfig& cfg, const Provenance& prov) {
  std::string buf;
  append_provenance(buf, prov);
  buf += "# attack: steps=" + std::to_string(cfg.steps) +
         " step_size=" + format_double(cfg.step_size) +
         " momentum=" + format_double(cfg.momentum) +
         " restarts=" + std::to_string(cfg.restarts) + " seed=" + std::to_string(cfg.seed) + "\n";
  buf += "sample_id,epsilon,delta_max\n";
  for (const RobustnessRecord& rec : report.per_sample)
    buf += std::to_string(rec.sample_id) + "," + format_double(rec.epsilon) + "," +
           format_double(rec.delta_max) + "\n";
  buf += "epsilon,rho_hat\n";
  for (const auto& [eps, rho] : report.rho_hat)
    buf += format_double(eps) + "," + format_double(rho) + "\n";
  write_bytes(path, buf);
}

void write_theory_sidecar(const std::string& path, const RobustLinearSolutionD& sol) {
  nlohmann::ordered_json doc;
  doc["lambda"] = sol.lambda;
  doc["epsilon"] = sol.epsilon;
  doc["m_star"] = sol.m_star;
  doc["q_m"] = sol.q_m;
  doc["objective_value"] = sol.objective_value;
  write_bytes(path, doc.dump(2) + "\n");
}

} // namespace advrecon
