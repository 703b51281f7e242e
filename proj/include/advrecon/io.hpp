#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "advrecon/attack.hpp"
#include "advrecon/data_io.hpp"
#include "advrecon/measurement.hpp"
#include "advrecon/neural.hpp"
#include "advrecon/theory.hpp"

namespace advrecon {

// Shared binary container: magic "ADVRECON-MAT" with its NUL, a version byte,
// rows and cols as little-endian u64, a one-byte kind tag, the generating seed
// as little-endian i64, then row-major little-endian doubles. Operators,
// learned reconstructors, and cached datasets all travel in it.
struct MatrixFile {
  Mat entries;
  std::uint8_t kind_tag = 0;
  std::int64_t seed = 0;
};

void write_matrix_file(const std::string& path, const Mat& entries, std::uint8_t kind_tag,
                       std::int64_t seed);
MatrixFile read_matrix_file(const std::string& path);

void save_operator(const std::string& path, const MeasurementOperatorD& op);
MeasurementOperatorD load_operator(const std::string& path);

// Dataset caching; the kind tag stores the source enum. The normalization
// record is not persisted: cached samples are already mapped to their range.
void save_dataset(const std::string& path, const Dataset& data);
Dataset load_dataset(const std::string& path);

// FNV-1a fingerprint of the effective config text, quoted in CSV headers.
std::uint64_t fnv1a_hash(std::string_view text);

// Comment header stamped on every CSV so identical runs emit identical bytes
// (no timestamps anywhere).
struct Provenance {
  std::uint64_t config_hash = 0;
  std::int64_t seed = 0;
  int version = 1;
};

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

// bin_lower,bin_upper,count histogram rows, then a labeled
// sigma_min,sigma_max,kappa summary line.
void write_conditioning_csv(const std::string& path, const ConditioningReport& report,
                            const Provenance& prov);

// epoch,loss rows.
void write_loss_csv(const std::string& path, const std::vector<double>& losses,
                    const Provenance& prov);

// metric,value rows in the given order.
void write_metrics_csv(const std::string& path,
                       const std::vector<std::pair<std::string, double>>& metrics,
                       const Provenance& prov);

// epoch,clean_loss,adv_loss,gen_norm_mean rows.
void write_trace_csv(const std::string& path, const TrainHistory& history, const Provenance& prov);

// sample_id,epsilon,delta_max rows, then labeled aggregate epsilon,rho_hat
// rows; the attack settings are echoed in one comment line.
void write_robustness_csv(const std::string& path, const RobustnessReport& report,
                          const AttackConfig& cfg, const Provenance& prov);

// JSON sidecar recording (lambda, epsilon, m_star, q_m, objective_value).
void write_theory_sidecar(const std::string& path, const RobustLinearSolutionD& sol);

} // namespace advrecon
