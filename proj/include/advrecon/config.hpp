#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "advrecon/attack.hpp"
#include "advrecon/data_io.hpp"
#include "advrecon/linear_trainer.hpp"
#include "advrecon/measurement.hpp"
#include "advrecon/neural.hpp"

namespace advrecon {

// Line-oriented experiment config: top-level and [section] blocks of
// key = value lines, # comments, blank lines ignored. The full schema is
// documented in the README; unknown sections or keys are rejected so typos
// fail loudly instead of silently using defaults.
struct ConfigFile {
  struct Entry {
    std::string key;
    std::string value;
    int line = 0;
  };
  struct Section {
    std::string name; // empty for the top level
    std::vector<Entry> entries;
    int line = 0;
  };

  std::vector<Section> sections; // index 0 is the top level
  std::string text;              // exact source, fingerprinted for provenance

  const Section* find(std::string_view name) const;
};

ConfigFile parse_config_text(const std::string& text);
ConfigFile load_config_file(const std::string& path);

// Embedded presets: sec44, mnist-desk-gaussian, mnist-desk-dct.
std::string preset_text(const std::string& name);
std::vector<std::string> preset_names();

struct OperatorSpec {
  OperatorKind kind = OperatorKind::Gaussian;
  Index m = 0;
  Index n = 0;
  Index p = 0; // DCT ambient size; 0 selects the smallest power of two > n
  std::int64_t seed = 0;
  std::vector<std::pair<Index, double>> modifications; // index:value replacements
};

struct DatasetSpec {
  enum class Source : std::uint8_t { Gaussian = 0, Glyphs = 1, MnistIdx = 2 };
  Source source = Source::Gaussian;
  Index count = 0;       // samples to synthesize (gaussian, glyphs)
  Index dim = 0;         // gaussian signal dimension
  Index side = 0;        // glyph render side
  Index downsample = 1;  // block-mean factor applied after render or load
  Index train_count = 0; // 0 means no train/test split
  std::int64_t seed = 0;
  std::string images; // mnist-idx paths
  std::string labels;
};

struct TrainerSpec {
  enum class Kind : std::uint8_t { Linear = 0, Adversarial = 1, Baseline = 2 };
  Kind kind = Kind::Linear;
  LinearTrainConfig linear;
  AdvTrainConfig adv; // optimizer settings for both adversarial and baseline runs
  BaselineConfig baseline;
  std::vector<Index> f_hidden; // reconstructor hidden widths
  std::vector<Index> g_hidden; // generator hidden widths
  std::int64_t f_seed = 1;     // network init streams
  std::int64_t g_seed = 2;
};

struct AttackSpec {
  std::vector<double> epsilons;
  AttackConfig cfg; // cfg.epsilon itself is unused; the list drives the sweep
};

struct ExperimentConfig {
  std::string experiment;
  std::string output_dir;
  OperatorSpec op;
  DatasetSpec dataset;
  TrainerSpec trainer;
  AttackSpec attack;
  bool has_operator = false;
  bool has_dataset = false;
  bool has_trainer = false;
  bool has_attack = false;
  std::string text; // source text, same as the ConfigFile it came from
};

// Strict typed extraction; commands check the has_* flags they need.
ExperimentConfig parse_experiment(const ConfigFile& file);

// Instantiate the specs through the owning modules.
MeasurementOperatorD build_operator(const OperatorSpec& spec);
Dataset build_dataset(const DatasetSpec& spec);
// Seeded split into (train, test); requires train_count > 0.
std::pair<Dataset, Dataset> build_split(const DatasetSpec& spec);

} // namespace advrecon
