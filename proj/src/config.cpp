#include "advrecon/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace advrecon {

namespace {

[[noreturn]] void fail(int line, const std::string& message) {
  if (line > 0) throw std::invalid_argument("config line " + std::to_string(line) + ": " + message);
  throw std::invalid_argument("config: " + message);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

Index parse_int(const ConfigFile::Entry& e) {
  Index value = 0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end)
    fail(e.line, "key '" + e.key + "' expects an integer, got '" + e.value + "'");
  return value;
}

double parse_real(const ConfigFile::Entry& e) {
  char* end = nullptr;
  const double value = std::strtod(e.value.c_str(), &end);
  if (end != e.value.c_str() + e.value.size() || e.value.empty())
    fail(e.line, "key '" + e.key + "' expects a real number, got '" + e.value + "'");
  return value;
}

std::vector<Index> parse_int_list(const ConfigFile::Entry& e) {
  std::vector<Index> out;
  for (const std::string& tok : split_ws(e.value)) {
    Index v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
      fail(e.line, "key '" + e.key + "' expects integers, got '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) fail(e.line, "key '" + e.key + "' expects at least one value");
  return out;
}

std::vector<double> parse_real_list(const ConfigFile::Entry& e) {
  std::vector<double> out;
  for (const std::string& tok : split_ws(e.value)) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size())
      fail(e.line, "key '" + e.key + "' expects real numbers, got '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) fail(e.line, "key '" + e.key + "' expects at least one value");
  return out;
}

// index:value spectrum replacement tokens, e.g. "0:1e-4 1:1e-3"
std::vector<std::pair<Index, double>> parse_modifications(const ConfigFile::Entry& e) {
  std::vector<std::pair<Index, double>> out;
  for (const std::string& tok : split_ws(e.value)) {
    const std::size_t colon = tok.find(':');
    if (colon == std::string::npos)
      fail(e.line, "key 'modify' expects index:value tokens, got '" + tok + "'");
    Index idx = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + colon, idx);
    if (res.ec != std::errc() || res.ptr != tok.data() + colon)
      fail(e.line, "key 'modify' has a bad index in '" + tok + "'");
    const std::string num = tok.substr(colon + 1);
    char* end = nullptr;
    const double value = std::strtod(num.c_str(), &end);
    if (num.empty() || end != num.c_str() + num.size())
      fail(e.line, "key 'modify' has a bad value in '" + tok + "'");
    out.emplace_back(idx, value);
  }
  if (out.empty()) fail(e.line, "key 'modify' expects at least one token");
  return out;
}

void reject_unknown(const ConfigFile::Section& section, const std::set<std::string>& known) {
  for (const auto& e : section.entries)
    if (!known.count(e.key)) {
      const std::string where = section.name.empty() ? "top level" : "[" + section.name + "]";
      fail(e.line, "unknown key '" + e.key + "' in " + where);
    }
}

const ConfigFile::Entry* find_entry(const ConfigFile::Section& section, std::string_view key) {
  for (const auto& e : section.entries)
    if (e.key == key) return &e;
  return nullptr;
}

const ConfigFile::Entry& need_entry(const ConfigFile::Section& section, const std::string& key) {
  const ConfigFile::Entry* e = find_entry(section, key);
  if (!e) {
    const std::string where = section.name.empty() ? "top level" : "[" + section.name + "]";
    fail(section.line, "missing key '" + key + "' in " + where);
  }
  return *e;
}

constexpr char kPresetSec44[] = R"(# Linear min-max reproduction on the modified-spectrum operator.
experiment = sec44
output_dir = sec44

[operator]
kind = gaussian
m = 10
n = 20
seed = 7
modify = 0:1e-4 1:1e-3

[dataset]
source = gaussian
dim = 20
count = 50000
seed = 11

[trainer]
kind = linear
lambda = 1
epsilon = 0.1
learning_rate = 0.001
momentum = 0.9
epochs = 29000
batch_size = 4096
seed = 0
)";

constexpr char kPresetDeskGaussian[] = R"(# Desk-scale adversarial training, Gaussian measurements.
experiment = mnist-desk-gaussian
output_dir = mnist-desk-gaussian

[operator]
kind = gaussian
m = 25
n = 196
seed = 3

[dataset]
source = glyphs
side = 28
downsample = 2
count = 8150
train_count = 8000
seed = 1

[trainer]
kind = adv
lambda1 = 1
lambda2 = -0.1
epsilon = 1
parts = 4
beta1 = 0.5
beta2 = 0.999
learning_rate = 0.0001
batch_size = 128
epochs = 150
warmup_epochs = 30
seed = 5
f_hidden = 256
g_hidden = 48 48 48 48
f_seed = 101
g_seed = 202

[attack]
epsilons = 1 2 3
steps = 100
momentum = 0.9
restarts = 2
seed = 9
)";

constexpr char kPresetDeskDct[] = R"(# Desk-scale adversarial training, DCT-row measurements.
experiment = mnist-desk-dct
output_dir = mnist-desk-dct

[operator]
kind = dct
m = 25
n = 196
p = 256
seed = 3

[dataset]
source = glyphs
side = 28
downsample = 2
count = 8150
train_count = 8000
seed = 1

[trainer]
kind = adv
lambda1 = 1
lambda2 = -0.1
epsilon = 1
parts = 4
beta1 = 0.5
beta2 = 0.999
learning_rate = 0.0001
batch_size = 128
epochs = 150
warmup_epochs = 30
seed = 5
f_hidden = 256
g_hidden = 48 48 48 48
f_seed = 101
g_seed = 202

[attack]
epsilons = 1 2 3
steps = 100
momentum = 0.9
restarts = 2
seed = 9
)";

} // namespace

const ConfigFile::Section* ConfigFile::find(std::string_view name) const {
  for (const Section& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

ConfigFile parse_config_text(const std::string& text) {
  ConfigFile file;
  file.text = text;
  file.sections.push_back({"", {}, 0});

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (name.empty()) fail(line_no, "empty section name");
      if (file.find(name)) fail(line_no, "duplicate section [" + name + "]");
      file.sections.push_back({name, {}, line_no});
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) fail(line_no, "empty key");
    ConfigFile::Section& current = file.sections.back();
    if (find_entry(current, key)) fail(line_no, "duplicate key '" + key + "'");
    current.entries.push_back({key, value, line_no});
  }
  return file;
}

ConfigFile load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(std::move(buf).str());
}

std::string preset_text(const std::string& name) {
  if (name == "sec44") return kPresetSec44;
  if (name == "mnist-desk-gaussian") return kPresetDeskGaussian;
  if (name == "mnist-desk-dct") return kPresetDeskDct;
  throw std::invalid_argument("unknown preset '" + name +
                              "' (have: sec44, mnist-desk-gaussian, mnist-desk-dct)");
}

std::vector<std::string> preset_names() {
  return {"sec44", "mnist-desk-gaussian", "mnist-desk-dct"};
}

namespace {

OperatorSpec parse_operator(const ConfigFile::Section& s) {
  reject_unknown(s, {"kind", "m", "n", "p", "seed", "modify"});
  OperatorSpec spec;
  const std::string kind = need_entry(s, "kind").value;
  if (kind == "gaussian")
    spec.kind = OperatorKind::Gaussian;
  else if (kind == "dct")
    spec.kind = OperatorKind::DctRows;
  else
    fail(need_entry(s, "kind").line, "operator kind must be gaussian or dct, got '" + kind + "'");
  spec.m = parse_int(need_entry(s, "m"));
  spec.n = parse_int(need_entry(s, "n"));
  if (const auto* e = find_entry(s, "p")) spec.p = parse_int(*e);
  if (const auto* e = find_entry(s, "seed")) spec.seed = parse_int(*e);
  if (const auto* e = find_entry(s, "modify")) spec.modifications = parse_modifications(*e);
  return spec;
}

DatasetSpec parse_dataset(const ConfigFile::Section& s) {
  reject_unknown(s, {"source", "count", "dim", "side", "downsample", "train_count", "seed",
                     "images", "labels"});
  DatasetSpec spec;
  const ConfigFile::Entry& source = need_entry(s, "source");
  if (source.value == "gaussian")
    spec.source = DatasetSpec::Source::Gaussian;
  else if (source.value == "glyphs")
    spec.source = DatasetSpec::Source::Glyphs;
  else if (source.value == "mnist-idx")
    spec.source = DatasetSpec::Source::MnistIdx;
  else
    fail(source.line, "dataset source must be gaussian, glyphs or mnist-idx, got '" +
                          source.value + "'");
  if (const auto* e = find_entry(s, "count")) spec.count = parse_int(*e);
  if (const auto* e = find_entry(s, "dim")) spec.dim = parse_int(*e);
  if (const auto* e = find_entry(s, "side")) spec.side = parse_int(*e);
  if (const auto* e = find_entry(s, "downsample")) spec.downsample = parse_int(*e);
  if (const auto* e = find_entry(s, "train_count")) spec.train_count = parse_int(*e);
  if (const auto* e = find_entry(s, "seed")) spec.seed = parse_int(*e);
  if (const auto* e = find_entry(s, "images")) spec.images = e->value;
  if (const auto* e = find_entry(s, "labels")) spec.labels = e->value;

  switch (spec.source) {
    case DatasetSpec::Source::Gaussian:
      if (spec.count < 1 || spec.dim < 1)
        fail(s.line, "gaussian datasets need count and dim");
      break;
    case DatasetSpec::Source::Glyphs:
      if (spec.count < 1 || spec.side < 1) fail(s.line, "glyph datasets need count and side");
      break;
    case DatasetSpec::Source::MnistIdx:
      if (spec.images.empty()) fail(s.line, "mnist-idx datasets need an images path");
      break;
  }
  if (spec.downsample < 1) fail(s.line, "downsample factor must be positive");
  return spec;
}

TrainerSpec parse_trainer(const ConfigFile::Section& s) {
  TrainerSpec spec;
  const ConfigFile::Entry& kind = need_entry(s, "kind");

  if (kind.value == "linear") {
    reject_unknown(s, {"kind", "lambda", "epsilon", "learning_rate", "momentum", "epochs",
                       "batch_size", "seed"});
    spec.kind = TrainerSpec::Kind::Linear;
    LinearTrainConfig& cfg = spec.linear;
    if (const auto* e = find_entry(s, "lambda")) cfg.lambda = parse_real(*e);
    if (const auto* e = find_entry(s, "epsilon")) cfg.epsilon = parse_real(*e);
    if (const auto* e = find_entry(s, "learning_rate")) cfg.learning_rate = parse_real(*e);
    if (const auto* e = find_entry(s, "momentum")) cfg.momentum = parse_real(*e);
    if (const auto* e = find_entry(s, "epochs")) cfg.epochs = parse_int(*e);
    if (const auto* e = find_entry(s, "batch_size")) cfg.batch_size = parse_int(*e);
    if (const auto* e = find_entry(s, "seed")) cfg.seed = parse_int(*e);
    return spec;
  }

  const std::set<std::string> optimizer_keys = {
      "kind",   "lambda1", "lambda2",       "epsilon", "parts",  "beta1",  "beta2",
      "learning_rate", "batch_size", "epochs", "warmup_epochs", "seed", "f_hidden",
      "g_hidden", "f_seed", "g_seed", "variant", "mu", "beta"};

  if (kind.value == "adv") {
    std::set<std::string> keys = optimizer_keys;
    keys.erase("variant");
    keys.erase("mu");
    keys.erase("beta");
    reject_unknown(s, keys);
    spec.kind = TrainerSpec::Kind::Adversarial;
  } else if (kind.value == "baseline") {
    std::set<std::string> keys = optimizer_keys;
    keys.erase("lambda1");
    keys.erase("lambda2");
    keys.erase("parts");
    keys.erase("warmup_epochs");
    keys.erase("g_hidden");
    keys.erase("g_seed");
    reject_unknown(s, keys);
    spec.kind = TrainerSpec::Kind::Baseline;
    const ConfigFile::Entry& variant = need_entry(s, "variant");
    if (variant.value == "plain")
      spec.baseline.variant = BaselineVariant::Plain;
    else if (variant.value == "weight-decay")
      spec.baseline.variant = BaselineVariant::WeightDecay;
    else if (variant.value == "parseval")
      spec.baseline.variant = BaselineVariant::Parseval;
    else
      fail(variant.line, "baseline variant must be plain, weight-decay or parseval, got '" +
                             variant.value + "'");
    if (const auto* e = find_entry(s, "mu")) spec.baseline.mu = parse_real(*e);
    if (const auto* e = find_entry(s, "beta")) spec.baseline.beta = parse_real(*e);
  } else {
    fail(kind.line, "trainer kind must be linear, adv or baseline, got '" + kind.value + "'");
  }

  AdvTrainConfig& cfg = spec.adv;
  if (const auto* e = find_entry(s, "lambda1")) cfg.lambda1 = parse_real(*e);
  if (const auto* e = find_entry(s, "lambda2")) cfg.lambda2 = parse_real(*e);
  if (const auto* e = find_entry(s, "epsilon")) cfg.epsilon = parse_real(*e);
  if (const auto* e = find_entry(s, "parts")) cfg.K = parse_int(*e);
  if (const auto* e = find_entry(s, "beta1")) cfg.adam_beta1 = parse_real(*e);
  if (const auto* e = find_entry(s, "beta2")) cfg.adam_beta2 = parse_real(*e);
  if (const auto* e = find_entry(s, "learning_rate")) cfg.learning_rate = parse_real(*e);
  if (const auto* e = find_entry(s, "batch_size")) cfg.batch_size = parse_int(*e);
  if (const auto* e = find_entry(s, "epochs")) cfg.epochs = parse_int(*e);
  if (const auto* e = find_entry(s, "warmup_epochs")) cfg.warmup_epochs = parse_int(*e);
  if (const auto* e = find_entry(s, "seed")) cfg.seed = std::uint64_t(parse_int(*e));
  if (const auto* e = find_entry(s, "f_hidden")) spec.f_hidden = parse_int_list(*e);
  if (const auto* e = find_entry(s, "g_hidden")) spec.g_hidden = parse_int_list(*e);
  if (const auto* e = find_entry(s, "f_seed")) spec.f_seed = parse_int(*e);
  if (const auto* e = find_entry(s, "g_seed")) spec.g_seed = parse_int(*e);
  return spec;
}

AttackSpec parse_attack(const ConfigFile::Section& s) {
  reject_unknown(s, {"epsilons", "steps", "step_size", "momentum", "restarts", "seed"});
  AttackSpec spec;
  spec.epsilons = parse_real_list(need_entry(s, "epsilons"));
  for (double eps : spec.epsilons)
    if (!(eps >= 0)) fail(s.line, "attack epsilons must be non-negative");
  if (const auto* e = find_entry(s, "steps")) spec.cfg.steps = parse_int(*e);
  if (const auto* e = find_entry(s, "step_size")) spec.cfg.step_size = parse_real(*e);
  if (const auto* e = find_entry(s, "momentum")) spec.cfg.momentum = parse_real(*e);
  if (const auto* e = find_entry(s, "restarts")) spec.cfg.restarts = parse_int(*e);
  if (const auto* e = find_entry(s, "seed")) spec.cfg.seed = std::uint64_t(parse_int(*e));
  return spec;
}

} // namespace

ExperimentConfig parse_experiment(const ConfigFile& file) {
  ExperimentConfig out;
  out.text = file.text;

  for (const ConfigFile::Section& s : file.sections) {
    if (s.name.empty()) {
      reject_unknown(s, {"experiment", "output_dir"});
      if (const auto* e = find_entry(s, "experiment")) out.experiment = e->value;
      if (const auto* e = find_entry(s, "output_dir")) out.output_dir = e->value;
    } else if (s.name == "operator") {
      out.op = parse_operator(s);
      out.has_operator = true;
    } else if (s.name == "dataset") {
      out.dataset = parse_dataset(s);
      out.has_dataset = true;
    } else if (s.name == "trainer") {
      out.trainer = parse_trainer(s);
      out.has_trainer = true;
    } else if (s.name == "attack") {
      out.attack = parse_attack(s);
      out.has_attack = true;
    } else {
      fail(s.line, "unknown section [" + s.name + "]");
    }
  }
  return out;
}

MeasurementOperatorD build_operator(const OperatorSpec& spec) {
  MeasurementOperatorD op;
  switch (spec.kind) {
    case OperatorKind::Gaussian:
      op = gen_gaussian_operator(spec.m, spec.n, spec.seed);
      break;
    case OperatorKind::DctRows:
      op = gen_dct_operator(spec.m, spec.n, spec.p > 0 ? spec.p : default_dct_p(spec.n),
                            spec.seed);
      break;
    default:
      throw std::invalid_argument("build_operator: unsupported kind");
  }
  if (!spec.modifications.empty()) op = modify_spectrum(op, spec.modifications);
  return op;
}

Dataset build_dataset(const DatasetSpec& spec) {
  Dataset data;
  switch (spec.source) {
    case DatasetSpec::Source::Gaussian:
      data = sample_gaussian_signals(spec.count, spec.dim, spec.seed);
      break;
    case DatasetSpec::Source::Glyphs:
      data = synth_glyph_images(spec.count, spec.side, spec.seed);
      break;
    case DatasetSpec::Source::MnistIdx:
      data = load_mnist_idx(spec.images, spec.labels.empty()
                                             ? std::nullopt
                                             : std::optional<std::string>(spec.labels));
      break;
  }
  if (spec.downsample > 1) data = downsample(data, spec.downsample);
  return data;
}

std::pair<Dataset, Dataset> build_split(const DatasetSpec& spec) {
  if (spec.train_count < 1)
    throw std::invalid_argument("build_split: spec has no train_count");
  return train_test_split(build_dataset(spec), spec.train_count, spec.seed);
}

} // namespace advrecon
