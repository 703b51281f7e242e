#include <advrecon/cli.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <advrecon/attack.hpp>
#include <advrecon/config.hpp>
#include <advrecon/io.hpp>
#include <advrecon/linear_trainer.hpp>
#include <advrecon/neural.hpp>
#include <advrecon/theory.hpp>

namespace advrecon {

namespace fs = std::filesystem;

std::string resolve_output_path(const std::string& path) {
  const fs::path p(path);
  if (p.is_absolute()) return path;
  const char* root = std::getenv("ADVRECON_OUTPUT_ROOT");
  if (root == nullptr || *root == '\0') return path;
  return (fs::path(root) / p).string();
}

namespace {

void ensure_parent_dir(const std::string& file_path) {
  const fs::path parent = fs::path(file_path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

std::string require_input_file(const std::string& path, const std::string& what) {
  if (!fs::exists(path))
    throw std::invalid_argument("cannot open " + what + ": " + path);
  return path;
}

std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Flag-driven operator requests are serialized to the config syntax and fed
// through the regular parser, so both entry points validate identically and
// the text doubles as the provenance hash input.
std::string operator_section_text(const std::string& kind, Index m, Index n, Index p,
                                  std::int64_t seed, const std::string& modify) {
  std::string text = "[operator]\nkind = " + kind + "\n";
  text += "m = " + std::to_string(m) + "\n";
  text += "n = " + std::to_string(n) + "\n";
  if (p > 0) text += "p = " + std::to_string(p) + "\n";
  text += "seed = " + std::to_string(seed) + "\n";
  if (!modify.empty()) text += "modify = " + modify + "\n";
  return text;
}

Provenance text_provenance(const std::string& text, std::int64_t seed) {
  Provenance prov;
  prov.config_hash = fnv1a_hash(text);
  prov.seed = seed;
  return prov;
}

void print_conditioning(const ConditioningReport& report) {
  std::cout << "sigma_min = " << format_double(report.sigma_min)
            << "  sigma_max = " << format_double(report.sigma_max)
            << "  kappa = " << format_double(report.kappa) << "\n";
}

int cmd_matrix_gen(const std::string& kind, Index m, Index n, Index p, std::int64_t seed,
                   const std::string& modify, const std::string& out,
                   const std::string& hist) {
  const std::string text = operator_section_text(kind, m, n, p, seed, modify);
  const ExperimentConfig cfg = parse_experiment(parse_config_text(text));
  if (cfg.op.kind == OperatorKind::DctRows) {
    const Index ambient = cfg.op.p > 0 ? cfg.op.p : default_dct_p(cfg.op.n);
    if (ambient < cfg.op.n)
      throw std::invalid_argument("dct ambient size p (" + std::to_string(ambient) +
                                  ") must be at least the signal size n (" +
                                  std::to_string(cfg.op.n) + ")");
  }
  MeasurementOperatorD op = build_operator(cfg.op);
  const ConditioningReport report = conditioning_report(op);

  const std::string out_path = resolve_output_path(out);
  ensure_parent_dir(out_path);
  save_operator(out_path, op);
  std::cout << "wrote operator " << out_path << " (" << op.m << " x " << op.n << ")\n";
  print_conditioning(report);
  if (!hist.empty()) {
    const std::string hist_path = resolve_output_path(hist);
    ensure_parent_dir(hist_path);
    write_conditioning_csv(hist_path, report, text_provenance(text, seed));
    std::cout << "wrote conditioning histogram " << hist_path << "\n";
  }
  return 0;
}

int cmd_matrix_analyze(const std::string& in, const std::string& hist) {
  require_input_file(in, "operator file");
  MeasurementOperatorD op = load_operator(in);
  const ConditioningReport report = conditioning_report(op);
  print_conditioning(report);
  if (!hist.empty()) {
    // no config produced this operator, so hash the file itself
    const Provenance prov = text_provenance(slurp_file(in), op.seed);
    const std::string hist_path = resolve_output_path(hist);
    ensure_parent_dir(hist_path);
    write_conditioning_csv(hist_path, report, prov);
    std::cout << "wrote conditioning histogram " << hist_path << "\n";
  }
  return 0;
}

int cmd_theory_solve(const std::string& operator_path, double lambda, double epsilon,
                     const std::string& out_dir) {
  require_input_file(operator_path, "operator file");
  MeasurementOperatorD op = load_operator(operator_path);
  const RobustLinearSolutionD sol = theorem1_reconstructor(op, lambda, epsilon);
  if (!sol.B.allFinite()) throw std::runtime_error("reconstructor entries are not finite");

  // gains are the singular values of B, so the extremes give kappa directly
  const double kappa_b = sol.Q.maxCoeff() / sol.Q.minCoeff();

  const Mat pinv = pseudo_inverse(op);
  const double pinv_residual = (sol.B - pinv).norm() / pinv.norm();
  const bool pinv_match = pinv_residual <= 1e-9;

  const Mat oracle = numerical_oracle(op, lambda, epsilon);
  const double oracle_residual = (sol.B - oracle).norm() / oracle.norm();

  const std::string hash_text = slurp_file(operator_path) +
                                "\nlambda = " + format_double(lambda) +
                                "\nepsilon = " + format_double(epsilon) + "\n";
  const Provenance prov = text_provenance(hash_text, op.seed);

  const std::string dir = resolve_output_path(out_dir);
  fs::create_directories(dir);
  const std::string b_path = (fs::path(dir) / "b_theory.mat").string();
  write_matrix_file(b_path, sol.B, static_cast<std::uint8_t>(op.kind), op.seed);
  write_metrics_csv((fs::path(dir) / "theory_metrics.csv").string(),
                    {{"lambda", lambda},
                     {"epsilon", epsilon},
                     {"m_star", double(sol.m_star)},
                     {"q_m", sol.q_m},
                     {"objective_value", sol.objective_value},
                     {"kappa_b", kappa_b},
                     {"pinv_match", pinv_match ? 1.0 : 0.0},
                     {"oracle_residual", oracle_residual}},
                    prov);
  write_theory_sidecar((fs::path(dir) / "theory.json").string(), sol);

  std::cout << "kappa(B) = " << format_double(kappa_b) << "\n";
  std::cout << "m_star = " << sol.m_star << "  q_m = " << format_double(sol.q_m) << "\n";
  std::cout << "oracle residual = " << format_double(oracle_residual) << "\n";
  if (epsilon == 0.0)
    std::cout << "pseudo-inverse match: " << (pinv_match ? "true" : "false") << "\n";
  std::cout << "wrote " << b_path << "\n";
  return 0;
}

ExperimentConfig load_experiment(const std::string& preset, const std::string& config_path,
                                 std::string* effective_text) {
  if (preset.empty() == config_path.empty())
    throw std::invalid_argument("provide exactly one of --preset or --config");
  ConfigFile file;
  if (!preset.empty()) {
    file = parse_config_text(preset_text(preset));
  } else {
    require_input_file(config_path, "config file");
    file = load_config_file(config_path);
  }
  ExperimentConfig cfg = parse_experiment(file);
  if (cfg.output_dir.empty())
    cfg.output_dir = cfg.experiment.empty() ? std::string("out") : cfg.experiment;
  *effective_text = cfg.text;
  return cfg;
}

std::string experiment_out_dir(const ExperimentConfig& cfg) {
  const std::string dir = resolve_output_path(cfg.output_dir);
  fs::create_directories(dir);
  return dir;
}

int cmd_train_linear(const std::string& preset, const std::string& config_path) {
  std::string text;
  ExperimentConfig cfg = load_experiment(preset, config_path, &text);
  if (cfg.trainer.kind != TrainerSpec::Kind::Linear)
    throw std::invalid_argument("config does not describe a linear trainer; use the matching "
                                "train subcommand");
  if (!cfg.has_operator || !cfg.has_dataset)
    throw std::invalid_argument("linear training needs [operator] and [dataset] sections");

  MeasurementOperatorD op = build_operator(cfg.op);
  const Dataset data = build_dataset(cfg.dataset);
  const LinearTrainConfig& tc = cfg.trainer.linear;

  std::cout << "training linear reconstructor (" << tc.epochs << " epochs, batch "
            << tc.batch_size << ")\n";
  const LinearTrainResult result = train_minmax_linear(op, data, tc);
  const RobustLinearSolutionD sol = theorem1_reconstructor(op, tc.lambda, tc.epsilon);
  const LinearComparisonReport cmp = compare_linear(result.B, sol.B, op.entries);

  const Provenance prov = text_provenance(text, std::int64_t(tc.seed));
  const std::string dir = experiment_out_dir(cfg);
  const auto tag = static_cast<std::uint8_t>(op.kind);
  write_matrix_file((fs::path(dir) / "b_trained.mat").string(), result.B, tag,
                    std::int64_t(tc.seed));
  write_matrix_file((fs::path(dir) / "b_theory.mat").string(), sol.B, tag, op.seed);
  write_loss_csv((fs::path(dir) / "loss.csv").string(), result.loss_history, prov);
  write_metrics_csv((fs::path(dir) / "comparison.csv").string(),
                    {{"rel_frobenius", cmp.rel_frobenius},
                     {"rel_spectral", cmp.rel_spectral},
                     {"identity_ratio", cmp.identity_ratio},
                     {"kappa_theory", cmp.kappa_theory},
                     {"kappa_trained", cmp.kappa_trained}},
                    prov);

  std::cout << "rel_frobenius = " << format_double(cmp.rel_frobenius)
            << "  rel_spectral = " << format_double(cmp.rel_spectral) << "\n";
  std::cout << "identity_ratio = " << format_double(cmp.identity_ratio)
            << "  kappa_theory = " << format_double(cmp.kappa_theory)
            << "  kappa_trained = " << format_double(cmp.kappa_trained) << "\n";
  std::cout << "wrote " << dir << "/{b_trained.mat,b_theory.mat,loss.csv,comparison.csv}\n";
  return 0;
}

std::vector<Index> mlp_dims(Index io_dim, const std::vector<Index>& hidden) {
  std::vector<Index> dims;
  dims.push_back(io_dim);
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(io_dim);
  return dims;
}

int cmd_train_adv(const std::string& preset, const std::string& config_path) {
  std::string text;
  ExperimentConfig cfg = load_experiment(preset, config_path, &text);
  if (cfg.trainer.kind != TrainerSpec::Kind::Adversarial)
    throw std::invalid_argument("config does not describe an adversarial trainer; use the "
                                "matching train subcommand");
  if (!cfg.has_operator || !cfg.has_dataset)
    throw std::invalid_argument("adversarial training needs [operator] and [dataset] sections");

  MeasurementOperatorD op = build_operator(cfg.op);
  const Dataset train_set = cfg.dataset.train_count > 0 ? build_split(cfg.dataset).first
                                                        : build_dataset(cfg.dataset);
  Mlp f = init_mlp(mlp_dims(op.n, cfg.trainer.f_hidden), OutputActivation::Tanh,
                   cfg.trainer.f_seed);
  Mlp g = init_mlp(mlp_dims(op.m, cfg.trainer.g_hidden), OutputActivation::Linear,
                   cfg.trainer.g_seed);

  const AdvTrainConfig& tc = cfg.trainer.adv;
  std::cout << "adversarial training (" << tc.epochs << " epochs, warm-up " << tc.warmup_epochs
            << ", batch " << tc.batch_size << ", " << train_set.count() << " samples)\n";
  const AdvTrainResult result = adv_train(std::move(f), std::move(g), op.entries,
                                          train_set.samples, tc);

  const Provenance prov = text_provenance(text, std::int64_t(tc.seed));
  const std::string dir = experiment_out_dir(cfg);
  checkpoint_save(result.f, (fs::path(dir) / "f_adv.net").string());
  checkpoint_save(result.generator, (fs::path(dir) / "g_adv.net").string());
  write_trace_csv((fs::path(dir) / "trace_adv.csv").string(), result.history, prov);

  const TrainHistory& h = result.history;
  std::cout << "final clean loss = " << format_double(h.clean_loss.back())
            << "  adv loss = " << format_double(h.adv_loss.back())
            << "  mean ||G(y)|| = " << format_double(h.gen_norm_mean.back()) << "\n";
  std::cout << "wrote " << dir << "/{f_adv.net,g_adv.net,trace_adv.csv}\n";
  return 0;
}

std::string variant_tag(BaselineVariant v) {
  switch (v) {
    case BaselineVariant::Plain: return "plain";
    case BaselineVariant::WeightDecay: return "weight_decay";
    case BaselineVariant::Parseval: return "parseval";
  }
  throw std::logic_error("unreachable baseline variant");
}

int cmd_train_baseline(const std::string& preset, const std::string& config_path,
                       const std::string& variant, double mu, double beta) {
  std::string text;
  ExperimentConfig cfg = load_experiment(preset, config_path, &text);

  BaselineConfig bc;
  if (!variant.empty()) {
    // reuse an adversarial config's optimizer settings for a baseline run
    if (variant == "plain") bc.variant = BaselineVariant::Plain;
    else if (variant == "weight-decay") bc.variant = BaselineVariant::WeightDecay;
    else if (variant == "parseval") bc.variant = BaselineVariant::Parseval;
    else throw std::invalid_argument("variant must be plain, weight-decay or parseval");
    if (bc.variant == BaselineVariant::WeightDecay) bc.mu = mu;
    if (bc.variant == BaselineVariant::Parseval) bc.beta = beta;
    text += "# cli-override: trainer variant = " + variant + " mu = " + format_double(bc.mu) +
            " beta = " + format_double(bc.beta) + "\n";
  } else if (cfg.trainer.kind == TrainerSpec::Kind::Baseline) {
    bc = cfg.trainer.baseline;
  } else {
    throw std::invalid_argument("config does not describe a baseline trainer; pass --variant "
                                "to reuse an adversarial config");
  }
  bc.validate();
  if (!cfg.has_operator || !cfg.has_dataset)
    throw std::invalid_argument("baseline training needs [operator] and [dataset] sections");

  MeasurementOperatorD op = build_operator(cfg.op);
  const Dataset train_set = cfg.dataset.train_count > 0 ? build_split(cfg.dataset).first
                                                        : build_dataset(cfg.dataset);
  Mlp f = init_mlp(mlp_dims(op.n, cfg.trainer.f_hidden), OutputActivation::Tanh,
                   cfg.trainer.f_seed);

  const AdvTrainConfig& tc = cfg.trainer.adv;
  const std::string tag = variant_tag(bc.variant);
  std::cout << "baseline training (" << tag << ", " << tc.epochs << " epochs, batch "
            << tc.batch_size << ", " << train_set.count() << " samples)\n";
  const BaselineTrainResult result = train_baseline(std::move(f), op.entries,
                                                    train_set.samples, bc, tc);

  const Provenance prov = text_provenance(text, std::int64_t(tc.seed));
  const std::string dir = experiment_out_dir(cfg);
  checkpoint_save(result.f, (fs::path(dir) / ("f_" + tag + ".net")).string());
  write_trace_csv((fs::path(dir) / ("trace_" + tag + ".csv")).string(), result.history, prov);

  std::cout << "final clean loss = " << format_double(result.history.clean_loss.back()) << "\n";
  std::cout << "wrote " << dir << "/{f_" << tag << ".net,trace_" << tag << ".csv}\n";
  return 0;
}

// The two container formats share a 13-byte magic prefix layout, so the model
// kind is decided by those bytes rather than by filename.
AttackModel sniff_attack_model(const std::string& model_path, const MeasurementOperatorD& op) {
  const std::string bytes = slurp_file(model_path);
  const std::string mat_magic("ADVRECON-MAT\0", 13);
  const std::string net_magic("ADVRECON-NET\0", 13);
  if (bytes.size() >= 13 && bytes.compare(0, 13, mat_magic) == 0) {
    const MatrixFile mf = read_matrix_file(model_path);
    if (mf.entries.rows() != op.n || mf.entries.cols() != op.m)
      throw std::invalid_argument("reconstructor matrix shape does not match the operator");
    return linear_attack_model(mf.entries);
  }
  if (bytes.size() >= 13 && bytes.compare(0, 13, net_magic) == 0)
    return neural_attack_model(checkpoint_load(model_path), op.entries);
  throw std::invalid_argument("model file is neither a matrix container nor a network "
                              "checkpoint: " + model_path);
}

int cmd_attack_report(const std::string& model_path, const std::string& preset,
                      const std::string& config_path, const std::string& operator_path,
                      const std::string& epsilons_raw, const std::string& out) {
  std::string text;
  ExperimentConfig cfg = load_experiment(preset, config_path, &text);
  if (!cfg.has_dataset)
    throw std::invalid_argument("attack report needs a [dataset] section for the test set");

  char content_hash[32];
  MeasurementOperatorD op;
  if (!operator_path.empty()) {
    require_input_file(operator_path, "operator file");
    op = load_operator(operator_path);
    // hash file contents, not the path, so relocated identical inputs agree
    std::snprintf(content_hash, sizeof content_hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a_hash(slurp_file(operator_path))));
    text += std::string("# cli-override: operator = fnv1a:") + content_hash + "\n";
  } else if (cfg.has_operator) {
    op = build_operator(cfg.op);
  } else {
    throw std::invalid_argument("attack report needs an [operator] section or --operator");
  }

  std::vector<double> epsilons = cfg.has_attack ? cfg.attack.epsilons : std::vector<double>{};
  AttackConfig acfg = cfg.has_attack ? cfg.attack.cfg : AttackConfig{};
  if (!epsilons_raw.empty()) {
    epsilons.clear();
    std::istringstream stream(epsilons_raw);
    double value = 0;
    while (stream >> value) epsilons.push_back(value);
    if (!stream.eof() || epsilons.empty())
      throw std::invalid_argument("--epsilons expects whitespace-separated numbers");
    text += "# cli-override: epsilons = " + epsilons_raw + "\n";
  }
  if (epsilons.empty())
    throw std::invalid_argument("attack report needs an [attack] section or --epsilons");

  require_input_file(model_path, "model file");
  std::snprintf(content_hash, sizeof content_hash, "%016llx",
                static_cast<unsigned long long>(fnv1a_hash(slurp_file(model_path))));
  text += std::string("# cli-override: model = fnv1a:") + content_hash + "\n";
  const AttackModel model = sniff_attack_model(model_path, op);

  const Dataset test_set = cfg.dataset.train_count > 0 ? build_split(cfg.dataset).second
                                                       : build_dataset(cfg.dataset);
  std::cout << "attacking " << test_set.count() << " test samples at " << epsilons.size()
            << " budgets\n";
  const RobustnessReport report = rho_hat(model, op.entries, test_set.samples, epsilons, acfg);

  std::string out_path = out;
  if (out_path.empty()) {
    const std::string stem = fs::path(model_path).stem().string();
    out_path = (fs::path(cfg.output_dir) / ("robustness_" + stem + ".csv")).string();
  }
  out_path = resolve_output_path(out_path);
  ensure_parent_dir(out_path);
  write_robustness_csv(out_path, report, acfg, text_provenance(text, std::int64_t(acfg.seed)));

  for (const auto& [eps, rho] : report.rho_hat)
    std::cout << "rho_hat(" << format_double(eps) << ") = " << format_double(rho) << "\n";
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"adversarially robust reconstruction experiments"};
  app.require_subcommand(1);

  // matrix gen / matrix analyze
  auto* matrix = app.add_subcommand("matrix", "generate or inspect measurement operators");
  matrix->require_subcommand(1);
  std::string mg_kind, mg_modify, mg_out = "operator.mat", mg_hist;
  Index mg_m = 0, mg_n = 0, mg_p = 0;
  std::int64_t mg_seed = 0;
  auto* gen = matrix->add_subcommand("gen", "draw an operator and report its conditioning");
  gen->add_option("--kind", mg_kind, "gaussian or dct")->required();
  gen->add_option("--m", mg_m, "measurement count");
  gen->add_option("--n", mg_n, "signal size")->required();
  gen->add_option("--p", mg_p, "dct ambient size (default: next power of two above n)");
  gen->add_option("--seed", mg_seed, "draw seed");
  gen->add_option("--modify", mg_modify, "singular value replacements, e.g. \"0:1e-4 1:1e-3\"");
  gen->add_option("--out", mg_out, "operator file path");
  gen->add_option("--hist", mg_hist, "also write the conditioning histogram CSV here");

  std::string ma_in, ma_hist;
  auto* analyze = matrix->add_subcommand("analyze", "report conditioning of a stored operator");
  analyze->add_option("--in", ma_in, "operator file path")->required();
  analyze->add_option("--hist", ma_hist, "also write the conditioning histogram CSV here");

  // theory solve
  auto* theory = app.add_subcommand("theory", "closed-form robust reconstructors");
  theory->require_subcommand(1);
  std::string ts_operator, ts_out = "theory";
  double ts_lambda = 1.0, ts_epsilon = 0.1;
  auto* solve = theory->add_subcommand("solve", "solve the robust linear problem for an "
                                                "operator and cross-check it numerically");
  solve->add_option("--operator", ts_operator, "operator file path")->required();
  solve->add_option("--lambda", ts_lambda, "adversarial weight (> 0)");
  solve->add_option("--epsilon", ts_epsilon, "perturbation budget (>= 0)");
  solve->add_option("--out", ts_out, "output directory");

  // train linear / adv / baseline
  auto* train = app.add_subcommand("train", "train reconstructors from a config or preset");
  train->require_subcommand(1);
  std::string tl_preset, tl_config;
  auto* tlinear = train->add_subcommand("linear", "min-max training of a linear reconstructor, "
                                                  "compared against the closed form");
  tlinear->add_option("--preset", tl_preset, "built-in preset name");
  tlinear->add_option("--config", tl_config, "config file path");

  std::string ta_preset, ta_config;
  auto* tadv = train->add_subcommand("adv", "adversarial reconstructor + generator training");
  tadv->add_option("--preset", ta_preset, "built-in preset name");
  tadv->add_option("--config", ta_config, "config file path");

  std::string tb_preset, tb_config, tb_variant;
  double tb_mu = 1e-5, tb_beta = 1e-5;
  auto* tbase = train->add_subcommand("baseline", "clean-loss training (plain, weight decay "
                                                  "or orthonormality penalty)");
  tbase->add_option("--preset", tb_preset, "built-in preset name");
  tbase->add_option("--config", tb_config, "config file path");
  tbase->add_option("--variant", tb_variant,
                    "plain, weight-decay or parseval; overrides the config's trainer");
  tbase->add_option("--mu", tb_mu, "weight decay coefficient for --variant weight-decay");
  tbase->add_option("--beta", tb_beta, "orthonormality coefficient for --variant parseval");

  // attack report
  auto* attack = app.add_subcommand("attack", "robustness evaluation");
  attack->require_subcommand(1);
  std::string ar_model, ar_preset, ar_config, ar_operator, ar_epsilons, ar_out;
  auto* report = attack->add_subcommand("report", "per-sample worst-case errors and rho_hat "
                                                  "over an epsilon grid");
  report->add_option("--model", ar_model, "matrix container or network checkpoint")->required();
  report->add_option("--preset", ar_preset, "built-in preset name");
  report->add_option("--config", ar_config, "config file path");
  report->add_option("--operator", ar_operator, "operator file overriding the config's");
  report->add_option("--epsilons", ar_epsilons, "budgets overriding the config's, e.g. \"1 2 3\"");
  report->add_option("--out", ar_out, "report CSV path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e); // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (gen->parsed()) return cmd_matrix_gen(mg_kind, mg_m, mg_n, mg_p, mg_seed, mg_modify,
                                             mg_out, mg_hist);
    if (analyze->parsed()) return cmd_matrix_analyze(ma_in, ma_hist);
    if (solve->parsed()) return cmd_theory_solve(ts_operator, ts_lambda, ts_epsilon, ts_out);
    if (tlinear->parsed()) return cmd_train_linear(tl_preset, tl_config);
    if (tadv->parsed()) return cmd_train_adv(ta_preset, ta_config);
    if (tbase->parsed()) return cmd_train_baseline(tb_preset, tb_config, tb_variant, tb_mu,
                                                   tb_beta);
    if (report->parsed()) return cmd_attack_report(ar_model, ar_preset, ar_config, ar_operator,
                                                   ar_epsilons, ar_out);
    throw std::logic_error("no subcommand dispatched");
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

} // namespace advrecon
