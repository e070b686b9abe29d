// kwocce command-line front end. Everything computational goes through the
// C API in kwocce/kwocce.h; this file owns flag parsing, config files,
// run manifests, and output layout.

#include "kwocce/kwocce.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// ------------------------------------------------------------- C API RAII

struct SchemeDel { void operator()(kw_scheme* p) const { kw_scheme_free(p); } };
struct DatasetDel { void operator()(kw_dataset* p) const { kw_dataset_free(p); } };
struct ModelDel { void operator()(kw_model* p) const { kw_model_free(p); } };
struct SweepDel { void operator()(kw_sweep* p) const { kw_sweep_free(p); } };
using SchemePtr = std::unique_ptr<kw_scheme, SchemeDel>;
using DatasetPtr = std::unique_ptr<kw_dataset, DatasetDel>;
using ModelPtr = std::unique_ptr<kw_model, ModelDel>;
using SweepPtr = std::unique_ptr<kw_sweep, SweepDel>;

std::string take_string(char* s) {
  std::string out = s ? s : "";
  kw_str_free(s);
  return out;
}

// Invalid arguments are flag/config mistakes (exit 2); anything else is a
// runtime failure (exit 1).
void check(kw_status status, const std::string& context) {
  if (status == KW_OK) return;
  const std::string message = context + ": " + kw_last_error();
  if (status == KW_ERR_INVALID_ARGUMENT) throw UsageError(message);
  throw std::runtime_error(message);
}

// ------------------------------------------------------------------ flags

struct FlagDef {
  const char* name;      // without leading dashes; config keys use the same name
  const char* fallback;  // nullptr = required
  const char* help;
};

class Args {
 public:
  Args(const std::vector<FlagDef>& defs, int argc, char** argv)
      : defs_(defs) {
    for (int i = 0; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg.rfind("--", 0) != 0) {
        throw UsageError("unexpected argument '" + arg + "'");
      }
      const std::string name = arg.substr(2);
      if (!known(name) && name != "config") {
        throw UsageError("unknown flag --" + name);
      }
      if (i + 1 >= argc) {
        throw UsageError("flag --" + name + " needs a value");
      }
      const std::string value = argv[++i];
      if (name == "config") {
        config_path_ = value;
      } else {
        explicit_[name] = value;
      }
    }
    if (!config_path_.empty()) load_config(config_path_);
  }

  bool has(const std::string& name) const {
    return explicit_.count(name) || from_config_.count(name) ||
           fallback(name) != nullptr;
  }

  bool given(const std::string& name) const {
    return explicit_.count(name) || from_config_.count(name);
  }

  std::string get(const std::string& name) const {
    if (const auto it = explicit_.find(name); it != explicit_.end()) {
      return it->second;
    }
    if (const auto it = from_config_.find(name); it != from_config_.end()) {
      return it->second;
    }
    if (const char* def = fallback(name)) return def;
    throw UsageError("missing required flag --" + name);
  }

  double get_real(const std::string& name) const {
    const std::string v = get(name);
    try {
      std::size_t pos = 0;
      const double out = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw UsageError("flag --" + name + ": expected a real number, got '" +
                       v + "'");
    }
  }

  long long get_int(const std::string& name) const {
    const std::string v = get(name);
    try {
      std::size_t pos = 0;
      const long long out = std::stoll(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw UsageError("flag --" + name + ": expected an integer, got '" + v +
                       "'");
    }
  }

  std::uint64_t get_u64(const std::string& name) const {
    const std::string v = get(name);
    try {
      std::size_t pos = 0;
      const unsigned long long out = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw UsageError("flag --" + name + ": expected an unsigned integer, got '" +
                       v + "'");
    }
  }

  // Resolved key=value lines in definition order; enough to replay the run.
  std::string manifest(const std::string& command,
                       const std::map<std::string, std::string>& overrides =
                           {}) const {
    std::string out = "command=" + command + "\n";
    out += "version=" + std::string(kw_version()) + "\n";
    for (const auto& def : defs_) {
      std::string value;
      if (const auto it = overrides.find(def.name); it != overrides.end()) {
        value = it->second;
      } else if (has(def.name)) {
        value = get(def.name);
      } else {
        continue;  // unresolved optional without default
      }
      out += std::string(def.name) + "=" + value + "\n";
    }
    return out;
  }

 private:
  bool known(const std::string& name) const {
    for (const auto& def : defs_) {
      if (name == def.name) return true;
    }
    return false;
  }

  const char* fallback(const std::string& name) const {
    for (const auto& def : defs_) {
      if (name == def.name) return def.fallback;
    }
    return nullptr;
  }

  void load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      const auto pos = line.find('=');
      if (pos == std::string::npos) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": expected key=value");
      }
      const std::string key = line.substr(0, pos);
      if (key == "command" || key == "version") continue;  // manifest replay
      if (!known(key)) {
        throw UsageError(path + ":" + std::to_string(line_no) +
                         ": unknown config key '" + key + "'");
      }
      from_config_.emplace(key, line.substr(pos + 1));
    }
  }

  std::vector<FlagDef> defs_;
  std::map<std::string, std::string> explicit_;
  std::map<std::string, std::string> from_config_;
  std::string config_path_;
};

// ------------------------------------------------------------- utilities

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string real17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::filesystem::path prepare_out_dir(const std::string& out) {
  std::filesystem::path dir(out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output dir " + out);
  return dir;
}

std::vector<double> parse_real_list(const std::string& s,
                                    const std::string& flag) {
  std::vector<double> out;
  std::stringstream stream(s);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("flag --" + flag + ": bad number '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("flag --" + flag + ": empty list");
  return out;
}

std::vector<std::int32_t> parse_hidden(const std::string& s) {
  std::vector<std::int32_t> out;
  if (s.empty()) return out;  // no hidden layer
  std::stringstream stream(s);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t pos = 0;
      const long v = std::stol(item, &pos);
      if (pos != item.size() || v <= 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::int32_t>(v));
    } catch (const std::exception&) {
      throw UsageError("flag --hidden: bad width '" + item + "'");
    }
  }
  return out;
}

SchemePtr load_scheme(const Args& args) {
  kw_scheme* raw = nullptr;
  check(kw_scheme_parse(args.get("scheme").c_str(), &raw), "--scheme");
  return SchemePtr(raw);
}

DatasetPtr read_dataset(const std::string& path, const kw_scheme* scheme) {
  kw_dataset* raw = nullptr;
  check(kw_dataset_read(path.c_str(), scheme, &raw), path);
  return DatasetPtr(raw);
}

int architecture_code(const std::string& name) {
  if (name == "binary") return KW_ARCH_BINARY;
  if (name == "cefr") return KW_ARCH_CEFR;
  if (name == "binned") return KW_ARCH_BINNED;
  throw UsageError("flag --arch: expected binary, cefr, or binned, got '" +
                   name + "'");
}

struct KernelDefaults { double alpha, beta; };

// Documented kernel defaults, recorded into manifests when the flags are
// omitted.
KernelDefaults kernel_defaults(const std::string& loss) {
  if (loss == "kwocce-log") return {3.0, 0.0};
  if (loss == "kwocce-exp") return {1.0, 3.0};
  if (loss == "kwocce-gaussian") return {0.5, 0.0};
  return {0.0, 0.0};  // linear and non-kernel losses
}

constexpr const char* kDefaultScheme = "part_max=20 cuts=16,28 levels=L1,L2,L3";
constexpr const char* kDefaultTargets = "100,99,98,97,96,95";
constexpr const char* kCompareLosses[] = {"cce",        "occ",
                                          "kwocce-linear", "kwocce-log",
                                          "kwocce-exp", "kwocce-gaussian"};

// --------------------------------------------------------------- gen-data

const std::vector<FlagDef> kGenDataFlags = {
    {"n", nullptr, "number of candidates"},
    {"seed", "1", "generator and split seed"},
    {"score-mean", "24", "fair-average score mean (0-40 scale)"},
    {"score-sd", "6", "fair-average score sd"},
    {"easy-sd", "0.8", "AM noise sd, easy regime"},
    {"hard-sd", "3", "AM noise sd, hard regime"},
    {"hard-fraction", "0.3", "probability a sample is hard"},
    {"embedding-dim", "16", "embedding feature count"},
    {"fractions", "0.8,0.1,0.1", "train,val,eval split fractions"},
    {"scheme", kDefaultScheme, "score scheme record"},
    {"out", nullptr, "output directory"},
};

int cmd_gen_data(const Args& args) {
  const long long n = args.get_int("n");
  if (n < 0) throw UsageError("flag --n: must be >= 0");
  const double hard_fraction = args.get_real("hard-fraction");
  if (!(hard_fraction >= 0.0 && hard_fraction <= 1.0)) {
    throw UsageError("flag --hard-fraction: must be in [0, 1]");
  }
  const auto fractions = parse_real_list(args.get("fractions"), "fractions");
  if (fractions.size() != 3) {
    throw UsageError("flag --fractions: expected train,val,eval");
  }

  const SchemePtr scheme = load_scheme(args);
  kw_generator_config cfg;
  kw_generator_config_defaults(&cfg);
  cfg.n_candidates = n;
  cfg.seed = args.get_u64("seed");
  cfg.score_mean = args.get_real("score-mean");
  cfg.score_sd = args.get_real("score-sd");
  cfg.am_noise_sd_easy = args.get_real("easy-sd");
  cfg.am_noise_sd_hard = args.get_real("hard-sd");
  cfg.hard_fraction = hard_fraction;
  cfg.embedding_dim = static_cast<std::int32_t>(args.get_int("embedding-dim"));

  kw_dataset* raw = nullptr;
  check(kw_dataset_generate(&cfg, scheme.get(), &raw), "gen-data");
  const DatasetPtr all(raw);

  kw_dataset *train_raw = nullptr, *val_raw = nullptr, *eval_raw = nullptr;
  check(kw_dataset_split(all.get(), fractions[0], fractions[1], fractions[2],
                         cfg.seed, scheme.get(), &train_raw, &val_raw,
                         &eval_raw),
        "gen-data split");
  const DatasetPtr train(train_raw), val(val_raw), eval(eval_raw);

  const auto dir = prepare_out_dir(args.get("out"));
  check(kw_dataset_write(train.get(), (dir / "train.txt").c_str()), "train.txt");
  check(kw_dataset_write(val.get(), (dir / "val.txt").c_str()), "val.txt");
  check(kw_dataset_write(eval.get(), (dir / "eval.txt").c_str()), "eval.txt");
  write_file(dir / "gen-data.manifest", args.manifest("gen-data"));

  std::cout << "wrote " << (dir / "train.txt").string() << " ("
            << kw_dataset_size(train.get()) << " samples), "
            << (dir / "val.txt").string() << " (" << kw_dataset_size(val.get())
            << "), " << (dir / "eval.txt").string() << " ("
            << kw_dataset_size(eval.get()) << ")\n";
  return 0;
}

/* ------------------------------------------------------------------ train */

const std::vector<FlagDef> kTrainFlags = {
    {"train", nullptr, "training dataset file"},
    {"loss", nullptr, "loss name (cce, occ, kwocce-*)"},
    {"arch", "binned", "binary | cefr | binned"},
    {"alpha", nullptr, "kernel alpha (default: documented per kernel)"},
    {"beta", nullptr, "kernel beta (default: documented per kernel)"},
    {"weight-scheme", "occ_style", "occ_style | literal"},
    {"epsilon", "1e-7", "probability clip before log"},
    {"hidden", "32", "hidden widths, comma list; empty for none"},
    {"lr", "0.05", "learning rate"},
    {"epochs", "30", "training epochs"},
    {"batch-size", "64", "mini-batch size"},
    {"seed", "0", "init and shuffle seed"},
    {"scheme", kDefaultScheme, "score scheme record"},
    {"name", nullptr, "output base name (default: loss name)"},
    {"out", nullptr, "output directory"},
};

struct TrainedModel {
  ModelPtr model;
  std::vector<double> curve;
};

TrainedModel train_one(const std::string& loss, double alpha, double beta,
                       const std::string& weight_scheme, double epsilon,
                       const std::vector<std::int32_t>& hidden, int arch_code,
                       std::uint64_t seed, double lr, int epochs,
                       int batch_size, const kw_dataset* data,
                       const kw_scheme* scheme) {
  kw_train_config cfg;
  kw_train_config_defaults(&cfg);
  cfg.architecture = arch_code;
  cfg.loss = loss.c_str();
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.weight_scheme = weight_scheme.c_str();
  cfg.epsilon = epsilon;
  cfg.hidden_layers = hidden.data();
  cfg.n_hidden = static_cast<std::int32_t>(hidden.size());
  cfg.seed = seed;
  cfg.learning_rate = lr;
  cfg.epochs = epochs;
  cfg.batch_size = batch_size;

  TrainedModel out;
  out.curve.resize(static_cast<std::size_t>(std::max(epochs, 0)));
  std::int32_t curve_len = 0;
  kw_model* raw = nullptr;
  check(kw_model_train(&cfg, data, scheme, &raw, out.curve.data(), &curve_len),
        "train " + loss);
  out.model.reset(raw);
  out.curve.resize(static_cast<std::size_t>(curve_len));
  return out;
}

int cmd_train(const Args& args) {
  const std::string loss = args.get("loss");
  const KernelDefaults defaults = kernel_defaults(loss);
  const double alpha =
      args.given("alpha") ? args.get_real("alpha") : defaults.alpha;
  const double beta = args.given("beta") ? args.get_real("beta") : defaults.beta;
  const int epochs = static_cast<int>(args.get_int("epochs"));
  if (epochs < 0) throw UsageError("flag --epochs: must be >= 0");
  // loss flags are checked before any file is touched
  check(kw_loss_validate(loss.c_str(), alpha, beta,
                         args.get("weight-scheme").c_str(),
                         args.get_real("epsilon")),
        "--loss");

  const SchemePtr scheme = load_scheme(args);
  const DatasetPtr data = read_dataset(args.get("train"), scheme.get());
  const auto hidden = parse_hidden(args.get("hidden"));

  const TrainedModel trained = train_one(
      loss, alpha, beta, args.get("weight-scheme"), args.get_real("epsilon"),
      hidden, architecture_code(args.get("arch")), args.get_u64("seed"),
      args.get_real("lr"), epochs,
      static_cast<int>(args.get_int("batch-size")), data.get(), scheme.get());

  const std::string name = args.has("name") ? args.get("name") : loss;
  const auto dir = prepare_out_dir(args.get("out"));
  check(kw_model_save(trained.model.get(), (dir / (name + ".model")).c_str()),
        "model save");
  std::string curve_text;
  for (const double v : trained.curve) curve_text += real17(v) + "\n";
  write_file(dir / (name + ".curve.txt"), curve_text);
  write_file(dir / (name + ".train.manifest"),
             args.manifest("train", {{"alpha", real17(alpha)},
                                     {"beta", real17(beta)},
                                     {"name", name}}));

  if (trained.curve.empty()) {
    std::cout << "trained " << loss << ": 0 epochs\n";
  } else {
    std::cout << "trained " << loss << ": final epoch mean loss "
              << real17(trained.curve.back()) << "\n";
  }
  std::cout << "wrote " << (dir / (name + ".model")).string() << "\n";
  return 0;
}

/* ------------------------------------------------------------------ sweep */

const std::vector<FlagDef> kSweepFlags = {
    {"model", nullptr, "model file"},
    {"data", nullptr, "evaluation dataset file"},
    {"steps", "1000", "threshold increments"},
    {"scheme", kDefaultScheme, "score scheme record"},
    {"out", nullptr, "output directory"},
};

SweepPtr run_sweep(const kw_model* model, const kw_dataset* data,
                   const kw_scheme* scheme, int steps) {
  kw_sweep* raw = nullptr;
  check(kw_sweep_run(model, data, scheme, steps, &raw), "sweep");
  return SweepPtr(raw);
}

double dataset_auc(const kw_model* model, const kw_dataset* data,
                   const kw_scheme* scheme) {
  const auto n = static_cast<std::size_t>(kw_dataset_size(data));
  std::vector<double> conf(n);
  std::vector<std::int32_t> correct(n);
  check(kw_model_confidences(model, data, scheme, conf.data()), "confidences");
  check(kw_dataset_correct(data, correct.data()), "labels");
  double auc = 0.0;
  check(kw_auc_roc(conf.data(), correct.data(),
                   static_cast<std::int64_t>(n), &auc),
        "auc");
  return auc;
}

std::string best_f1_summary(const kw_sweep* sweep, double auc) {
  const std::int32_t idx = kw_sweep_best_f1(sweep);
  kw_sweep_row row;
  check(kw_sweep_row_get(sweep, idx, &row), "best f1 row");
  std::string out = "best-f1 threshold=" + fixed4(row.threshold);
  out += " precision=" + fixed4(row.precision);
  out += " recall=" + fixed4(row.recall);
  out += " f1=" + fixed4(row.f1);
  out += " f05=" + fixed4(row.f05);
  out += " accuracy=" + fixed4(row.accuracy);
  out += " auc=" + fixed4(auc);
  out += " pct_released=" + fixed4(row.pct_released);
  return out;
}

int cmd_sweep(const Args& args) {
  const int steps = static_cast<int>(args.get_int("steps"));
  if (steps < 1) throw UsageError("flag --steps: must be >= 1");
  const SchemePtr scheme = load_scheme(args);
  kw_model* model_raw = nullptr;
  check(kw_model_load(args.get("model").c_str(), &model_raw), "model load");
  const ModelPtr model(model_raw);
  const DatasetPtr data = read_dataset(args.get("data"), scheme.get());

  const SweepPtr sweep = run_sweep(model.get(), data.get(), scheme.get(), steps);
  const auto dir = prepare_out_dir(args.get("out"));
  char* text = nullptr;
  check(kw_sweep_format(sweep.get(), KW_TABLE_CSV, &text), "sweep csv");
  write_file(dir / "sweep.csv", take_string(text));
  check(kw_sweep_format(sweep.get(), KW_TABLE_TEXT, &text), "sweep text");
  write_file(dir / "sweep.txt", take_string(text));
  write_file(dir / "sweep.manifest", args.manifest("sweep"));

  const double auc = dataset_auc(model.get(), data.get(), scheme.get());
  std::cout << best_f1_summary(sweep.get(), auc) << "\n";
  std::cout << "wrote " << (dir / "sweep.csv").string() << " ("
            << kw_sweep_rows(sweep.get()) << " rows)\n";
  return 0;
}

/* --------------------------------------------------------- release-report */

const std::vector<FlagDef> kReleaseFlags = {
    {"model", nullptr, "model file"},
    {"data", nullptr, "evaluation dataset file"},
    {"targets", kDefaultTargets, "agreement targets, percent"},
    {"steps", "1000", "threshold increments"},
    {"scheme", kDefaultScheme, "score scheme record"},
    {"out", nullptr, "output directory"},
};

int cmd_release_report(const Args& args) {
  const int steps = static_cast<int>(args.get_int("steps"));
  if (steps < 1) throw UsageError("flag --steps: must be >= 1");
  const auto targets = parse_real_list(args.get("targets"), "targets");
  const SchemePtr scheme = load_scheme(args);
  kw_model* model_raw = nullptr;
  check(kw_model_load(args.get("model").c_str(), &model_raw), "model load");
  const ModelPtr model(model_raw);
  const DatasetPtr data = read_dataset(args.get("data"), scheme.get());

  const SweepPtr sweep = run_sweep(model.get(), data.get(), scheme.get(), steps);
  const auto dir = prepare_out_dir(args.get("out"));
  char* text = nullptr;
  check(kw_release_report_format(sweep.get(), targets.data(),
                                 static_cast<std::int32_t>(targets.size()),
                                 KW_TABLE_CSV, &text),
        "release csv");
  write_file(dir / "release_report.csv", take_string(text));
  check(kw_release_report_format(sweep.get(), targets.data(),
                                 static_cast<std::int32_t>(targets.size()),
                                 KW_TABLE_TEXT, &text),
        "release text");
  const std::string rendered = take_string(text);
  write_file(dir / "release_report.txt", rendered);
  write_file(dir / "release-report.manifest", args.manifest("release-report"));

  std::cout << rendered;
  std::cout << "wrote " << (dir / "release_report.csv").string() << "\n";
  return 0;
}

/* ------------------------------------------------------------- grad-check */

const std::vector<FlagDef> kGradCheckFlags = {
    {"seed", "12345", "instance seed"},
    {"tolerance", "1e-4", "max allowed relative error"},
    {"instances", "6", "instances per loss/K case"},
};

int cmd_grad_check(const Args& args) {
  const double tolerance = args.get_real("tolerance");
  char* table = nullptr;
  double max_err = 0.0;
  std::int32_t passed = 0;
  check(kw_grad_check(args.get_u64("seed"),
                      static_cast<std::int32_t>(args.get_int("instances")),
                      tolerance, &table, &max_err, &passed),
        "grad-check");
  std::cout << take_string(table);
  if (!passed) {
    std::cerr << "grad-check FAILED: max relative error " << max_err
              << " > tolerance " << tolerance << "\n";
    return 1;
  }
  return 0;
}

/* ---------------------------------------------------------------- compare */

const std::vector<FlagDef> kCompareFlags = {
    {"train", nullptr, "training dataset file"},
    {"data", nullptr, "evaluation dataset file"},
    {"arch", "binned", "binary | cefr | binned"},
    {"weight-scheme", "occ_style", "occ_style | literal"},
    {"epsilon", "1e-7", "probability clip before log"},
    {"hidden", "32", "hidden widths, comma list; empty for none"},
    {"lr", "0.05", "learning rate"},
    {"epochs", "30", "training epochs"},
    {"batch-size", "64", "mini-batch size"},
    {"seed", "0", "shared seed for all runs"},
    {"steps", "1000", "threshold increments"},
    {"targets", kDefaultTargets, "agreement targets, percent"},
    {"scheme", kDefaultScheme, "score scheme record"},
    {"out", nullptr, "output directory"},
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out += ',';
      out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += row[i];
      }
      out += '\n';
    }
    return out;
  }

  std::string text() const {
    std::vector<std::size_t> widths(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) widths[i] = header[i].size();
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        widths[i] = std::max(widths[i], row[i].size());
      }
    }
    std::string out;
    const auto emit = [&](const std::vector<std::string>& row) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += "  ";
        const std::string& cell = row[i];
        out += std::string(widths[i] - cell.size(), ' ') + cell;
      }
      out += '\n';
    };
    emit(header);
    for (const auto& row : rows) emit(row);
    return out;
  }
};

int cmd_compare(const Args& args) {
  const int steps = static_cast<int>(args.get_int("steps"));
  if (steps < 1) throw UsageError("flag --steps: must be >= 1");
  const auto targets = parse_real_list(args.get("targets"), "targets");
  const int arch_code = architecture_code(args.get("arch"));
  const auto hidden = parse_hidden(args.get("hidden"));
  const SchemePtr scheme = load_scheme(args);
  const DatasetPtr train_data = read_dataset(args.get("train"), scheme.get());
  const DatasetPtr eval_data = read_dataset(args.get("data"), scheme.get());
  const auto dir = prepare_out_dir(args.get("out"));

  const double base_agreement =
      100.0 * kw_dataset_agreement_rate(eval_data.get());
  const double base_rmse = kw_dataset_am_rmse(eval_data.get());

  Table decision;
  decision.header = {"loss",   "threshold", "precision", "recall", "f1",
                     "f05",    "accuracy",  "auc",       "pct_released"};
  Table release;
  release.header = {"loss", "target", "pct_released", "rmse_released",
                    "threshold"};
  Table levels;
  levels.header = {"loss",      "averaging", "precision", "recall",
                   "f1",        "f05"};

  const auto n_eval = static_cast<std::size_t>(kw_dataset_size(eval_data.get()));
  for (const char* loss : kCompareLosses) {
    const KernelDefaults defaults = kernel_defaults(loss);
    const TrainedModel trained = train_one(
        loss, defaults.alpha, defaults.beta, args.get("weight-scheme"),
        args.get_real("epsilon"), hidden, arch_code, args.get_u64("seed"),
        args.get_real("lr"), static_cast<int>(args.get_int("epochs")),
        static_cast<int>(args.get_int("batch-size")), train_data.get(),
        scheme.get());
    check(kw_model_save(trained.model.get(),
                        (dir / (std::string(loss) + ".model")).c_str()),
          "model save");

    const SweepPtr sweep =
        run_sweep(trained.model.get(), eval_data.get(), scheme.get(), steps);
    kw_sweep_row best;
    check(kw_sweep_row_get(sweep.get(), kw_sweep_best_f1(sweep.get()), &best),
          "best f1 row");
    const double auc =
        dataset_auc(trained.model.get(), eval_data.get(), scheme.get());
    decision.rows.push_back({loss, fixed4(best.threshold),
                             fixed4(best.precision), fixed4(best.recall),
                             fixed4(best.f1), fixed4(best.f05),
                             fixed4(best.accuracy), fixed4(auc),
                             fixed4(best.pct_released)});

    std::vector<kw_release_row> report(targets.size());
    check(kw_sweep_release_report(sweep.get(), targets.data(),
                                  static_cast<std::int32_t>(targets.size()),
                                  report.data()),
          "release report");
    for (const auto& row : report) {
      release.rows.push_back(
          {loss, fixed4(row.target),
           row.feasible ? fixed4(row.pct_released) : "-",
           row.feasible && !std::isnan(row.rmse_released)
               ? fixed4(row.rmse_released)
               : "-",
           row.feasible ? fixed4(row.threshold) : "-"});
    }

    if (arch_code != KW_ARCH_BINARY) {
      std::vector<std::int32_t> predicted(n_eval);
      check(kw_model_predicted_levels(trained.model.get(), eval_data.get(),
                                      scheme.get(), predicted.data()),
            "predicted levels");
      std::vector<std::int32_t> fa_levels(n_eval);
      check(kw_dataset_fa_levels(eval_data.get(), fa_levels.data()),
            "fa levels");
      static const std::pair<kw_averaging, const char*> kAverages[] = {
          {KW_AVG_MICRO, "micro"},
          {KW_AVG_MACRO, "macro"},
          {KW_AVG_WEIGHTED, "weighted"}};
      for (const auto& [avg, avg_name] : kAverages) {
        double metrics[4] = {0, 0, 0, 0};
        check(kw_multiclass_metrics(fa_levels.data(), predicted.data(),
                                    static_cast<std::int64_t>(n_eval),
                                    kw_scheme_bands(scheme.get()), avg,
                                    metrics),
              "multiclass metrics");
        levels.rows.push_back({loss, avg_name, fixed4(metrics[0]),
                               fixed4(metrics[1]), fixed4(metrics[2]),
                               fixed4(metrics[3])});
      }
    }
  }

  write_file(dir / "compare_decision.csv", decision.csv());
  write_file(dir / "compare_decision.txt", decision.text());
  write_file(dir / "compare_release.csv", release.csv());
  write_file(dir / "compare_release.txt", release.text());
  if (!levels.rows.empty()) {
    write_file(dir / "compare_levels.csv", levels.csv());
    write_file(dir / "compare_levels.txt", levels.text());
  }
  write_file(dir / "compare.manifest", args.manifest("compare"));

  std::cout << "unaided AM baseline: cefr_agreement=" << fixed4(base_agreement)
            << " rmse=" << fixed4(base_rmse) << " (100% released)\n\n";
  std::cout << decision.text() << "\n" << release.text();
  std::cout << "wrote " << (dir / "compare_decision.csv").string() << ", "
            << (dir / "compare_release.csv").string() << "\n";
  return 0;
}

/* ------------------------------------------------------------------- main */

void print_usage(std::ostream& out) {
  out << "kwocce " << kw_version()
      << " - confidence modelling toolkit for automated essay scoring\n"
         "\n"
         "usage: kwocce <command> [--config FILE] [flags]\n"
         "\n"
         "commands:\n"
         "  gen-data        generate a synthetic train/val/eval corpus\n"
         "  train           train one confidence model\n"
         "  sweep           threshold sweep and best-F1 summary\n"
         "  release-report  % released at CEFR-agreement targets\n"
         "  grad-check      finite-difference check of loss gradients\n"
         "  compare         train all six losses and emit combined reports\n"
         "\n"
         "Config files hold key=value lines; keys equal flag names without\n"
         "the leading dashes. Explicit flags override config values.\n";
}

const std::vector<FlagDef>& flags_for(const std::string& command) {
  if (command == "gen-data") return kGenDataFlags;
  if (command == "train") return kTrainFlags;
  if (command == "sweep") return kSweepFlags;
  if (command == "release-report") return kReleaseFlags;
  if (command == "grad-check") return kGradCheckFlags;
  if (command == "compare") return kCompareFlags;
  throw UsageError("unknown command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    print_usage(std::cerr);
    return 2;
  }
  const std::string command = argv[1];
  if (command == "--help" || command == "-h" || command == "help") {
    print_usage(std::cout);
    return 0;
  }
  try {
    const Args args(flags_for(command), argc - 2, argv + 2);
    if (command == "gen-data") return cmd_gen_data(args);
    if (command == "train") return cmd_train(args);
    if (command == "sweep") return cmd_sweep(args);
    if (command == "release-report") return cmd_release_report(args);
    if (command == "grad-check") return cmd_grad_check(args);
    if (command == "compare") return cmd_compare(args);
    throw UsageError("unknown command '" + command + "'");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    print_usage(std::cerr);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
