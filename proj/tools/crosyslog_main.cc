// Copyright 2026 The CroSysLog Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// crosyslog: command-line driver for ingestion, synthesis, embedding,
// meta-training, adaptation/evaluation and ablations.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "crosyslog/checkpoint.hpp"
#include "crosyslog/config.hpp"
#include "crosyslog/embedding.hpp"
#include "crosyslog/error.hpp"
#include "crosyslog/ingest.hpp"
#include "crosyslog/pipeline.hpp"
#include "crosyslog/synth.hpp"

namespace fs = std::filesystem;
using namespace crosyslog;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> tasks;
  std::string provider;
  std::vector<std::string> sets;
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_out = true) {
  cmd->add_option("--config", f.config, "flat dotted-key JSON config file");
  cmd->add_option("--seed", f.seed, "root seed");
  cmd->add_option("--tasks", f.tasks, "meta-testing tasks per target");
  cmd->add_option("--provider", f.provider, "hash or table:<path>");
  cmd->add_option("--set", f.sets, "override a config key (key=value)")->take_all();
  if (with_out) cmd->add_option("--out", f.out, "output path")->required();
}

// flags > file > defaults
RunConfig resolve_config(const CommonFlags& f) {
  RunConfig cfg;
  if (!f.config.empty()) cfg.load_file(f.config);
  for (const auto& s : f.sets) cfg.set_from_string(s);
  if (f.seed) cfg.seed = *f.seed;
  if (f.tasks) cfg.task_count = *f.tasks;
  if (!f.provider.empty()) cfg.provider = f.provider;
  cfg.validate();
  return cfg;
}

std::string system_id_of(const std::string& path) { return fs::path(path).stem().string(); }

LogSplit load_corpus(const std::string& path) { return load_canonical(path, system_id_of(path)); }

// "path" or "path@preset"
std::pair<std::string, std::optional<std::string>> split_target(const std::string& arg) {
  const auto at = arg.rfind('@');
  if (at == std::string::npos) return {arg, std::nullopt};
  return {arg.substr(0, at), arg.substr(at + 1)};
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::string percent(const std::optional<double>& v) {
  if (!v) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v * 100.0);
  return buf;
}

// Evaluates theta on one target and writes <dir>/<system>/{reports,summary,manifest}.json.
Summary evaluate_and_write(const RunConfig& base, const LstmParams& theta, const std::string& target_arg,
                           const fs::path& dir, SplitEncoder& encoder) {
  const auto [path, preset] = split_target(target_arg);
  RunConfig cfg = base;
  if (preset) cfg.set("tasks.target_preset", *preset);
  const LogSplit target = load_corpus(path);
  const EvalResult r = evaluate_on_target(cfg, theta, target, encoder);
  const fs::path sub = dir / target.system_id;
  ensure_dir(sub);
  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  for (const auto& rep : r.reports) reports.push_back(report_json(rep, cfg.report_timings));
  write_json(sub / "reports.json", reports);
  nlohmann::ordered_json summary = summary_json(r.summary, cfg.report_timings);
  summary["system_id"] = target.system_id;
  if (cfg.report_timings) summary["represent_time_s"] = r.timing.seconds(TimingLog::kRepresent);
  write_json(sub / "summary.json", summary);
  write_json(sub / "manifest.json", manifest_json(r.layouts));
  std::cout << target.system_id << ": macro-F1 " << percent(r.summary.macro_f1.mean) << " micro-F1 "
            << percent(r.summary.micro.f1) << " (" << r.summary.tasks << " tasks, "
            << r.summary.macro_f1.undefined << " undefined)\n";
  return r.summary;
}

int cmd_ingest(const std::string& in_path, const std::string& out_path) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw IoError("cannot open " + in_path);
  const RawParseResult parsed = parse_raw_stream(in);
  const auto events = normalize_corpus(parsed.records);
  save_canonical(out_path, events);
  std::cout << "wrote " << events.size() << " events, skipped " << parsed.skipped << " malformed lines, dropped "
            << parsed.records.size() - events.size() << " incomplete records\n";
  return 0;
}

int cmd_synth(const std::string& profile, std::uint64_t seed, std::size_t n_events, const fs::path& out) {
  ensure_dir(out);
  if (profile == "benchmark") {
    nlohmann::ordered_json index = nlohmann::ordered_json::array();
    for (const auto& b : make_benchmark(seed)) {
      const LogSplit c = generate_corpus(b.profile, b.n_events);
      const std::string file = b.profile.system_id + ".jsonl";
      save_canonical((out / file).string(), c.events);
      write_json(out / (b.profile.system_id + ".profile.json"), profile_json(b.profile));
      index.push_back({{"system_id", b.profile.system_id}, {"role", b.role}, {"file", file},
                       {"events", c.size()}, {"anomalies", c.anomaly_count()}});
      std::cout << b.profile.system_id << ": " << c.size() << " events, " << c.anomaly_count() << " anomalous\n";
    }
    write_json(out / "benchmark.json", {{"seed", seed}, {"systems", index}});
    return 0;
  }
  SystemProfile p = load_profile(profile);
  p.seed = seed;
  const LogSplit c = generate_corpus(p, n_events);
  save_canonical((out / (p.system_id + ".jsonl")).string(), c.events);
  std::cout << p.system_id << ": " << c.size() << " events, " << c.anomaly_count() << " anomalous\n";
  return 0;
}

int cmd_embed(const RunConfig& cfg, const std::string& corpus_path, const std::string& out) {
  const auto provider = make_provider(cfg);
  const LogSplit corpus = load_corpus(corpus_path);
  TableProvider::Table table;
  for (const auto& e : corpus.events) {
    const std::string text = preprocess(e.text);
    const std::uint64_t key = table_key(text);
    if (table.count(key)) continue;
    table.emplace(key, embed_event(text, *provider).values);
  }
  save_embedding_table(out, provider->dim(), table);
  std::cout << "wrote " << table.size() << " vectors of dim " << provider->dim() << " for " << corpus.size()
            << " events\n";
  return 0;
}

nlohmann::ordered_json train_log(const RunConfig& cfg, const TrainResult& r,
                                 const std::vector<std::vector<double>>& losses) {
  nlohmann::ordered_json j;
  j["config"] = cfg.to_json();
  j["query_losses"] = losses;
  if (cfg.report_timings) {
    j["meta_train_time_s"] = r.timing.seconds("meta_train");
    j["represent_time_s"] = r.timing.seconds(TimingLog::kRepresent);
  }
  return j;
}

TrainResult train_and_log(const RunConfig& cfg, const std::vector<std::string>& source_paths, const fs::path& dir,
                          SplitEncoder& encoder) {
  std::vector<LogSplit> sources;
  for (const auto& p : source_paths) sources.push_back(load_corpus(p));
  std::vector<const LogSplit*> ptrs;
  for (const auto& s : sources) ptrs.push_back(&s);
  std::vector<std::vector<double>> losses;
  TrainResult r = train_on_sources(cfg, ptrs, encoder, std::nullopt,
                                   [&](const EpochTelemetry& t) { losses.push_back(t.query_losses); });
  ensure_dir(dir);
  save_checkpoint((dir / "theta.cslm").string(), r.theta);
  write_json(dir / "train_manifest.json", manifest_json(r.layouts));
  write_json(dir / "train_log.json", train_log(cfg, r, losses));
  std::cout << "trained on " << sources.size() << " source(s), " << cfg.meta.meta_epochs << " epochs\n";
  return r;
}

int cmd_train(const RunConfig& cfg, const std::vector<std::string>& sources, const fs::path& out) {
  const auto provider = make_provider(cfg);
  SplitEncoder encoder(*provider);
  train_and_log(cfg, sources, out, encoder);
  return 0;
}

int cmd_adapt_eval(const RunConfig& cfg, const std::string& checkpoint, const std::vector<std::string>& targets,
                   const fs::path& out) {
  const LstmParams theta = load_checkpoint(checkpoint);
  const auto provider = make_provider(cfg);
  SplitEncoder encoder(*provider);
  for (const auto& t : targets) evaluate_and_write(cfg, theta, t, out, encoder);
  return 0;
}

int cmd_ablate(const RunConfig& cfg, const std::string& variant, const std::vector<std::string>& sources,
               const std::vector<std::string>& targets, const fs::path& out) {
  const auto provider = make_provider(cfg);
  SplitEncoder encoder(*provider);
  LstmParams theta = initial_params(cfg);
  if (variant == "multi-source") {
    theta = train_and_log(cfg, sources, out, encoder).theta;
  } else if (variant.rfind("single-source:", 0) == 0) {
    const std::string id = variant.substr(14);
    std::vector<std::string> chosen;
    for (const auto& s : sources) {
      if (system_id_of(s) == id) chosen.push_back(s);
    }
    if (chosen.empty()) throw ConfigError("no source corpus named '" + id + "'");
    theta = train_and_log(cfg, chosen, out, encoder).theta;
  } else if (variant != "no-meta") {
    throw ConfigError("variant must be multi-source, single-source:<id> or no-meta");
  }
  ensure_dir(out);
  nlohmann::ordered_json all;
  all["variant"] = variant;
  nlohmann::ordered_json per_target;
  for (const auto& t : targets) {
    const Summary s = evaluate_and_write(cfg, theta, t, out, encoder);
    per_target[system_id_of(split_target(t).first)] = percent_json(s.macro_f1.mean);
  }
  all["macro_f1"] = per_target;
  write_json(out / "ablation.json", all);
  return 0;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const SamplingError*>(&e)) return 4;
  if (dynamic_cast<const DataError*>(&e)) return 3;
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  return 1;
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-system log anomaly detection with meta-learning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "crosyslog 0.1.0");

  std::string in_path, out_path;
  auto* ingest = app.add_subcommand("ingest", "parse a raw supercomputer log into canonical JSON lines");
  ingest->add_option("--in", in_path, "raw log file")->required();
  ingest->add_option("--out", out_path, "canonical corpus")->required();

  std::string profile = "benchmark";
  std::uint64_t synth_seed = 0;
  std::size_t n_events = 100000;
  auto* synth = app.add_subcommand("synth", "generate synthetic labeled corpora");
  synth->add_option("--profile", profile, "profile JSON file or 'benchmark'");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--events", n_events, "events for a single profile");
  synth->add_option("--out", out_path, "output directory")->required();

  CommonFlags embed_flags;
  std::string corpus_path;
  auto* embed = app.add_subcommand("embed", "precompute event embeddings into a CSLG table");
  add_common(embed, embed_flags);
  embed->add_option("--corpus", corpus_path, "canonical corpus")->required();

  CommonFlags train_flags;
  std::vector<std::string> sources;
  auto* train = app.add_subcommand("train", "meta-train on source corpora");
  add_common(train, train_flags);
  train->add_option("--source", sources, "source corpus (repeatable)")->required();

  CommonFlags eval_flags;
  std::string checkpoint;
  std::vector<std::string> targets;
  auto* adapt = app.add_subcommand("adapt-eval", "fine-tune and evaluate on meta-testing tasks of target corpora");
  add_common(adapt, eval_flags);
  adapt->add_option("--checkpoint", checkpoint, "trained parameters (CSLM)")->required();
  adapt->add_option("--target", targets, "target corpus, optionally path@preset (repeatable)")->required();

  CommonFlags ablate_flags;
  std::string variant = "multi-source";
  auto* ablate = app.add_subcommand("ablate", "run one ablation variant end to end");
  add_common(ablate, ablate_flags);
  ablate->add_option("--variant", variant, "multi-source, single-source:<id> or no-meta");
  ablate->add_option("--source", sources, "source corpus (repeatable)");
  ablate->add_option("--target", targets, "target corpus, optionally path@preset (repeatable)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "crosyslog: error: " << one_line(e.what()) << '\n';
    return 2;
  }

  try {
    if (*ingest) return cmd_ingest(in_path, out_path);
    if (*synth) return cmd_synth(profile, synth_seed, n_events, out_path);
    if (*embed) return cmd_embed(resolve_config(embed_flags), corpus_path, embed_flags.out);
    if (*train) return cmd_train(resolve_config(train_flags), sources, train_flags.out);
    if (*adapt) return cmd_adapt_eval(resolve_config(eval_flags), checkpoint, targets, eval_flags.out);
    if (*ablate) {
      if (variant != "no-meta" && sources.empty()) throw ConfigError("--source is required for " + variant);
      return cmd_ablate(resolve_config(ablate_flags), variant, sources, targets, ablate_flags.out);
    }
  } catch (const std::exception& e) {
    std::cerr << "crosyslog: error: " << one_line(e.what()) << '\n';
    return exit_code_for(e);
  }
  return 0;
}
