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

#ifndef CROSYSLOG_SYNTH_HPP_
#define CROSYSLOG_SYNTH_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crosyslog/error.hpp"
#include "crosyslog/ingest.hpp"
#include "crosyslog/random.hpp"

namespace crosyslog {

// Message templates may contain the placeholders <num>, <hex>, <ip>, <path>,
// <node> and <mac>, which are filled with fresh random values per event.

struct ComponentSpec {
  std::string name;
  double weight = 1.0;
  std::vector<std::string> templates;  // normal messages
};

/// An anomaly template. template_id is its identity across systems; role
/// selects the emitting component by index into the system's lexicon.
struct AnomalyTemplate {
  std::string template_id;
  std::string family;  // label written for events of this template
  std::size_t role = 0;
  std::string level = "FATAL";
  std::string message;
  /// Follow-up events only occur after the head of a burst. They are also
  /// emitted, rarely, as normal events, so only context separates the two.
  bool followup = false;
};

struct SystemProfile {
  std::string system_id;
  std::vector<ComponentSpec> components;
  std::vector<AnomalyTemplate> anomaly_templates;
  /// (level, weight) pairs for normal events.
  std::vector<std::pair<std::string, double>> normal_levels{{"INFO", 1.0}};
  double anomaly_rate = 0.003;
  std::size_t cluster_min = 3;
  std::size_t cluster_max = 8;
  double template_noise = 0.05;
  /// Per-normal-event probability of emitting a follow-up template as normal.
  double followup_noise = 0.0001;
  std::uint64_t seed = 0;
  std::int64_t start_time = 1117838570;

  void validate() const {
    if (system_id.empty()) throw ConfigError("profile: empty system_id");
    if (components.empty()) throw ConfigError("profile " + system_id + ": empty component lexicon");
    for (const auto& c : components) {
      if (c.templates.empty()) throw ConfigError("profile " + system_id + ": component " + c.name + " has no templates");
      if (!(c.weight > 0)) throw ConfigError("profile " + system_id + ": component weight must be > 0");
    }
    if (!(anomaly_rate >= 0 && anomaly_rate <= 1)) throw ConfigError("profile " + system_id + ": anomaly_rate must be in [0, 1]");
    if (anomaly_rate > 0 && anomaly_templates.empty()) throw ConfigError("profile " + system_id + ": no anomaly templates");
    if (cluster_min < 1 || cluster_max < cluster_min) throw ConfigError("profile " + system_id + ": bad cluster bounds");
    if (!(template_noise >= 0 && template_noise <= 1)) throw ConfigError("profile " + system_id + ": template_noise must be in [0, 1]");
    if (normal_levels.empty()) throw ConfigError("profile " + system_id + ": no normal levels");
    for (const auto& a : anomaly_templates) {
      if (a.role >= components.size()) throw ConfigError("profile " + system_id + ": anomaly role out of range");
    }
    if (std::none_of(anomaly_templates.begin(), anomaly_templates.end(),
                     [](const AnomalyTemplate& a) { return !a.followup; }) &&
        anomaly_rate > 0) {
      throw ConfigError("profile " + system_id + ": every anomaly family needs a head template");
    }
  }
};

namespace detail {

inline std::string random_hex(Rng& rng, std::size_t digits) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  for (std::size_t i = 0; i < digits; ++i) s.push_back(kHex[rng.below(16)]);
  // keep at least one letter and one digit so it reads as an address
  s[rng.below(digits)] = kHex[10 + rng.below(6)];
  s[rng.below(digits)] = kHex[rng.below(10)];
  return s;
}

inline std::string fill_placeholders(const std::string& tmpl, Rng& rng) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '<') {
      const auto close = tmpl.find('>', i);
      if (close != std::string::npos) {
        const std::string key = tmpl.substr(i + 1, close - i - 1);
        if (key == "num") {
          out += std::to_string(rng.below(100000));
        } else if (key == "hex") {
          out += random_hex(rng, 16);
        } else if (key == "ip") {
          out += "10." + std::to_string(rng.below(256)) + "." + std::to_string(rng.below(256)) + "." +
                 std::to_string(1 + rng.below(254));
        } else if (key == "path") {
          static constexpr const char* kDirs[] = {"var", "tmp", "home", "opt", "scratch", "etc"};
          out += "/" + std::string(kDirs[rng.below(6)]) + "/" + random_hex(rng, 6) + "/f" +
                 std::to_string(rng.below(1000)) + ".dat";
        } else if (key == "node") {
          out += "R" + std::to_string(rng.below(64)) + "-M" + std::to_string(rng.below(2)) + "-N" +
                 std::to_string(rng.below(16));
        } else if (key == "mac") {
          for (int b = 0; b < 6; ++b) {
            if (b) out += ':';
            out += random_hex(rng, 2);
          }
        } else {
          out += tmpl.substr(i, close - i + 1);
        }
        i = close + 1;
        continue;
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

// Per-word mutation with probability p: letter substitution, insertion,
// deletion or transposition. Placeholders are left alone.
inline std::string mutate_words(const std::string& tmpl, double p, Rng& rng) {
  if (p <= 0) return tmpl;
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == ' ') {
      out.push_back(tmpl[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < tmpl.size() && tmpl[j] != ' ') ++j;
    std::string word = tmpl.substr(i, j - i);
    i = j;
    const bool alpha = std::all_of(word.begin(), word.end(), [](char c) { return c >= 'a' && c <= 'z'; });
    if (alpha && word.size() >= 3 && rng.bernoulli(p)) {
      const std::size_t pos = rng.below(word.size());
      const char letter = static_cast<char>('a' + rng.below(26));
      switch (rng.below(4)) {
        case 0: word[pos] = letter; break;
        case 1: word.insert(word.begin() + static_cast<std::ptrdiff_t>(pos), letter); break;
        case 2: word.erase(pos, 1); break;
        default:
          if (pos + 1 < word.size()) std::swap(word[pos], word[pos + 1]);
          break;
      }
    }
    out += word;
  }
  return out;
}

template <typename T, typename W>
std::size_t weighted_pick(const std::vector<T>& items, W weight_of, Rng& rng) {
  double total = 0;
  for (const auto& it : items) total += weight_of(it);
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < items.size(); ++i) {
    u -= weight_of(items[i]);
    if (u < 0) return i;
  }
  return items.size() - 1;
}

}  // namespace detail

/// Generates n_events labeled canonical events. Normal events interleave the
/// components' template streams; anomalies arrive as contiguous bursts of
/// one family, sized from [cluster_min, cluster_max], until the anomaly count
/// is within 10% of anomaly_rate * n_events. Timestamps strictly increase.
inline LogSplit generate_corpus(const SystemProfile& profile, std::size_t n_events) {
  profile.validate();
  if (n_events < 1) throw ConfigError("n_events must be >= 1");
  Rng rng(substream(profile.seed, "generator/" + profile.system_id));

  // Burst lengths.
  const double target = profile.anomaly_rate * static_cast<double>(n_events);
  const auto lo = static_cast<std::size_t>(std::ceil(0.9 * target - 1e-9));
  const auto hi = static_cast<std::size_t>(std::floor(1.1 * target + 1e-9));
  const auto goal = static_cast<std::size_t>(std::llround(target));
  std::vector<std::size_t> bursts;
  std::size_t total = 0;
  if (profile.anomaly_rate > 0) {
    if (hi < std::max<std::size_t>(lo, 1) || profile.cluster_min > hi) {
      throw InfeasibleRate("anomaly_rate " + std::to_string(profile.anomaly_rate) + " over " +
                           std::to_string(n_events) + " events cannot be met with bursts of at least " +
                           std::to_string(profile.cluster_min));
    }
    while (total < goal) {
      std::size_t len = static_cast<std::size_t>(rng.between(
          static_cast<std::int64_t>(profile.cluster_min), static_cast<std::int64_t>(profile.cluster_max)));
      len = std::min(len, std::max(goal - total, profile.cluster_min));
      if (total + len > hi) len = hi - total;
      if (len < profile.cluster_min) break;
      bursts.push_back(len);
      total += len;
    }
    if (total < lo || total > hi) {
      throw InfeasibleRate("cannot realize anomaly_rate " + std::to_string(profile.anomaly_rate) +
                           " with the given cluster bounds");
    }
  }
  const std::size_t n_normal = n_events - total;
  if (total > n_events || n_normal + 1 < bursts.size()) {
    throw InfeasibleRate("anomaly bursts do not fit into " + std::to_string(n_events) + " events");
  }

  // Distinct insertion gaps among the normal events (Floyd's sampling).
  std::set<std::size_t> gaps;
  for (std::size_t j = n_normal + 1 - bursts.size(); j <= n_normal; ++j) {
    const std::size_t t = rng.below(j + 1);
    gaps.insert(gaps.count(t) ? j : t);
  }
  std::vector<std::size_t> gap_list(gaps.begin(), gaps.end());

  std::vector<std::size_t> heads, followups;
  for (std::size_t i = 0; i < profile.anomaly_templates.size(); ++i) {
    (profile.anomaly_templates[i].followup ? followups : heads).push_back(i);
  }
  std::vector<std::string> families;
  for (auto i : heads) {
    const auto& f = profile.anomaly_templates[i].family;
    if (std::find(families.begin(), families.end(), f) == families.end()) families.push_back(f);
  }

  LogSplit out;
  out.system_id = profile.system_id;
  out.events.reserve(n_events);
  std::int64_t ts = profile.start_time;
  auto emit = [&](const std::string& label, const std::string& component, const std::string& level,
                  const std::string& tmpl) {
    LogEvent e;
    e.seq = static_cast<std::int64_t>(out.events.size());
    ts += 1 + static_cast<std::int64_t>(rng.below(4));
    e.timestamp = ts;
    e.label = label;
    e.component = component;
    e.level = level;
    e.message = detail::fill_placeholders(detail::mutate_words(tmpl, profile.template_noise, rng), rng);
    e.text = LogEvent::compose(e.component, e.level, e.message);
    out.events.push_back(std::move(e));
  };
  auto emit_burst = [&](std::size_t len) {
    const std::string& family = families[rng.below(families.size())];
    std::vector<std::size_t> fam_heads, fam_follow;
    for (auto i : heads) if (profile.anomaly_templates[i].family == family) fam_heads.push_back(i);
    for (auto i : followups) if (profile.anomaly_templates[i].family == family) fam_follow.push_back(i);
    for (std::size_t b = 0; b < len; ++b) {
      const bool follow = b > 0 && !fam_follow.empty() && rng.bernoulli(0.3);
      const auto& pool = follow ? fam_follow : fam_heads;
      const auto& a = profile.anomaly_templates[pool[rng.below(pool.size())]];
      emit(a.family, profile.components[a.role].name, a.level, a.message);
    }
  };

  std::size_t next_gap = 0;
  for (std::size_t i = 0; i <= n_normal; ++i) {
    while (next_gap < gap_list.size() && gap_list[next_gap] == i) emit_burst(bursts[next_gap++]);
    if (i == n_normal) break;
    if (!followups.empty() && rng.bernoulli(profile.followup_noise)) {
      const auto& a = profile.anomaly_templates[followups[rng.below(followups.size())]];
      emit("-", profile.components[a.role].name, a.level, a.message);
      continue;
    }
    const auto& comp = profile.components[detail::weighted_pick(
        profile.components, [](const ComponentSpec& c) { return c.weight; }, rng)];
    const auto& level = profile.normal_levels[detail::weighted_pick(
        profile.normal_levels, [](const auto& l) { return l.second; }, rng)].first;
    emit("-", comp.name, level, comp.templates[rng.below(comp.templates.size())]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Profile documents (JSON)

inline nlohmann::ordered_json profile_json(const SystemProfile& p) {
  nlohmann::ordered_json j;
  j["system_id"] = p.system_id;
  j["anomaly_rate"] = p.anomaly_rate;
  j["cluster_min"] = p.cluster_min;
  j["cluster_max"] = p.cluster_max;
  j["template_noise"] = p.template_noise;
  j["followup_noise"] = p.followup_noise;
  j["seed"] = p.seed;
  j["start_time"] = p.start_time;
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (const auto& [name, w] : p.normal_levels) levels.push_back({name, w});
  j["normal_levels"] = levels;
  nlohmann::ordered_json comps = nlohmann::ordered_json::array();
  for (const auto& c : p.components) {
    comps.push_back({{"name", c.name}, {"weight", c.weight}, {"templates", c.templates}});
  }
  j["components"] = comps;
  nlohmann::ordered_json anoms = nlohmann::ordered_json::array();
  for (const auto& a : p.anomaly_templates) {
    anoms.push_back({{"template_id", a.template_id}, {"family", a.family}, {"role", a.role},
                     {"level", a.level}, {"message", a.message}, {"followup", a.followup}});
  }
  j["anomaly_templates"] = anoms;
  return j;
}

inline SystemProfile parse_profile(const nlohmann::json& j) {
  SystemProfile p;
  try {
    p.system_id = j.at("system_id").get<std::string>();
    p.anomaly_rate = j.value("anomaly_rate", p.anomaly_rate);
    p.cluster_min = j.value("cluster_min", p.cluster_min);
    p.cluster_max = j.value("cluster_max", p.cluster_max);
    p.template_noise = j.value("template_noise", p.template_noise);
    p.followup_noise = j.value("followup_noise", p.followup_noise);
    p.seed = j.value("seed", p.seed);
    p.start_time = j.value("start_time", p.start_time);
    if (j.contains("normal_levels")) {
      p.normal_levels.clear();
      for (const auto& l : j.at("normal_levels")) p.normal_levels.emplace_back(l.at(0).get<std::string>(), l.at(1).get<double>());
    }
    for (const auto& c : j.at("components")) {
      p.components.push_back({c.at("name").get<std::string>(), c.value("weight", 1.0),
                              c.at("templates").get<std::vector<std::string>>()});
    }
    for (const auto& a : j.value("anomaly_templates", nlohmann::json::array())) {
      p.anomaly_templates.push_back({a.at("template_id").get<std::string>(), a.at("family").get<std::string>(),
                                     a.value("role", std::size_t{0}), a.value("level", std::string("FATAL")),
                                     a.at("message").get<std::string>(), a.value("followup", false)});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid profile: ") + e.what());
  }
  p.validate();
  return p;
}

inline SystemProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open profile " + path);
  try {
    return parse_profile(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid profile: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Benchmark: two source-like and two target-like systems.

struct BenchmarkSystem {
  SystemProfile profile;
  std::size_t n_events = 0;
  /// "source", "tbird" or "spirit": the split preset this system is sampled with.
  std::string role;
};

namespace detail {

// Shared anomaly families. Each has two head templates and one follow-up;
// role indexes the emitting component in every system's lexicon.
struct FamilyDef {
  const char* family;
  std::size_t role;
  const char* level;
  const char* heads[2];
  const char* followup;
};

// Generic normal statements that every system draws some of its templates
// from; the rest of each lexicon is system-specific.
inline constexpr const char* kGeneric[] = {
    "job <num> started on <node>",
    "job <num> completed exit status <num>",
    "session opened for user <num>",
    "session closed for user <num>",
    "heartbeat received from <node>",
    "service <num> restarted successfully",
    "configuration reloaded version <num>",
    "connection established with <ip>",
    "temperature reading <num> celsius nominal",
    "scheduler cycle completed <num> jobs",
    "network interface up speed <num>",
    "health check passed on <node>",
};

inline constexpr FamilyDef kSharedFamilies[] = {
    {"CACHEPAR", 0, "FATAL",
     {"instruction cache parity error detected at <hex>", "data cache parity failure uncorrectable in line <num>"},
     "cache scrub retry pending on <node>"},
    {"LINKFAIL", 3, "SEVERE",
     {"torus link failure on port <num> receiver error", "torus link down retransmit limit exceeded"},
     "link retraining initiated port <num>"},
    {"MEMECC", 0, "FATAL",
     {"uncorrectable ecc memory error at address <hex>", "ddr controller double bit error rank <num>"},
     "memory page retired at <hex>"},
    {"FSIO", 2, "SEVERE",
     {"lustre io error on <path> operation aborted", "filesystem journal corrupted <path> remounted readonly"},
     "filesystem check queued for <path>"},
};

}  // namespace detail

/// Four systems with pairwise-disjoint component lexicons. Each source
/// carries two of the four anomaly families and each target draws one family
/// from either source. srcA and tgtT are the
/// low-rate systems, srcB and tgtS the higher-rate ones.
inline std::vector<BenchmarkSystem> make_benchmark(std::uint64_t seed) {
  struct SystemDef {
    const char* id;
    const char* role;
    std::size_t n_events;
    double rate;
    std::size_t cmin, cmax;
    std::vector<std::size_t> families;  // indexes into kSharedFamilies
    std::vector<ComponentSpec> components;
    std::vector<std::pair<std::string, double>> levels;
  };

  const std::vector<SystemDef> defs = {
      {"srcA", "source", 150000, 0.0025, 2, 4, {0, 1},
       {{"KERNEL", 4, {"generating core <num>", "total of <num> ddr errors detected and corrected", "instruction cache parity error corrected", detail::kGeneric[8]}},
        {"APP", 2, {"ciod message received from node <node>", detail::kGeneric[0], detail::kGeneric[1]}},
        {"MMCS", 2, {"idoproxydb has been started", detail::kGeneric[5], detail::kGeneric[11]}},
        {"LINKCARD", 1, {"link card power module <num> status ok", detail::kGeneric[4]}},
        {"HARDWARE", 1, {"midplane service action <num> completed", detail::kGeneric[10]}},
        {"DISCOVERY", 1, {"node card discovered <node>", detail::kGeneric[6]}}},
       {{"INFO", 0.85}, {"WARNING", 0.07}, {"ERROR", 0.05}, {"SEVERE", 0.03}}},
      {"srcB", "source", 150000, 0.0035, 2, 4, {2, 3},
       {{"pbs_mom", 3, {"bad file descriptor in wait request select failed", detail::kGeneric[0], detail::kGeneric[1]}},
        {"sshd", 3, {"accepted publickey for user from <ip> port <num>", detail::kGeneric[2], detail::kGeneric[3]}},
        {"xinetd", 1, {"start service rsync pid <num>", detail::kGeneric[5]}},
        {"gmond", 2, {"cluster summary updated <num> hosts", detail::kGeneric[4], detail::kGeneric[9]}},
        {"smartd", 1, {"device sdb self test passed", detail::kGeneric[8]}},
        {"ntpd", 1, {"synchronized to <ip> stratum <num>", detail::kGeneric[7]}}},
       {{"INFO", 0.8}, {"NOTICE", 0.1}, {"WARNING", 0.06}, {"ERROR", 0.04}}},
      {"tgtT", "tbird", 500000, 0.0025, 2, 5, {0, 2},
       {{"klogd", 4, {"losing some ticks checking if cpu frequency changed", detail::kGeneric[8], detail::kGeneric[10]}},
        {"pbs_server", 2, {"open demux connection refused <num>", detail::kGeneric[0], detail::kGeneric[9]}},
        {"postfix", 1, {"message <hex> delivered to local mailbox", detail::kGeneric[7]}},
        {"ib_sm", 2, {"subnet sweep complete <num> lanes", detail::kGeneric[4]}},
        {"check_disks", 2, {"disk sda usage <num> percent", detail::kGeneric[11]}},
        {"dhcpd", 2, {"dhcprequest for <ip> from <mac> via eth", detail::kGeneric[2], detail::kGeneric[3]}}},
       {{"INFO", 0.88}, {"WARNING", 0.06}, {"ERROR", 0.06}}},
      {"tgtS", "spirit", 500000, 0.0045, 2, 6, {1, 3},
       {{"cciss", 3, {"cmd <hex> has check condition sense key <num>", "logical drive <num> online", detail::kGeneric[8]}},
        {"pbs_sched", 2, {"fairshare tree rebuilt <num> users", detail::kGeneric[0], detail::kGeneric[1]}},
        {"syslog_ng", 2, {"syslog ng startup succeeded", "stats dropped <num>", detail::kGeneric[5]}},
        {"infiniband", 2, {"hca <num> state active", detail::kGeneric[4], detail::kGeneric[10]}},
        {"raidmon", 1, {"battery learn cycle complete", detail::kGeneric[11]}},
        {"portmap", 1, {"registered program <num> version <num>", detail::kGeneric[7], detail::kGeneric[2]}}},
       {{"INFO", 0.75}, {"NOTICE", 0.1}, {"WARNING", 0.08}, {"ERROR", 0.07}}},
  };

  std::vector<BenchmarkSystem> out;
  for (const auto& d : defs) {
    SystemProfile p;
    p.system_id = d.id;
    p.components = d.components;
    p.normal_levels = d.levels;
    p.anomaly_rate = d.rate;
    p.cluster_min = d.cmin;
    p.cluster_max = d.cmax;
    p.seed = substream(seed, std::string("generator/") + d.id);
    p.start_time = 1117838570 + static_cast<std::int64_t>(out.size()) * 40000000;
    for (auto f : d.families) {
      const auto& fam = detail::kSharedFamilies[f];
      for (int h = 0; h < 2; ++h) {
        p.anomaly_templates.push_back({std::string(fam.family) + "." + std::to_string(h), fam.family, fam.role,
                                       fam.level, fam.heads[h], false});
      }
      p.anomaly_templates.push_back({std::string(fam.family) + ".f", fam.family, fam.role, fam.level,
                                     fam.followup, true});
    }
    out.push_back({std::move(p), d.n_events, d.role});
  }
  return out;
}

}  // namespace crosyslog

#endif  // CROSYSLOG_SYNTH_HPP_
