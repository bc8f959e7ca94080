// Copyright 2026 The brbpay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "brbpay/bench/config_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace brbpay {

namespace {

using boost::property_tree::ptree;

std::string strip_comments(const std::string& text) {
  std::istringstream in(text);
  std::string out, line;
  while (std::getline(in, line)) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (!quoted && line[i] == '#' && i > 0) {
        line.resize(i);
        break;
      }
    }
    out += line;
    out += '\n';
  }
  return out;
}

ptree parse_ini(const std::string& text) {
  std::istringstream in(strip_comments(text));
  ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("run file: " + e.message() + " at line " + std::to_string(e.line()));
  }
  return tree;
}

std::string unquote(std::string v) {
  boost::algorithm::trim(v);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
  return v;
}

std::vector<std::string> list_of(const std::string& raw) {
  std::string v = unquote(raw);
  if (!v.empty() && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
  std::vector<std::string> parts, out;
  boost::algorithm::split(parts, v, boost::algorithm::is_any_of(","));
  for (auto& p : parts) {
    std::string t = unquote(p);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

template <class T>
T number(const std::string& key, const std::string& raw) {
  const std::string v = unquote(raw);
  T out{};
  auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size()) throw ConfigError("'" + key + "' wants a number, got '" + v + "'");
  return out;
}

bool boolean(const std::string& key, const std::string& raw) {
  const std::string v = unquote(raw);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("'" + key + "' wants true or false, got '" + v + "'");
}

std::uint32_t id_number(const std::string& token, char prefix) {
  std::string t = unquote(token);
  if (!t.empty() && t.front() == prefix) t.erase(0, 1);
  return number<std::uint32_t>(token, t);
}

SimTime ms(const std::string& key, const std::string& raw) {
  return static_cast<SimTime>(number<double>(key, raw) * kMillisecond);
}

void fill_faults(const ptree& section, FaultPlan& plan) {
  for (const auto& [key, node] : section) {
    if (!node.empty()) throw ConfigError("unexpected section '" + key + "' among fault keys");
    const std::string& v = node.data();
    if (key == "crash") {
      for (const auto& item : list_of(v)) {
        const auto at = item.find('@');
        if (at == std::string::npos) throw ConfigError("crash entries look like r3@30000, got '" + item + "'");
        plan.crashes[parse_replica(item.substr(0, at))] = ms("crash", item.substr(at + 1));
      }
    } else if (key == "delay") {
      for (const auto& item : list_of(v)) {
        const auto at = item.find('@');
        const auto plus = item.find('+', at == std::string::npos ? 0 : at);
        if (at == std::string::npos || plus == std::string::npos) {
          throw ConfigError("delay entries look like r3@30000+100, got '" + item + "'");
        }
        plan.delays[parse_replica(item.substr(0, at))] = {ms("delay", item.substr(at + 1, plus - at - 1)),
                                                          ms("delay", item.substr(plus + 1))};
      }
    } else if (key == "byzantine") {
      for (const auto& item : list_of(v)) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("byzantine entries look like r0=equivocate, got '" + item + "'");
        plan.byzantine[parse_replica(item.substr(0, eq))] = parse_behavior(unquote(item.substr(eq + 1)));
      }
    } else if (key == "double_spenders") {
      for (const auto& item : list_of(v)) plan.double_spenders.insert(parse_client(item));
    } else if (key == "withhold_prepare_reach") {
      plan.withhold_prepare_reach = number<int>(key, v);
    } else if (key == "withhold_commit_reach") {
      plan.withhold_commit_reach = number<int>(key, v);
    } else if (key == "extra_latency_ms") {
      plan.global_extra_latency = ms(key, v);
    } else if (key == "beyond_f") {
      plan.beyond_f = boolean(key, v);
    } else {
      throw ConfigError("unknown fault key '" + key + "'");
    }
  }
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read " + file.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

ReplicaId parse_replica(const std::string& token) { return ReplicaId{id_number(token, 'r')}; }
ClientId parse_client(const std::string& token) { return ClientId{id_number(token, 'c')}; }

BrbVariant parse_variant(const std::string& s) {
  if (s == "echo") return BrbVariant::kEcho;
  if (s == "sig") return BrbVariant::kSig;
  throw ConfigError("unknown broadcast variant '" + s + "' (echo or sig)");
}

void apply_run_config(const std::string& text, ScenarioOptions& o) {
  const ptree tree = parse_ini(text);
  for (const auto& [section, body] : tree) {
    if (section == "topology") {
      for (const auto& [key, node] : body) {
        const std::string& v = node.data();
        if (key == "n") {
          o.n = number<int>(key, v);
        } else if (key == "f") {
          o.f = number<int>(key, v);
        } else if (key == "shards") {
          o.shards = number<int>(key, v);
        } else if (key == "brb") {
          o.variant = parse_variant(unquote(v));
        } else if (key == "clients") {
          o.clients = number<int>(key, v);
        } else if (key == "initial_balance") {
          o.initial_balance = number<Amount>(key, v);
        } else if (key == "batch_ms") {
          o.batch_interval = ms(key, v);
        } else {
          throw ConfigError("unknown topology key '" + key + "'");
        }
      }
    } else if (section == "workload") {
      for (const auto& [key, node] : body) {
        const std::string& v = node.data();
        if (key == "kind") {
          o.workload = unquote(v);
        } else if (key == "payments") {
          o.payments = number<int>(key, v);
        } else if (key == "rate") {
          o.rate = number<double>(key, v);
        } else if (key == "horizon_ms") {
          o.horizon = ms(key, v);
        } else if (key == "seed") {
          o.seed = number<std::uint64_t>(key, v);
        } else {
          throw ConfigError("unknown workload key '" + key + "'");
        }
      }
    } else if (section == "faults") {
      FaultPlan plan = o.faults.value_or(FaultPlan{});
      fill_faults(body, plan);
      o.faults = std::move(plan);
    } else {
      throw ConfigError("unknown section '" + section + "'");
    }
  }
}

void load_run_config(const std::filesystem::path& file, ScenarioOptions& o) { apply_run_config(read_file(file), o); }

FaultPlan parse_fault_plan(const std::string& text) {
  const ptree tree = parse_ini(text);
  FaultPlan plan;
  ptree flat;
  for (const auto& [key, node] : tree) {
    if (key == "faults") {
      fill_faults(node, plan);
    } else if (node.empty()) {
      flat.push_back({key, node});
    } else {
      throw ConfigError("fault plans hold only a [faults] section, found [" + key + "]");
    }
  }
  fill_faults(flat, plan);
  return plan;
}

FaultPlan load_fault_plan(const std::filesystem::path& file) { return parse_fault_plan(read_file(file)); }

}  // namespace brbpay
