// Copyright 2026 The minet Authors
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

// minctl: command line front end for the registry, scenarios, FIB benchmark
// and partition analysis.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "minet/cap.hpp"
#include "minet/error.hpp"
#include "minet/hpt_fib.hpp"
#include "minet/registry.hpp"
#include "minet/scenario.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace minet;

namespace {

struct Global {
  std::uint64_t seed = 1;
  std::string config;
  std::string out;
  std::string state = "minet-state";
};

/// Files produced by a run, by name, in write order.
using Outputs = std::vector<std::pair<std::string, std::string>>;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) fail(ErrorCode::Io, "cannot write " + p.string());
}

// --- Reproducible runs ------------------------------------------------------

/// Runs the experiment described by `m`. Paths inside `m` are relative to
/// `base`. Returns the output files and the names of those that must be
/// byte-identical on replay.
std::pair<Outputs, std::vector<std::string>> run_manifest(const json& m, const fs::path& base) {
  const std::string cmd = m.at("command");
  std::uint64_t seed = m.at("seed");
  Outputs out;
  if (cmd == "scenario") {
    NetworkConfig cfg = load_network_config((base / m.at("config").get<std::string>()).string());
    if (m.contains("size")) {
      for (auto& r : cfg.resources) r.size = m.at("size");
    }
    std::vector<std::string> flows;
    for (const std::string& sel : m.at("flows").get<std::vector<std::string>>()) {
      bool is_flow = false;
      for (const auto& f : cfg.flows) is_flow = is_flow || f.id == sel;
      if (is_flow) {
        flows.push_back(sel);
        continue;
      }
      ScenarioKind kind = parse_scenario_kind(sel);
      auto it = std::find_if(cfg.flows.begin(), cfg.flows.end(), [&](const FlowSpec& f) { return f.kind == kind; });
      if (it == cfg.flows.end()) fail(ErrorCode::NotFound, "no flow of kind " + sel + " in the configuration");
      flows.push_back(it->id);
    }
    RunResult r = run_flows(cfg, flows, seed);
    std::string csv = "flow," + transfer_csv_header() + ",hash_ok,regime_violations\n";
    for (const auto& t : r.reports) {
      csv += t.flow + ',' + to_csv_row(t) + ',' + (t.hash_ok() ? "yes" : "no") + ',' +
             std::to_string(t.regime_violations) + '\n';
    }
    out.emplace_back("report.csv", csv);
    out.emplace_back("metrics.csv", r.metrics_csv);
    return {out, {"report.csv", "metrics.csv"}};
  }
  if (cmd == "cap") {
    cap::Topology t = cap::Topology::load((base / m.at("config").get<std::string>()).string());
    std::uint64_t samples = m.at("samples");
    cap::QuorumRule rule{m.value("quorum", 0.5)};
    std::ostringstream csv, summary;
    if (m.value("hierarchical", false)) {
      cap::PartitionReport composed = cap::estimate_hierarchical(t, rule, samples, seed);
      cap::PartitionReport flat = cap::estimate_hierarchical_flat(t, rule, samples, seed);
      csv << cap::report_csv_header() << cap::report_csv_row("composed", composed) << cap::report_csv_row("flat", flat);
      summary << "composed tolerance " << composed.tolerance << " +/- " << composed.half_width << ", flat "
              << flat.tolerance << " +/- " << flat.half_width << '\n';
    } else {
      cap::PartitionReport mc = cap::estimate_tolerance(t, rule, samples, seed);
      if (m.value("exact", false)) {
        cap::PartitionReport ex = cap::exact_tolerance(t, rule);
        csv << "samples,tolerance_sampled,tolerance_exact,repair_sampled,repair_exact,half_width\n"
            << mc.samples << ',' << mc.tolerance << ',' << ex.tolerance << ',' << mc.avg_min_repair << ','
            << ex.avg_min_repair << ',' << mc.half_width << '\n';
        summary << "exact tolerance " << ex.tolerance << ", average minimum repair " << ex.avg_min_repair
                << " edges\n";
      } else {
        csv << cap::report_csv_header() << cap::report_csv_row("sampled", mc);
      }
      summary << "sampled tolerance " << mc.tolerance << " +/- " << mc.half_width << " over " << mc.samples
              << " samples, average minimum repair " << mc.avg_min_repair << " edges\n";
    }
    summary << t.nodes.size() << " nodes, " << t.participants() << " participants, " << t.edges.size() << " edges\n";
    out.emplace_back("cap.csv", csv.str());
    out.emplace_back("summary.txt", summary.str());
    return {out, {"cap.csv", "summary.txt"}};
  }
  if (cmd == "bench-fib") {
    std::ostringstream csv;
    csv << "n,seconds,ns_per_entry,ratio_to_first\n";
    double first = 0;
    for (std::size_t n : m.at("sizes").get<std::vector<std::size_t>>()) {
      FibBenchRow row = bench_fib_insert(n, seed);
      if (first == 0) first = row.ns_per_entry;
      csv << row.n << ',' << row.seconds << ',' << row.ns_per_entry << ',' << row.ns_per_entry / first << '\n';
    }
    out.emplace_back("bench.csv", csv.str());
    return {out, {}};
  }
  fail(ErrorCode::InvalidArgument, "unknown command in manifest: " + cmd);
}

/// Runs `m`, prints the primary output and, with an output directory,
/// writes the manifest, a copy of the input file and every output.
void run_and_record(json m, const Global& g, const std::string& input) {
  fs::path base = fs::current_path();
  if (!input.empty()) {
    m["config"] = fs::absolute(input).string();
  }
  auto [files, stable] = run_manifest(m, base);
  for (const auto& [name, text] : files) {
    if (name == "metrics.csv") continue;
    std::cout << text;
  }
  if (g.out.empty()) return;
  fs::path dir = g.out;
  fs::create_directories(dir);
  if (!input.empty()) {
    std::string copy = "input" + fs::path(input).extension().string();
    fs::copy_file(input, dir / copy, fs::copy_options::overwrite_existing);
    m["config"] = copy;
  }
  m["deterministic_outputs"] = stable;
  write_file(dir / "manifest.json", m.dump(2) + "\n");
  for (const auto& [name, text] : files) write_file(dir / name, text);
}

int replay(const fs::path& dir) {
  json m = json::parse(read_file(dir / "manifest.json"));
  auto [files, stable] = run_manifest(m, dir);
  bool same = true;
  for (const auto& [name, text] : files) {
    bool checked = std::find(stable.begin(), stable.end(), name) != stable.end();
    if (!checked) {
      std::cout << name << ": not compared (wall-clock timing)\n";
      continue;
    }
    bool eq = fs::exists(dir / name) && read_file(dir / name) == text;
    std::cout << name << ": " << (eq ? "identical" : "differs") << '\n';
    same = same && eq;
  }
  return same ? 0 : 1;
}

Identifier parse_name(const std::string& s) { return parse_identifier(s); }

json record_json(const ResourceRecord& r) {
  return {{"name", r.name.to_string()},
          {"content_hash", to_hex(r.content_hash)},
          {"locator", r.locator.to_string()},
          {"publisher", to_hex(r.publisher.value)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minet control tool"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "Simulation seed")->capture_default_str();
  app.add_option("--config", g.config, "Scenario or topology file");
  app.add_option("--out", g.out, "Output directory (file for query)");
  app.add_option("--state", g.state, "Registry state directory")->capture_default_str();
  app.fallthrough();

  std::string key_path, label, real_id, name, file, locator;
  auto* keygen = app.add_subcommand("keygen", "Write a new key file");
  keygen->add_option("file", key_path)->required();
  keygen->add_option("--label", label, "Derive the key from a label instead of randomness");

  auto* reg = app.add_subcommand("register", "Register a name prefix");
  reg->add_option("prefix", name)->required();
  reg->add_option("--key", key_path)->required();
  reg->add_option("--real-id", real_id, "Real-world identity bound to the prefix");

  auto* pub = app.add_subcommand("publish", "Publish a file under a registered prefix");
  pub->add_option("name", name)->required();
  pub->add_option("file", file)->required()->check(CLI::ExistingFile);
  pub->add_option("--key", key_path)->required();
  pub->add_option("--locator", locator, "Locator to record (default: the origin server)");

  auto* query = app.add_subcommand("query", "Resolve, fetch and verify a published name");
  query->add_option("name", name)->required();

  bool dump_index = false;
  auto* dump = app.add_subcommand("chain-dump", "Print committed blocks");
  dump->add_flag("--index", dump_index, "Print the derived index instead");

  std::vector<std::string> selections;
  std::uint64_t size = 0;
  auto* scen = app.add_subcommand("scenario", "Run scenario kinds or flow ids concurrently");
  scen->add_option("selection", selections, "IP-CCN-IP, IP-CCN, CCN-IP, CCN-IP-CCN, CCN-CCN or flow ids")->required();
  scen->add_option("--size", size, "Override every resource size in bytes");

  std::vector<std::size_t> sizes{100000, 1000000};
  auto* bench = app.add_subcommand("bench-fib", "Time bulk FIB insertion");
  bench->add_option("sizes", sizes)->capture_default_str();

  std::uint64_t samples = 100000;
  bool exact = false, hierarchical = false;
  double quorum = 0.5;
  auto* capcmd = app.add_subcommand("cap", "Partition tolerance analysis");
  capcmd->add_option("topology", file, "Topology file (or --config)");
  capcmd->add_option("--samples", samples)->capture_default_str();
  capcmd->add_option("--quorum", quorum, "Participant fraction to exceed")->capture_default_str();
  capcmd->add_flag("--exact", exact, "Also enumerate every failure state");
  capcmd->add_flag("--hierarchical", hierarchical, "Compose per-level estimates and cross-check");

  std::string replay_dir;
  auto* rep = app.add_subcommand("replay", "Re-run a recorded output directory and compare");
  rep->add_option("dir", replay_dir)->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*keygen) {
      Digest seed;
      if (!label.empty()) {
        seed = sha256("key:" + label);
      } else {
        std::random_device rd;
        for (auto& b : seed.bytes) b = static_cast<std::uint8_t>(rd());
      }
      KeyFile k = KeyFile::from_seed(seed);
      k.save(key_path);
      std::cout << json{{"public_key", to_hex(k.key.public_key)}, {"publisher", to_hex(publisher_id(k.key.public_key).value)}}.dump()
                << '\n';
    } else if (*reg) {
      Registry r(g.state, RegistryOptions{g.seed});
      const Registration& x = r.register_prefix(parse_name(name), KeyFile::load(key_path).key, as_bytes(real_id));
      std::cout << json{{"prefix", name}, {"owner", to_hex(x.owner.value)}, {"height", x.height}}.dump() << '\n';
    } else if (*pub) {
      Registry r(g.state, RegistryOptions{g.seed});
      std::string content = read_file(file);
      std::optional<Identifier> loc;
      if (!locator.empty()) loc = parse_name(locator);
      ResourceRecord rec = r.publish(parse_name(name), as_bytes(content), KeyFile::load(key_path).key, loc);
      json j = record_json(rec);
      j["height"] = r.chain().height();
      std::cout << j.dump() << '\n';
    } else if (*query) {
      Registry r(g.state, RegistryOptions{g.seed});
      QueryResult q = r.query(parse_name(name));
      json j = record_json(q.record);
      j["bytes"] = q.content.size();
      j["fetch_ticks"] = q.fetch_ticks;
      j["verified"] = true;
      if (!g.out.empty()) {
        write_file(g.out, std::string(q.content.begin(), q.content.end()));
        j["written"] = g.out;
      }
      std::cout << j.dump() << '\n';
    } else if (*dump) {
      Registry r(g.state, RegistryOptions{g.seed});
      std::cout << (dump_index ? r.index().dump() : r.chain().dump());
    } else if (*scen) {
      if (g.config.empty()) fail(ErrorCode::ConfigError, "scenario needs --config");
      json m = {{"command", "scenario"}, {"seed", g.seed}, {"flows", selections}};
      if (size) m["size"] = size;
      run_and_record(m, g, g.config);
    } else if (*bench) {
      run_and_record({{"command", "bench-fib"}, {"seed", g.seed}, {"sizes", sizes}}, g, "");
    } else if (*capcmd) {
      std::string topo = file.empty() ? g.config : file;
      if (topo.empty()) fail(ErrorCode::ConfigError, "cap needs a topology file");
      json m = {{"command", "cap"},      {"seed", g.seed},   {"samples", samples},
                {"quorum", quorum},      {"exact", exact},   {"hierarchical", hierarchical}};
      run_and_record(m, g, topo);
    } else if (*rep) {
      return replay(replay_dir);
    }
  } catch (const Error& e) {
    std::cerr << json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
    return 3;
  }
  return 0;
}
