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

#include "minet/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "minet/error.hpp"

namespace minet {

std::string_view to_string(NodeType t) noexcept {
  switch (t) {
    case NodeType::Router: return "router";
    case NodeType::Gateway: return "gateway";
    case NodeType::Producer: return "producer";
    case NodeType::Consumer: return "consumer";
    case NodeType::IpHost: return "ip-host";
    case NodeType::IpRouter: return "ip-router";
  }
  return "?";
}

std::string_view to_string(ScenarioKind k) noexcept {
  switch (k) {
    case ScenarioKind::IpCcnIp: return "IP-CCN-IP";
    case ScenarioKind::IpCcn: return "IP-CCN";
    case ScenarioKind::CcnIp: return "CCN-IP";
    case ScenarioKind::CcnIpCcn: return "CCN-IP-CCN";
    case ScenarioKind::CcnCcn: return "CCN-CCN";
  }
  return "?";
}

ScenarioKind parse_scenario_kind(std::string_view text) {
  for (auto k : {ScenarioKind::IpCcnIp, ScenarioKind::IpCcn, ScenarioKind::CcnIp, ScenarioKind::CcnIpCcn,
                 ScenarioKind::CcnCcn}) {
    if (to_string(k) == text) return k;
  }
  fail(ErrorCode::InvalidArgument, "unknown scenario kind: " + std::string(text));
}

int expected_translations(ScenarioKind k) noexcept {
  switch (k) {
    case ScenarioKind::IpCcnIp: return 2;
    case ScenarioKind::IpCcn: return 1;
    case ScenarioKind::CcnIp: return 1;
    case ScenarioKind::CcnIpCcn: return 2;
    case ScenarioKind::CcnCcn: return 0;
  }
  return 0;
}

namespace {

bool ccn_capable(NodeType t) {
  return t == NodeType::Router || t == NodeType::Gateway || t == NodeType::Producer || t == NodeType::Consumer;
}
bool ip_capable(NodeType t) { return t == NodeType::Gateway || t == NodeType::IpHost || t == NodeType::IpRouter; }
bool forwards_ccn(NodeType t) { return t == NodeType::Router || t == NodeType::Gateway; }

[[noreturn]] void config_error(int line, const std::string& msg) {
  fail(ErrorCode::ConfigError, "line " + std::to_string(line) + ": " + msg);
}

struct Record {
  int line = 0;
  std::vector<std::string> args;
  std::map<std::string, std::string> attrs;

  const std::string& arg(std::size_t i, std::string_view what) const {
    if (i >= args.size()) config_error(line, "missing " + std::string(what));
    return args[i];
  }
  std::optional<std::string> attr(const std::string& key) const {
    auto it = attrs.find(key);
    if (it == attrs.end()) return std::nullopt;
    return it->second;
  }
  const std::string& need(const std::string& key) const {
    auto it = attrs.find(key);
    if (it == attrs.end()) config_error(line, "missing attribute " + key);
    return it->second;
  }
  void only(std::initializer_list<std::string_view> keys) const {
    for (const auto& [k, _] : attrs) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) config_error(line, "unknown attribute " + k);
    }
  }
};

bool is_attr_key(std::string_view key) {
  return !key.empty() && std::all_of(key.begin(), key.end(), [](char c) { return (c >= 'a' && c <= 'z') || c == '_'; });
}

Identifier id_at(const Record& r, const std::string& text) {
  try {
    return parse_identifier(text);
  } catch (const Error& e) {
    config_error(r.line, e.what());
  }
}

template <typename T>
T number_at(const Record& r, const std::string& key, const std::string& text) {
  T v{};
  if constexpr (std::is_floating_point_v<T>) {
    std::istringstream in(text);
    in >> v;
    if (!in || !in.eof()) config_error(r.line, "bad number for " + key + ": " + text);
  } else {
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size()) config_error(r.line, "bad number for " + key + ": " + text);
  }
  return v;
}

NodeType node_type_at(const Record& r, const std::string& text) {
  for (auto t : {NodeType::Router, NodeType::Gateway, NodeType::Producer, NodeType::Consumer, NodeType::IpHost,
                 NodeType::IpRouter}) {
    if (to_string(t) == text) return t;
  }
  config_error(r.line, "unknown node type " + text);
}

}  // namespace

const NodeSpec* NetworkConfig::find_node(std::string_view name) const {
  for (const auto& n : nodes) {
    if (n.name == name) return &n;
  }
  return nullptr;
}

const NodeSpec& NetworkConfig::node(std::string_view name) const {
  if (const auto* n = find_node(name)) return *n;
  fail(ErrorCode::NotFound, "unknown node " + std::string(name));
}

const ResourceSpec& NetworkConfig::resource(std::string_view id) const {
  for (const auto& r : resources) {
    if (r.id == id) return r;
  }
  fail(ErrorCode::NotFound, "unknown resource " + std::string(id));
}

const FlowSpec& NetworkConfig::flow(std::string_view id) const {
  for (const auto& f : flows) {
    if (f.id == id) return f;
  }
  fail(ErrorCode::NotFound, "unknown flow " + std::string(id));
}

std::size_t NetworkConfig::site_count() const {
  std::set<std::string> sites;
  for (const auto& n : nodes) {
    if (!n.site.empty()) sites.insert(n.site);
  }
  return sites.size();
}

int NetworkConfig::domain_levels() const {
  std::map<Identifier, int> depth;
  int best = 0;
  for (const auto& d : domains) {
    int v = d.parent ? depth.at(*d.parent) + 1 : 1;
    depth[d.path] = v;
    best = std::max(best, v);
  }
  return best;
}

NetworkConfig parse_network_config(std::istream& in) {
  NetworkConfig cfg;
  std::string section;
  std::string raw;
  int line = 0;
  std::set<std::string> flow_ids, resource_ids;
  std::map<std::string, int> link_count;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream ls(raw);
    Record r;
    r.line = line;
    std::string tok;
    while (ls >> tok) {
      if (tok[0] == '#') break;
      auto eq = tok.find('=');
      if (eq != std::string::npos && is_attr_key(std::string_view(tok).substr(0, eq))) {
        if (!r.attrs.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second) {
          config_error(line, "duplicate attribute " + tok.substr(0, eq));
        }
      } else {
        r.args.push_back(tok);
      }
    }
    if (r.args.empty() && r.attrs.empty()) continue;
    if (r.args.size() == 1 && r.attrs.empty() && r.args[0].front() == '[' && r.args[0].back() == ']') {
      section = r.args[0].substr(1, r.args[0].size() - 2);
      static const std::set<std::string> kSections = {"nodes", "links", "domains", "gateways",
                                                      "routes", "dns", "workloads"};
      if (!kSections.count(section)) config_error(line, "unknown section [" + section + "]");
      continue;
    }
    if (section.empty()) config_error(line, "record outside of a section");

    if (section == "nodes") {
      r.only({"ip", "site", "authority"});
      NodeSpec n;
      n.line = line;
      n.name = r.arg(0, "node name");
      n.type = node_type_at(r, r.arg(1, "node type"));
      if (r.args.size() > 2) config_error(line, "unexpected token " + r.args[2]);
      if (cfg.find_node(n.name)) config_error(line, "duplicate node " + n.name);
      n.site = r.attr("site").value_or("");
      n.authority = r.attr("authority").value_or("");
      if (auto ip = r.attr("ip")) {
        if (!ip_capable(n.type)) config_error(line, std::string(to_string(n.type)) + " nodes have no ip address");
        Identifier a = id_at(r, "ip:" + *ip);
        if (a.prefix_length() != a.address_bits()) config_error(line, "node address must be a host address");
        n.ip = a;
      } else if (ip_capable(n.type)) {
        config_error(line, "missing attribute ip");
      }
      cfg.nodes.push_back(std::move(n));
    } else if (section == "links") {
      r.only({"kind", "capacity", "latency", "loss", "jitter"});
      LinkSpec l;
      l.line = line;
      l.a = r.arg(0, "link endpoint");
      l.b = r.arg(1, "link endpoint");
      const NodeSpec* a = cfg.find_node(l.a);
      const NodeSpec* b = cfg.find_node(l.b);
      if (!a) config_error(line, "unknown node " + l.a);
      if (!b) config_error(line, "unknown node " + l.b);
      if (l.a == l.b) config_error(line, "self link on " + l.a);
      std::string kind = r.attr("kind").value_or("ccn");
      if (kind == "ccn") {
        l.kind = FaceKind::LinkLayer;
        if (!ccn_capable(a->type) || !ccn_capable(b->type)) config_error(line, "ccn link needs ccn-capable endpoints");
      } else if (kind == "ip") {
        l.kind = FaceKind::IpNative;
        if (!ip_capable(a->type) || !ip_capable(b->type)) config_error(line, "ip link needs ip-capable endpoints");
      } else {
        config_error(line, "link kind must be ccn or ip");
      }
      if (auto v = r.attr("capacity")) l.params.capacity = number_at<std::uint64_t>(r, "capacity", *v);
      if (auto v = r.attr("latency")) l.params.latency = number_at<Tick>(r, "latency", *v);
      if (auto v = r.attr("loss")) l.params.loss = number_at<double>(r, "loss", *v);
      if (auto v = r.attr("jitter")) l.params.jitter = number_at<Tick>(r, "jitter", *v);
      if (l.params.capacity == 0) config_error(line, "capacity must be positive");
      if (l.params.loss < 0 || l.params.loss > 1) config_error(line, "loss must be in [0,1]");
      if (l.kind == FaceKind::LinkLayer) {
        link_count[l.a]++;
        link_count[l.b]++;
      }
      cfg.links.push_back(std::move(l));
    } else if (section == "domains") {
      r.only({"parent"});
      DomainSpec d;
      d.line = line;
      d.path = id_at(r, r.arg(0, "domain path"));
      d.node = r.arg(1, "domain node");
      const NodeSpec* n = cfg.find_node(d.node);
      if (!n) config_error(line, "unknown node " + d.node);
      if (!forwards_ccn(n->type)) config_error(line, "domain authority must be a router or gateway");
      if (d.path.kind() != IdKind::Content) config_error(line, "domain path must be a content name");
      if (auto p = r.attr("parent")) {
        d.parent = id_at(r, *p);
        bool known = std::any_of(cfg.domains.begin(), cfg.domains.end(),
                                 [&](const DomainSpec& x) { return x.path == *d.parent; });
        if (!known) config_error(line, "unknown parent domain " + *p);
      }
      for (const auto& x : cfg.domains) {
        if (x.node == d.node) config_error(line, d.node + " already owns a domain");
        if (x.path == d.path) config_error(line, "duplicate domain " + d.path.to_string());
      }
      cfg.domains.push_back(std::move(d));
    } else if (section == "gateways") {
      r.only({});
      const std::string& gw = r.arg(0, "gateway");
      const NodeSpec* n = cfg.find_node(gw);
      if (!n) config_error(line, "unknown node " + gw);
      if (n->type != NodeType::Gateway) config_error(line, gw + " is not a gateway");
      const std::string& verb = r.arg(1, "gateway directive");
      if (verb == "translate") {
        TranslateSpec t{gw, id_at(r, r.arg(2, "source prefix")), id_at(r, r.arg(3, "target")), line};
        bool ip_to_ccn = t.from.kind() == IdKind::Ip && t.to.kind() == IdKind::Content;
        bool ccn_to_ip = t.from.kind() == IdKind::Content && t.to.kind() == IdKind::Ip;
        if (!ip_to_ccn && !ccn_to_ip) config_error(line, "translate maps ip prefixes to content names or back");
        cfg.translations.push_back(std::move(t));
      } else if (verb == "tunnel") {
        TunnelSpec t{gw, r.arg(2, "tunnel peer"), line};
        const NodeSpec* p = cfg.find_node(t.b);
        if (!p || p->type != NodeType::Gateway) config_error(line, "tunnel peer must be a gateway");
        if (t.a == t.b) config_error(line, "tunnel to self");
        cfg.tunnels.push_back(std::move(t));
      } else {
        config_error(line, "unknown gateway directive " + verb);
      }
    } else if (section == "routes") {
      r.only({});
      RouteSpec rt{r.arg(0, "node"), id_at(r, r.arg(1, "prefix")), r.arg(2, "next hop"), line};
      if (!cfg.find_node(rt.node)) config_error(line, "unknown node " + rt.node);
      if (!cfg.find_node(rt.via)) config_error(line, "unknown node " + rt.via);
      cfg.routes.push_back(std::move(rt));
    } else if (section == "dns") {
      r.only({});
      Identifier name = id_at(r, r.arg(0, "domain name"));
      if (name.kind() != IdKind::LegacyDomain) config_error(line, "dns entries need dns: names");
      cfg.dns[name] = id_at(r, r.arg(1, "answer"));
    } else if (section == "workloads") {
      const std::string& what = r.arg(0, "workload type");
      if (what == "resource") {
        r.only({"name", "size", "host", "locator", "publish"});
        ResourceSpec res;
        res.line = line;
        res.id = r.arg(1, "resource id");
        if (!resource_ids.insert(res.id).second) config_error(line, "duplicate resource " + res.id);
        res.name = id_at(r, r.need("name"));
        if (res.name.kind() != IdKind::Content) config_error(line, "resource names must be content names");
        res.size = number_at<std::uint64_t>(r, "size", r.need("size"));
        res.host = r.need("host");
        const NodeSpec* h = cfg.find_node(res.host);
        if (!h) config_error(line, "unknown node " + res.host);
        if (h->type != NodeType::Producer && h->type != NodeType::IpHost) {
          config_error(line, "resources live on producers or ip hosts");
        }
        if (auto loc = r.attr("locator")) res.locator = id_at(r, *loc);
        if (auto p = r.attr("publish")) {
          if (*p != "yes" && *p != "no") config_error(line, "publish must be yes or no");
          res.publish = *p == "yes";
        }
        if (res.publish && !res.locator && h->type != NodeType::Producer) {
          config_error(line, "resources on ip hosts need a locator to be published");
        }
        cfg.resources.push_back(std::move(res));
      } else if (what == "flow") {
        r.only({"consumer", "resource", "target", "start", "window"});
        FlowSpec f;
        f.line = line;
        f.id = r.arg(1, "flow id");
        if (!flow_ids.insert(f.id).second) config_error(line, "duplicate flow " + f.id);
        try {
          f.kind = parse_scenario_kind(r.arg(2, "scenario kind"));
        } catch (const Error& e) {
          config_error(line, e.what());
        }
        f.consumer = r.need("consumer");
        const NodeSpec* c = cfg.find_node(f.consumer);
        if (!c) config_error(line, "unknown node " + f.consumer);
        if (c->type != NodeType::Consumer && c->type != NodeType::IpHost) {
          config_error(line, "flows start at consumers or ip hosts");
        }
        f.resource = r.need("resource");
        if (!resource_ids.count(f.resource)) config_error(line, "unknown resource " + f.resource);
        if (auto t = r.attr("target")) {
          f.target = id_at(r, "ip:" + *t);
        }
        if (auto s = r.attr("start")) f.start = std::max<Tick>(1, number_at<Tick>(r, "start", *s));
        if (auto w = r.attr("window")) f.window = number_at<std::size_t>(r, "window", *w);
        if (f.window == 0) config_error(line, "window must be positive");
        cfg.flows.push_back(std::move(f));
      } else {
        config_error(line, "unknown workload " + what);
      }
    }
  }
  for (const auto& n : cfg.nodes) {
    if ((n.type == NodeType::Consumer || n.type == NodeType::Producer) && link_count[n.name] != 1) {
      config_error(n.line, n.name + " needs exactly one ccn link");
    }
    if (!n.authority.empty()) {
      bool known = std::any_of(cfg.domains.begin(), cfg.domains.end(),
                               [&](const DomainSpec& d) { return d.node == n.authority; });
      if (!known) config_error(n.line, "authority " + n.authority + " owns no domain");
    }
  }
  return cfg;
}

NetworkConfig load_network_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  return parse_network_config(in);
}

Bytes resource_content(const ResourceSpec& r, std::uint64_t seed) {
  Digest d = sha256(r.id);
  std::uint64_t s = 0;
  for (int i = 0; i < 8; ++i) s = (s << 8) | d.bytes[i];
  Rng rng(s ^ splitmix64(seed));
  Bytes out(r.size);
  std::size_t i = 0;
  for (; i + 8 <= out.size(); i += 8) {
    std::uint64_t v = rng.next();
    for (int k = 0; k < 8; ++k) out[i + k] = static_cast<std::uint8_t>(v >> (8 * k));
  }
  if (i < out.size()) {
    std::uint64_t v = rng.next();
    for (int k = 0; i < out.size(); ++i, ++k) out[i] = static_cast<std::uint8_t>(v >> (8 * k));
  }
  return out;
}

NodeId Network::id(std::string_view name) const {
  auto it = ids.find(std::string(name));
  if (it == ids.end()) fail(ErrorCode::NotFound, "unknown node " + std::string(name));
  return it->second;
}

MirRouter* Network::router(std::string_view name) { return dynamic_cast<MirRouter*>(&world->node(id(name))); }

namespace {

struct Adjacency {
  // node -> (neighbour, local face), in face order
  std::map<std::string, std::vector<std::pair<std::string, FaceId>>> out;
};

/// BFS from `dest`; returns for every reached node the face leading towards
/// `dest`. Only nodes accepted by `transit` relay the search further.
template <typename Transit>
std::map<std::string, FaceId> next_hops(const Adjacency& adj, const std::string& dest, Transit transit) {
  std::map<std::string, FaceId> hop;
  std::set<std::string> seen{dest};
  std::deque<std::string> queue{dest};
  while (!queue.empty()) {
    std::string u = queue.front();
    queue.pop_front();
    if (u != dest && !transit(u)) continue;
    auto it = adj.out.find(u);
    if (it == adj.out.end()) continue;
    for (const auto& [v, _] : it->second) {
      if (seen.count(v)) continue;
      seen.insert(v);
      // v reaches dest through u: pick v's first face towards u.
      for (const auto& [w, face] : adj.out.at(v)) {
        if (w == u) {
          hop[v] = face;
          break;
        }
      }
      queue.push_back(v);
    }
  }
  return hop;
}

Identifier default_route(const Identifier& addr) {
  std::array<std::uint8_t, 16> zero{};
  return Identifier::ip(std::span<const std::uint8_t>(zero.data(), addr.is_v6() ? 16 : 4), 0);
}

}  // namespace

Network build_topology(const NetworkConfig& config, std::uint64_t seed, const std::vector<std::string>& flows) {
  Network net;
  net.config = config;
  net.world = std::make_unique<World>(seed);
  net.domains = std::make_shared<DomainHierarchy>();

  std::map<Identifier, std::string> domain_owner;
  for (const auto& d : config.domains) {
    std::optional<std::string> parent;
    if (d.parent) parent = domain_owner.at(*d.parent);
    try {
      net.domains->add(d.node, d.path, parent);
    } catch (const Error& e) {
      config_error(d.line, e.what());
    }
    domain_owner[d.path] = d.node;
  }
  std::set<std::string> authorities;
  for (const auto& d : config.domains) authorities.insert(d.node);

  // CCN adjacency by name (faces assigned in link order; virtual faces after).
  Adjacency ccn_names;
  for (const auto& l : config.links) {
    if (l.kind != FaceKind::LinkLayer) continue;
    ccn_names.out[l.a].push_back({l.b, 0});
    ccn_names.out[l.b].push_back({l.a, 0});
  }
  for (const auto& t : config.tunnels) {
    ccn_names.out[t.a].push_back({t.b, 0});
    ccn_names.out[t.b].push_back({t.a, 0});
  }
  auto node_type = [&](const std::string& n) { return config.node(n).type; };

  // Nearest authority for routers that do not name one.
  std::map<std::string, std::string> authority_of;
  if (!authorities.empty()) {
    for (const auto& n : config.nodes) {
      if (!forwards_ccn(n.type) || authorities.count(n.name)) continue;
      if (!n.authority.empty()) {
        authority_of[n.name] = n.authority;
        continue;
      }
      std::set<std::string> seen{n.name};
      std::deque<std::string> queue{n.name};
      std::string found;
      while (!queue.empty() && found.empty()) {
        std::vector<std::string> level(queue.begin(), queue.end());
        queue.clear();
        std::sort(level.begin(), level.end());
        for (const auto& u : level) {
          if (u != n.name && authorities.count(u)) {
            found = u;
            break;
          }
          if (u != n.name && !forwards_ccn(node_type(u))) continue;
          for (const auto& [v, _] : ccn_names.out[u]) {
            if (seen.insert(v).second) queue.push_back(v);
          }
        }
      }
      authority_of[n.name] = found.empty() ? net.domains->top_level() : found;
    }
  }

  for (const auto& n : config.nodes) {
    std::unique_ptr<SimNode> node;
    MirConfig mc;
    mc.name = n.name;
    mc.domains = config.domains.empty() ? nullptr : net.domains;
    mc.dns = config.dns;
    if (auto it = authority_of.find(n.name); it != authority_of.end()) mc.authority = it->second;
    switch (n.type) {
      case NodeType::Router: node = std::make_unique<MirRouter>(std::move(mc)); break;
      case NodeType::Gateway: node = std::make_unique<Gateway>(std::move(mc), *n.ip); break;
      case NodeType::Producer: node = std::make_unique<CcnProducer>(n.name); break;
      case NodeType::Consumer: node = std::make_unique<CcnConsumer>(n.name); break;
      case NodeType::IpHost:
      case NodeType::IpRouter: node = std::make_unique<IpNode>(n.name, *n.ip); break;
    }
    net.ids[n.name] = net.world->add_node(n.name, std::move(node));
  }

  Adjacency ccn, ip;
  for (const auto& l : config.links) {
    NodeId a = net.id(l.a), b = net.id(l.b);
    LinkId id = net.world->connect(a, b, l.params, l.kind);
    FaceId fa = 0, fb = 0;
    for (const auto& f : net.world->faces(a)) {
      if (f.link == id) fa = f.id;
    }
    for (const auto& f : net.world->faces(b)) {
      if (f.link == id) fb = f.id;
    }
    Adjacency& adj = l.kind == FaceKind::LinkLayer ? ccn : ip;
    adj.out[l.a].push_back({l.b, fa});
    adj.out[l.b].push_back({l.a, fb});
  }
  for (const auto& t : config.tunnels) {
    NodeId a = net.id(t.a), b = net.id(t.b);
    FaceId fa = net.world->add_virtual_face(a, FaceKind::IpUdp, b);
    FaceId fb = net.world->add_virtual_face(b, FaceKind::IpUdp, a);
    net.as<Gateway>(t.a).add_tunnel(fa, *config.node(t.b).ip);
    net.as<Gateway>(t.b).add_tunnel(fb, *config.node(t.a).ip);
    ccn.out[t.a].push_back({t.b, fa});
    ccn.out[t.b].push_back({t.a, fb});
  }

  // Shortest-path CCN routes to every node locator (and gateway tunnel prefix).
  for (const auto& d : config.nodes) {
    if (!ccn_capable(d.type)) continue;
    auto hops = next_hops(ccn, d.name, [&](const std::string& u) { return forwards_ccn(node_type(u)); });
    for (const auto& [v, face] : hops) {
      if (!forwards_ccn(node_type(v))) continue;
      MirRouter* r = net.router(v);
      r->fib().insert(HptFibEntry{node_locator(d.name), Forward{face}, Origin::Static});
      if (d.type == NodeType::Gateway) {
        r->fib().insert(HptFibEntry{tunnel_prefix(d.name), Forward{face}, Origin::Static});
      }
    }
  }
  // Shortest-path IP host routes, plus a default route on single-homed nodes.
  auto ip_fib = [&](const std::string& name) -> HptFib& {
    if (node_type(name) == NodeType::Gateway) return net.router(name)->fib();
    return net.as<IpNode>(name).routes();
  };
  for (const auto& d : config.nodes) {
    if (!ip_capable(d.type)) continue;
    auto hops = next_hops(ip, d.name, [](const std::string&) { return true; });
    for (const auto& [v, face] : hops) ip_fib(v).insert(HptFibEntry{*d.ip, Forward{face}, Origin::Static});
    auto it = ip.out.find(d.name);
    if (it != ip.out.end() && it->second.size() == 1) {
      ip_fib(d.name).insert(HptFibEntry{default_route(*d.ip), Forward{it->second.front().second}, Origin::Static});
    }
  }
  for (const auto& rt : config.routes) {
    const auto& type = node_type(rt.node);
    std::optional<FaceId> face;
    const Adjacency& adj = rt.prefix.kind() == IdKind::Ip ? ip : ccn;
    if (auto it = adj.out.find(rt.node); it != adj.out.end()) {
      for (const auto& [v, f] : it->second) {
        if (v == rt.via) {
          face = f;
          break;
        }
      }
    }
    if (!face) config_error(rt.line, rt.via + " is not adjacent to " + rt.node);
    if (rt.prefix.kind() == IdKind::Ip) {
      if (!ip_capable(type)) config_error(rt.line, rt.node + " has no ip side");
      ip_fib(rt.node).insert(HptFibEntry{rt.prefix, Forward{*face}, Origin::Static});
    } else {
      if (!forwards_ccn(type)) config_error(rt.line, rt.node + " does not forward ccn");
      net.router(rt.node)->fib().insert(HptFibEntry{rt.prefix, Forward{*face}, Origin::Static});
    }
  }
  for (const auto& t : config.translations) {
    net.router(t.gateway)->fib().insert(HptFibEntry{t.from, Translate{t.to}, Origin::Static});
  }

  for (const auto& r : config.resources) {
    Bytes content = resource_content(r, seed);
    net.published_hashes[r.id] = sha256(content);
    const NodeSpec& host = config.node(r.host);
    if (host.type == NodeType::Producer) {
      net.as<CcnProducer>(r.host).add_resource(r.name, std::move(content));
    } else {
      net.as<IpNode>(r.host).add_resource(r.name.to_string(), std::move(content));
    }
    if (r.publish && !config.domains.empty()) {
      net.domains->publish(r.name, r.locator ? *r.locator : node_locator(r.host));
    }
  }

  for (const auto& fid : flows) {
    const FlowSpec& f = config.flow(fid);
    const ResourceSpec& res = config.resource(f.resource);
    PullFlow::Options opt;
    opt.window = f.window;
    opt.start = f.start;
    const NodeSpec& c = config.node(f.consumer);
    if (c.type == NodeType::Consumer) {
      net.as<CcnConsumer>(f.consumer).add_flow(res.name, opt);
    } else {
      Identifier target;
      if (f.target) {
        target = *f.target;
      } else if (const auto& host = config.node(res.host); host.ip) {
        target = *host.ip;
      } else {
        config_error(f.line, "flow " + f.id + " needs a target address");
      }
      net.as<IpNode>(f.consumer).add_flow(res.name.to_string(), target, opt);
    }
  }
  return net;
}

std::string transfer_csv_header() { return "scenario,bytes,seconds,mean_rate,translations,retransmissions"; }

std::string to_csv_row(const TransferReport& r) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(3);
  out << r.scenario << ',' << r.bytes << ',' << r.seconds << ',';
  out.precision(1);
  out << r.mean_rate << ',' << r.translations << ',' << r.retransmissions;
  return out.str();
}

namespace {

void check_satisfiable(const NetworkConfig& cfg, const FlowSpec& f) {
  const NodeSpec& consumer = cfg.node(f.consumer);
  const NodeSpec& host = cfg.node(cfg.resource(f.resource).host);
  auto unsat = [&](const std::string& why) {
    fail(ErrorCode::ScenarioUnsatisfiable, std::string(to_string(f.kind)) + " flow " + f.id + ": " + why);
  };
  bool ip_start = f.kind == ScenarioKind::IpCcnIp || f.kind == ScenarioKind::IpCcn;
  bool ip_end = f.kind == ScenarioKind::IpCcnIp || f.kind == ScenarioKind::CcnIp;
  if (ip_start != (consumer.type == NodeType::IpHost)) unsat("consumer " + consumer.name + " is in the wrong regime");
  if (ip_end != (host.type == NodeType::IpHost)) unsat("resource host " + host.name + " is in the wrong regime");
  auto has_translate = [&](auto pred) {
    return std::any_of(cfg.translations.begin(), cfg.translations.end(), pred);
  };
  auto is_tunnel = [](const Identifier& t) { return t.size() >= 2 && t.components()[0] == "tunnel"; };
  switch (f.kind) {
    case ScenarioKind::IpCcnIp:
      if (!has_translate([&](const TranslateSpec& t) { return t.from.kind() == IdKind::Ip && is_tunnel(t.to); })) {
        unsat("no gateway tunnels ip over ccn");
      }
      break;
    case ScenarioKind::IpCcn:
      if (!has_translate([&](const TranslateSpec& t) { return t.from.kind() == IdKind::Ip && !is_tunnel(t.to); })) {
        unsat("no gateway maps ip addresses to content");
      }
      break;
    case ScenarioKind::CcnIp:
      if (!has_translate([](const TranslateSpec& t) { return t.to.kind() == IdKind::Ip; })) {
        unsat("no gateway maps content to ip servers");
      }
      break;
    case ScenarioKind::CcnIpCcn:
      if (cfg.tunnels.empty()) unsat("no ccn-over-ip tunnel");
      break;
    case ScenarioKind::CcnCcn:
      break;
  }
}

const PullFlow& flow_state(Network& net, const FlowSpec& f, std::size_t index_on_node) {
  if (net.config.node(f.consumer).type == NodeType::Consumer) {
    return net.as<CcnConsumer>(f.consumer).flows().at(index_on_node).second;
  }
  return std::get<2>(net.as<IpNode>(f.consumer).flows().at(index_on_node));
}

}  // namespace

RunResult run_flows(const NetworkConfig& config, const std::vector<std::string>& flows, std::uint64_t seed,
                    Tick max_ticks) {
  if (flows.empty()) fail(ErrorCode::InvalidArgument, "no flows to run");
  for (const auto& id : flows) check_satisfiable(config, config.flow(id));
  Network net = build_topology(config, seed, flows);

  // Position of every flow within its consumer's flow list.
  std::vector<std::size_t> slot;
  std::map<std::string, std::size_t> per_node;
  for (const auto& id : flows) slot.push_back(per_node[config.flow(id).consumer]++);

  auto all_done = [&] {
    for (std::size_t i = 0; i < flows.size(); ++i) {
      if (!flow_state(net, config.flow(flows[i]), slot[i]).done()) return false;
    }
    return true;
  };
  net.world->run_until(all_done, max_ticks);

  RunResult result;
  result.ticks = net.world->now();
  result.metrics_csv = net.world->metrics_csv();

  std::uint64_t translating = 0;
  for (const auto& n : config.nodes) {
    if (n.type == NodeType::Gateway && net.as<Gateway>(n.name).translations() > 0) translating++;
  }
  std::uint64_t violations = 0;
  std::vector<LinkUtilization> links;
  for (LinkId l = 0; l < net.world->link_count(); ++l) {
    auto [a, b] = net.world->link_ends(l);
    for (bool fwd : {true, false}) {
      const auto& s = net.world->link_stats(l, fwd);
      violations += s.regime_violations;
      LinkUtilization u;
      u.link = net.world->node_name(fwd ? a : b) + ">" + net.world->node_name(fwd ? b : a);
      u.bytes = s.bytes_transmitted;
      double cap = static_cast<double>(net.world->link_params(l).capacity) * static_cast<double>(result.ticks);
      u.utilization = cap > 0 ? static_cast<double>(s.bytes_transmitted) / cap : 0;
      links.push_back(std::move(u));
    }
  }

  std::string incomplete;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const FlowSpec& f = config.flow(flows[i]);
    const PullFlow& st = flow_state(net, f, slot[i]);
    TransferReport r;
    r.scenario = std::string(to_string(f.kind));
    r.flow = f.id;
    r.bytes = st.bytes();
    r.complete = st.complete();
    r.start_tick = st.started();
    r.end_tick = st.done() ? st.finished() : result.ticks;
    r.seconds = static_cast<double>(r.end_tick - r.start_tick) / 1000.0;
    r.mean_rate = r.seconds > 0 ? static_cast<double>(r.bytes) / r.seconds : 0;
    r.translations = translating;
    r.retransmissions = st.retransmissions();
    r.published_hash = net.published_hashes.at(f.resource);
    r.delivered_hash = sha256(st.assembled());
    r.regime_violations = violations;
    r.arrivals = st.arrivals();
    r.links = links;
    if (!st.complete()) {
      incomplete += (incomplete.empty() ? "" : "; ") + f.id + (st.failed() ? " failed: " + st.error() : " timed out");
    }
    result.reports.push_back(std::move(r));
  }
  if (!incomplete.empty()) fail(ErrorCode::TransferIncomplete, incomplete);

  ScenarioKind kind = config.flow(flows.front()).kind;
  bool same_kind = std::all_of(flows.begin(), flows.end(), [&](const auto& id) { return config.flow(id).kind == kind; });
  if (same_kind && translating != static_cast<std::uint64_t>(expected_translations(kind))) {
    fail(ErrorCode::ScenarioUnsatisfiable, std::string(to_string(kind)) + " crossed " + std::to_string(translating) +
                                               " translating gateways, expected " +
                                               std::to_string(expected_translations(kind)));
  }
  return result;
}

TransferReport run_scenario(ScenarioKind kind, const NetworkConfig& config, std::uint64_t seed,
                            std::string* metrics_csv) {
  for (const auto& f : config.flows) {
    if (f.kind != kind) continue;
    RunResult r = run_flows(config, {f.id}, seed);
    if (metrics_csv) *metrics_csv = std::move(r.metrics_csv);
    return std::move(r.reports.front());
  }
  fail(ErrorCode::ScenarioUnsatisfiable, "no " + std::string(to_string(kind)) + " flow in configuration");
}

OverlapRates overlap_rates(const std::vector<TransferReport>& reports) {
  OverlapRates out;
  if (reports.empty()) return out;
  out.from = 0;
  out.to = ~Tick{0};
  for (const auto& r : reports) {
    out.from = std::max(out.from, r.start_tick);
    out.to = std::min(out.to, r.end_tick);
  }
  if (out.to <= out.from) {
    out.per_flow.assign(reports.size(), 0.0);
    return out;
  }
  double span = static_cast<double>(out.to - out.from);
  for (const auto& r : reports) {
    std::uint64_t bytes = 0;
    for (const auto& [t, b] : r.arrivals) {
      if (t > out.from && t <= out.to) bytes += b;
    }
    out.per_flow.push_back(static_cast<double>(bytes) / span);
    out.combined += out.per_flow.back();
  }
  return out;
}

}  // namespace minet
