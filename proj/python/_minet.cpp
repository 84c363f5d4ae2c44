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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "minet/cap.hpp"
#include "minet/error.hpp"
#include "minet/hpt_fib.hpp"
#include "minet/pov.hpp"
#include "minet/record.hpp"
#include "minet/registry.hpp"
#include "minet/scenario.hpp"

namespace py = pybind11;
using namespace minet;

namespace {

Bytes to_bytes(const py::bytes& b) {
  std::string_view s = b;
  return Bytes(s.begin(), s.end());
}

py::bytes from_bytes(const Bytes& b) { return py::bytes(reinterpret_cast<const char*>(b.data()), b.size()); }

py::dict record_dict(const ResourceRecord& r) {
  py::dict d;
  d["name"] = r.name.to_string();
  d["content_hash"] = to_hex(r.content_hash);
  d["locator"] = r.locator.to_string();
  d["publisher"] = to_hex(r.publisher.value);
  return d;
}

py::dict transfer_dict(const TransferReport& r) {
  py::dict d;
  d["scenario"] = r.scenario;
  d["flow"] = r.flow;
  d["bytes"] = r.bytes;
  d["seconds"] = r.seconds;
  d["mean_rate"] = r.mean_rate;
  d["translations"] = r.translations;
  d["retransmissions"] = r.retransmissions;
  d["hash_ok"] = r.hash_ok();
  d["regime_violations"] = r.regime_violations;
  return d;
}

NetworkConfig load_sized(const std::string& path, std::optional<std::uint64_t> size) {
  NetworkConfig cfg = load_network_config(path);
  if (size) {
    for (auto& r : cfg.resources) r.size = *size;
  }
  return cfg;
}

std::optional<py::tuple> lpm(const HptFib& fib, const std::string& name) {
  auto e = fib.longest_prefix_match(parse_identifier(name));
  if (!e) return std::nullopt;
  if (auto* f = std::get_if<Forward>(&e->action)) return py::make_tuple(e->key.to_string(), "forward", f->face);
  return py::make_tuple(e->key.to_string(), "translate", std::get<Translate>(e->action).target.to_string());
}

}  // namespace

PYBIND11_MODULE(_minet, m) {
  m.doc() = "Multi-identifier networking core: names, FIB, consensus registry, simulation and partition analysis";

  static PyObject* error_type = PyErr_NewException("minet.MinetError", PyExc_RuntimeError, nullptr);
  m.attr("MinetError") = py::handle(error_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error_type)(py::str(e.what()));
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  py::class_<Identifier>(m, "Identifier")
      .def(py::init([](const std::string& text) { return parse_identifier(text); }), py::arg("text"))
      .def_property_readonly("kind", [](const Identifier& id) { return std::string(to_string(id.kind())); })
      .def_property_readonly("components", [](const Identifier& id) { return id.components(); })
      .def("covers", [](const Identifier& a, const Identifier& b) { return covers(a, b); })
      .def("__len__", &Identifier::size)
      .def("__str__", &Identifier::to_string)
      .def("__repr__", [](const Identifier& id) { return "Identifier('" + id.to_string() + "')"; })
      .def("__eq__", [](const Identifier& a, const Identifier& b) { return a == b; })
      .def("__hash__", [](const Identifier& id) { return py::hash(py::str(id.to_string())); });

  m.def("sha256_hex", [](const py::bytes& data) { return to_hex(sha256(to_bytes(data))); });

  py::class_<HptFib>(m, "Fib")
      .def(py::init<>())
      .def(
          "add_route",
          [](HptFib& f, const std::string& key, FaceId face) {
            return f.insert({parse_identifier(key), Forward{face}, Origin::Static});
          },
          py::arg("prefix"), py::arg("face"))
      .def(
          "add_translation",
          [](HptFib& f, const std::string& key, const std::string& target) {
            return f.insert({parse_identifier(key), Translate{parse_identifier(target)}, Origin::Static});
          },
          py::arg("prefix"), py::arg("target"))
      .def("remove", [](HptFib& f, const std::string& key) { return f.remove(parse_identifier(key)); })
      .def("lookup", &lpm, py::arg("name"), "Longest prefix match as (prefix, action, argument) or None")
      .def("translate",
           [](const HptFib& f, const std::string& name) -> std::optional<std::string> {
             auto t = f.translate(parse_identifier(name));
             if (!t) return std::nullopt;
             return t->to_string();
           })
      .def("__len__", &HptFib::size)
      .def("dump", [](const HptFib& f) { return dump_fib(f); });

  m.def(
      "bench_fib_insert",
      [](std::size_t n, std::uint64_t seed) {
        FibBenchRow r;
        {
          py::gil_scoped_release release;
          r = bench_fib_insert(n, seed);
        }
        return py::make_tuple(r.n, r.seconds, r.ns_per_entry);
      },
      py::arg("n"), py::arg("seed") = 1, "Returns (n, seconds, ns_per_entry)");

  py::class_<Registry>(m, "Registry")
      .def(py::init([](const std::filesystem::path& dir, std::uint64_t seed) {
             return std::make_unique<Registry>(dir, RegistryOptions{seed});
           }),
           py::arg("state_dir"), py::arg("seed") = 1)
      .def_property_readonly("height", [](const Registry& r) { return r.chain().height(); })
      .def(
          "register_prefix",
          [](Registry& r, const std::string& prefix, const std::string& user, const std::string& real_id) {
            const Registration& reg = r.register_prefix(parse_identifier(prefix), KeyFile::from_seed(sha256("key:" + user)).key,
                                                        as_bytes(real_id));
            return to_hex(reg.owner.value);
          },
          py::arg("prefix"), py::arg("user"), py::arg("real_id") = "",
          "Registers `prefix` for the key derived from the `user` label; returns the owner id")
      .def(
          "publish",
          [](Registry& r, const std::string& name, const py::bytes& content, const std::string& user) {
            return record_dict(r.publish(parse_identifier(name), to_bytes(content), KeyFile::from_seed(sha256("key:" + user)).key));
          },
          py::arg("name"), py::arg("content"), py::arg("user"))
      .def(
          "query",
          [](Registry& r, const std::string& name) {
            QueryResult q = r.query(parse_identifier(name));
            py::dict d = record_dict(q.record);
            d["content"] = from_bytes(q.content);
            d["fetch_ticks"] = q.fetch_ticks;
            return d;
          },
          py::arg("name"))
      .def("chain_dump", [](const Registry& r) { return r.chain().dump(); })
      .def("index_dump", [](const Registry& r) { return r.index().dump(); });

  m.def(
      "run_flows",
      [](const std::string& config, const std::vector<std::string>& flows, std::uint64_t seed,
         std::optional<std::uint64_t> size) {
        NetworkConfig cfg = load_sized(config, size);
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_flows(cfg, flows, seed);
        }
        py::list reports;
        for (const auto& t : r.reports) reports.append(transfer_dict(t));
        py::dict d;
        d["reports"] = reports;
        d["metrics_csv"] = r.metrics_csv;
        d["ticks"] = r.ticks;
        return d;
      },
      py::arg("config"), py::arg("flows"), py::arg("seed") = 1, py::arg("size") = py::none(),
      "Runs flows of a scenario file concurrently; `size` overrides every resource size");

  m.def(
      "run_scenario",
      [](const std::string& config, const std::string& kind, std::uint64_t seed, std::optional<std::uint64_t> size) {
        NetworkConfig cfg = load_sized(config, size);
        py::gil_scoped_release release;
        TransferReport r = run_scenario(parse_scenario_kind(kind), cfg, seed);
        py::gil_scoped_acquire acquire;
        return transfer_dict(r);
      },
      py::arg("config"), py::arg("kind"), py::arg("seed") = 1, py::arg("size") = py::none());

  m.def(
      "run_consensus",
      [](std::uint64_t blocks, std::size_t silent, std::uint64_t seed, std::size_t commissioners, std::size_t butlers) {
        PovSimConfig c;
        c.blocks = blocks;
        c.silent = silent;
        c.seed = seed;
        c.commissioners = commissioners;
        c.butlers = butlers;
        PovSimResult r;
        {
          py::gil_scoped_release release;
          r = run_pov_simulation(c);
        }
        py::dict d;
        d["min_height"] = r.min_height;
        d["max_height"] = r.max_height;
        d["prefix_consistent"] = r.prefix_consistent;
        d["underquorum_blocks"] = r.underquorum_blocks;
        d["terms"] = r.terms;
        d["applied_txs"] = r.applied_txs;
        d["audited_txs"] = r.audited_txs;
        d["ticks"] = r.ticks;
        d["metrics_csv"] = r.metrics_csv;
        return d;
      },
      py::arg("blocks") = 100, py::arg("silent") = 0, py::arg("seed") = 1, py::arg("commissioners") = 5,
      py::arg("butlers") = 3);

  py::class_<cap::PartitionReport>(m, "PartitionReport")
      .def_readonly("tolerance", &cap::PartitionReport::tolerance)
      .def_readonly("avg_min_repair", &cap::PartitionReport::avg_min_repair)
      .def_readonly("samples", &cap::PartitionReport::samples)
      .def_readonly("half_width", &cap::PartitionReport::half_width)
      .def_readonly("exact", &cap::PartitionReport::exact)
      .def("__repr__", [](const cap::PartitionReport& r) { return cap::report_csv_row("PartitionReport", r); });

  py::class_<cap::Topology>(m, "Topology")
      .def_static("parse", &cap::Topology::parse, py::arg("text"))
      .def_static("load", &cap::Topology::load, py::arg("path"))
      .def_property_readonly("node_count", [](const cap::Topology& t) { return t.nodes.size(); })
      .def_property_readonly("edge_count", [](const cap::Topology& t) { return t.edges.size(); })
      .def("to_text", &cap::Topology::to_text);

  m.def(
      "estimate_tolerance",
      [](const cap::Topology& t, std::uint64_t samples, std::uint64_t seed, double quorum) {
        py::gil_scoped_release release;
        return cap::estimate_tolerance(t, cap::QuorumRule{quorum}, samples, seed);
      },
      py::arg("topology"), py::arg("samples") = 100000, py::arg("seed") = 1, py::arg("quorum") = 0.5);
  m.def(
      "exact_tolerance", [](const cap::Topology& t, double quorum) { return cap::exact_tolerance(t, {quorum}); },
      py::arg("topology"), py::arg("quorum") = 0.5);
  m.def(
      "estimate_hierarchical",
      [](const cap::Topology& t, std::uint64_t samples, std::uint64_t seed) {
        return cap::estimate_hierarchical(t, {}, samples, seed);
      },
      py::arg("topology"), py::arg("samples") = 100000, py::arg("seed") = 1);
}
