# Copyright 2026 The minet Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import hashlib
import os
from pathlib import Path

import pytest

import minet

ROOT = Path(os.environ.get("MINET_SOURCE_DIR", Path(__file__).resolve().parents[2]))


def test_identifier_roundtrip():
    a = minet.Identifier("ccn:/a/b")
    assert str(a) == "ccn:/a/b"
    assert a.kind == "content"
    assert a.components == ["a", "b"]
    assert len(minet.Identifier("geo:/cn/gd/sz")) == 3
    assert minet.Identifier("ccn:/a").covers(a)
    assert not a.covers(minet.Identifier("ccn:/a"))


def test_bad_identifier_raises_with_code():
    with pytest.raises(minet.MinetError) as info:
        minet.Identifier("nope:")
    assert info.value.code == "BadScheme"


def test_sha256_matches_hashlib():
    data = b"minet" * 100
    assert minet.sha256_hex(data) == hashlib.sha256(data).hexdigest()


def test_fib_longest_prefix_and_translation():
    fib = minet.Fib()
    fib.add_route("ccn:/a", 1)
    fib.add_route("ccn:/a/b", 2)
    fib.add_translation("dns:example.com", "ccn:/a/b")
    assert len(fib) == 3
    assert fib.lookup("ccn:/a/b/c") == ("ccn:/a/b", "forward", 2)
    assert fib.lookup("ccn:/a/x") == ("ccn:/a", "forward", 1)
    assert fib.lookup("ccn:/z") is None
    assert fib.translate("dns:example.com") == "ccn:/a/b"
    assert fib.remove("ccn:/a/b")
    assert fib.lookup("ccn:/a/b/c")[0] == "ccn:/a"


def test_bench_fib_insert():
    n, seconds, ns = minet.bench_fib_insert(2000, seed=3)
    assert n == 2000 and seconds > 0 and ns > 0


def test_registry_register_publish_query(tmp_path):
    reg = minet.Registry(tmp_path / "state", seed=7)
    reg.register_prefix("ccn:/alice", user="alice")
    rec = reg.publish("ccn:/alice/doc", b"hello world" * 50, user="alice")
    assert rec["content_hash"] == hashlib.sha256(b"hello world" * 50).hexdigest()
    out = reg.query("ccn:/alice/doc")
    assert out["content"] == b"hello world" * 50
    assert reg.height == 2

    with pytest.raises(minet.MinetError) as taken:
        reg.register_prefix("ccn:/alice/sub", user="bob")
    assert taken.value.code == "PrefixTaken"
    with pytest.raises(minet.MinetError) as outside:
        reg.publish("ccn:/carol/x", b"x", user="alice")
    assert outside.value.code == "NotRegistered"
    with pytest.raises(minet.MinetError) as missing:
        reg.query("ccn:/alice/none")
    assert missing.value.code == "NotFound"

    reopened = minet.Registry(tmp_path / "state")
    assert reopened.height == reg.height
    assert reopened.query("ccn:/alice/doc")["content"] == b"hello world" * 50


def test_scenario_small_transfer():
    r = minet.run_scenario(str(ROOT / "fixtures" / "testbed10.conf"), "CCN-IP", seed=1, size=50000)
    assert r["hash_ok"] and r["bytes"] == 50000 and r["regime_violations"] == 0


def test_consensus_forkless():
    r = minet.run_consensus(blocks=40, silent=1, seed=2)
    assert r["prefix_consistent"]
    assert r["min_height"] >= 40
    assert r["underquorum_blocks"] == 0


def test_cap_estimate_close_to_exact():
    topo = minet.Topology.load(str(ROOT / "fixtures" / "mesh12.topo"))
    assert topo.edge_count == 12
    exact = minet.exact_tolerance(topo)
    est = minet.estimate_tolerance(topo, samples=40000, seed=5)
    assert exact.exact and not est.exact
    assert abs(exact.tolerance - est.tolerance) < max(4 * est.half_width, 0.01)


def test_cap_hierarchical():
    topo = minet.Topology.load(str(ROOT / "fixtures" / "tree9.topo"))
    r = minet.estimate_hierarchical(topo, samples=20000, seed=1)
    assert 0.0 <= r.tolerance <= 1.0
