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

"""Multi-identifier networking core."""

from ._minet import (
    Fib,
    Identifier,
    MinetError,
    PartitionReport,
    Registry,
    Topology,
    bench_fib_insert,
    estimate_hierarchical,
    estimate_tolerance,
    exact_tolerance,
    run_consensus,
    run_flows,
    run_scenario,
    sha256_hex,
)

__all__ = [
    "Fib",
    "Identifier",
    "MinetError",
    "PartitionReport",
    "Registry",
    "Topology",
    "bench_fib_insert",
    "estimate_hierarchical",
    "estimate_tolerance",
    "exact_tolerance",
    "run_consensus",
    "run_flows",
    "run_scenario",
    "sha256_hex",
]
