#!/usr/bin/env python3
"""Prepends the Apache-2.0 header to project source files. Idempotent."""

import pathlib
import sys

HEADER = """Copyright 2026 The minet Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.""".splitlines()

SKIP_DIRS = {"vendor", "build", "examples", ".git", "fixtures", "docs"}
SLASH = {".cpp", ".hpp", ".h", ".cc"}
HASH = {".py", ".sh", ".cmake", ".toml"}
MARKER = "Licensed under the Apache License"


def comment(prefix):
    return "\n".join((prefix + " " + line).rstrip() for line in HEADER) + "\n"


def style(path):
    if path.name == "CMakeLists.txt" or path.suffix in HASH:
        return "#"
    if path.suffix in SLASH:
        return "//"
    return None


def apply(path):
    prefix = style(path)
    if prefix is None:
        return False
    text = path.read_text()
    if MARKER in text[:2000]:
        return False
    block = comment(prefix)
    if text.startswith("#!"):
        first, _, rest = text.partition("\n")
        text = first + "\n" + block + "\n" + rest
    else:
        text = block + "\n" + text
    path.write_text(text)
    return True


def main(root):
    root = pathlib.Path(root)
    changed = 0
    for path in sorted(root.rglob("*")):
        if not path.is_file() or any(part in SKIP_DIRS for part in path.relative_to(root).parts):
            continue
        changed += apply(path)
    print(f"{changed} files updated")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parents[1])
