"""Append-only persistent cache for exact Kloosterman values.

One JSON document per line, keyed by the canonical query residues; corrupt
lines are skipped (and counted) so a torn write can never poison a run.
Values are exact cyclotomic data, so cache hits are bit-identical to fresh
computation.
"""

from __future__ import annotations

import json
import os
import threading

from .cyclotomic import CyclotomicInteger

SCHEMA_VERSION = "v1"
FILENAME = f"kloosterman-{SCHEMA_VERSION}.jsonl"


def _key_str(key) -> str:
    def conv(x):
        if isinstance(x, tuple):
            return [conv(t) for t in x]
        return x
    return json.dumps(conv(key), separators=(",", ":"))


class KloostermanStore:
    def __init__(self, directory: str):
        self.directory = directory
        self.path = os.path.join(directory, FILENAME)
        self._mem: dict[str, CyclotomicInteger] = {}
        self._lock = threading.Lock()
        self.corrupt_lines = 0
        self._load()

    def _load(self):
        if not os.path.exists(self.path):
            return
        with open(self.path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    doc = json.loads(line)
                    if doc.get("v") != SCHEMA_VERSION:
                        self.corrupt_lines += 1
                        continue
                    self._mem[doc["key"]] = CyclotomicInteger.from_json(doc["val"])
                except Exception:
                    self.corrupt_lines += 1

    def __len__(self):
        return len(self._mem)

    def get(self, key):
        return self._mem.get(_key_str(key))

    def put(self, key, val: CyclotomicInteger):
        # raw (unreduced) coefficients: a cache hit must reproduce fresh
        # computation bit for bit, including interval renderings
        ks = _key_str(key)
        with self._lock:
            if ks in self._mem:
                return
            self._mem[ks] = val
            os.makedirs(self.directory, exist_ok=True)
            raw = {"order": val.order,
                   "coeffs": {str(i): str(v) for i, v in enumerate(val.coeffs) if v}}
            line = json.dumps({"v": SCHEMA_VERSION, "key": ks, "val": raw},
                              separators=(",", ":"))
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
