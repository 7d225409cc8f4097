"""Certificates and deterministic report assembly.

A certificate is one named check with a pass/fail status, the truncation
bounds it was verified under, and an optional witness.  Machine-format
reports are byte-identical across runs for fixed inputs and seed: fields are
ordered, certificates sorted by name, and wall-clock timing is reported only
in the human format.  The battery runner fans out to a thread pool when
QME_KERNEL_THREADS asks for one; assembly order never depends on scheduling.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .diagnostics import CheckResult

__all__ = ["Certificate", "Report", "run_battery", "worker_count"]

FORMAT_VERSION = 1


@dataclass
class Certificate:
    name: str
    status: str  # "pass" | "fail"
    bounds: dict = field(default_factory=dict)
    witness: object = None
    timing_ms: float = 0.0

    @classmethod
    def from_check(cls, result: CheckResult, timing_ms: float = 0.0, prefix: str = "") -> "Certificate":
        name = f"{prefix}{result.name}"
        return cls(name=name, status="pass" if result.ok else "fail",
                   bounds=dict(result.bound or {}), witness=result.witness,
                   timing_ms=timing_ms)

    @property
    def ok(self) -> bool:
        return self.status == "pass"


def worker_count() -> int:
    raw = os.environ.get("QME_KERNEL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_battery(tasks: Iterable[tuple[str, Callable[[], CheckResult]]]) -> list[Certificate]:
    """Run named checks, possibly in a worker pool; results sorted by name."""
    tasks = list(tasks)

    def run_one(item):
        name, fn = item
        start = time.perf_counter()
        result = fn()
        elapsed = (time.perf_counter() - start) * 1000.0
        if not isinstance(result, CheckResult):
            result = CheckResult(name, bool(result))
        result.name = name
        return Certificate.from_check(result, timing_ms=elapsed)

    workers = worker_count()
    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            certs = list(pool.map(run_one, tasks))
    else:
        certs = [run_one(t) for t in tasks]
    certs.sort(key=lambda c: c.name)
    return certs


class Report:
    def __init__(self, command: str, certificates: list[Certificate], inputs: dict | None = None):
        self.command = command
        self.certificates = sorted(certificates, key=lambda c: c.name)
        self.inputs = inputs or {}

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.certificates)

    def to_machine(self) -> str:
        doc = {
            "format_version": FORMAT_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "status": "pass" if self.ok else "fail",
            "certificates": [
                {
                    "name": c.name,
                    "status": c.status,
                    "bounds": {k: c.bounds[k] for k in sorted(c.bounds)},
                    "witness": _jsonable(c.witness),
                }
                for c in self.certificates
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_human(self) -> str:
        lines = [f"== {self.command} =="]
        for key, value in sorted(self.inputs.items()):
            lines.append(f"   {key}: {value}")
        width = max((len(c.name) for c in self.certificates), default=0)
        for c in self.certificates:
            status = "PASS" if c.ok else "FAIL"
            bounds = " ".join(f"{k}={v}" for k, v in sorted(c.bounds.items())
                              if not isinstance(v, (list, dict)))
            line = f"  {c.name.ljust(width)}  {status}  [{c.timing_ms:8.2f} ms]"
            if bounds:
                line += f"  ({bounds})"
            lines.append(line)
            if not c.ok and c.witness is not None:
                lines.append(f"      witness: {_jsonable(c.witness)}")
        lines.append(f"  => {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _jsonable(value):
    from fractions import Fraction
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(_key(k)): _jsonable(v) for k, v in value.items()}
    if hasattr(value, "terms"):
        return {str(k): str(v) for k, v in sorted(value.terms.items(), key=lambda kv: str(kv[0]))}
    return str(value)


def _key(k):
    if isinstance(k, tuple):
        return "·".join(str(x) for x in k) or "1"
    return k
