"""Deterministic CSV writing and the JSON run report."""

from dataclasses import dataclass, field
from datetime import datetime, timezone
import csv
import hashlib
import json
import os

import numpy as np

REPORT_SCHEMA_VERSION = 1


def format_value(value):
    """Nine significant digits; integers and strings pass through."""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return f"{float(value):.9g}"


def write_csv(path, header, rows, input_hash):
    """Write ``rows`` under a ``# input_hash`` comment line; returns the row count."""
    count = 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# input_hash: {input_hash}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
            count += 1
    return count


def write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunReport:
    """Collects produced files and serialises a run summary."""

    command: str
    parameters: dict
    input_hash: str
    input_files: dict = field(default_factory=dict)
    files: list = field(default_factory=list)
    status: str = "ok"
    messages: list = field(default_factory=list)

    def add_input(self, path):
        if path is not None and os.path.isfile(path):
            self.input_files[os.path.basename(path)] = sha256_file(path)

    def add_file(self, path, rows=None):
        self.files.append({"name": os.path.basename(path), "rows": rows, "sha256": sha256_file(path)})

    def to_dict(self):
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "command": self.command,
            "status": self.status,
            "messages": list(self.messages),
            "input_hash": self.input_hash,
            "inputs_sha256": dict(self.input_files),
            "parameters": self.parameters,
            "files": sorted(self.files, key=lambda f: f["name"]),
        }

    def write(self, out_dir, name="run_report.json"):
        path = os.path.join(out_dir, name)
        write_json(path, self.to_dict())
        return path
