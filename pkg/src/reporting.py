import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from .config import load_config
from .file_formats import file_digest, write_text

_cfg = load_config()

SCHEMA = int(_cfg["reporting"].get("schema", 1))


def dyadic_parts(value: Fraction) -> Dict[str, int]:
    """numerator / 2^exponent form of a dyadic rational."""
    value = Fraction(value)
    denominator = value.denominator
    if denominator & (denominator - 1):
        raise ValueError(f"{value} is not a dyadic rational")
    return {"numerator": value.numerator, "exponent": denominator.bit_length() - 1}


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return dyadic_parts(obj)
    if isinstance(obj, dict):
        return {str(key): to_jsonable(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(item) for item in obj]
    if isinstance(obj, Enum):
        return obj.value
    return obj


@dataclass
class RunReport:
    command: str
    seed: Optional[int] = None
    inputs: List[Dict[str, str]] = field(default_factory=list)
    results: Dict[str, Any] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)

    def add_input(self, path: str) -> None:
        self.inputs.append({"name": Path(path).name, "sha256": file_digest(path)})

    @contextmanager
    def phase(self, name: str):
        started = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = round((time.perf_counter() - started) * 1000.0, 3)

    def payload(self) -> Dict[str, Any]:
        """Everything covered by the determinism contract (timings excluded)."""
        return {
            "schema": SCHEMA,
            "command": self.command,
            "seed": self.seed,
            "inputs": self.inputs,
            "results": to_jsonable(self.results),
        }

    def to_dict(self) -> Dict[str, Any]:
        data = self.payload()
        data["timings"] = dict(self.timings)
        return data


def render_json(report: RunReport, include_timings: bool = True) -> str:
    data = report.to_dict() if include_timings else report.payload()
    indent = _cfg["reporting"].get("indent", 2)
    return json.dumps(data, sort_keys=True, indent=indent) + "\n"


def _format_scalar(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6f}"
    if isinstance(value, dict) and set(value) == {"numerator", "exponent"}:
        return f"{value['numerator']}/2^{value['exponent']}"
    if isinstance(value, list):
        return "[" + ", ".join(_format_scalar(v) for v in value) + "]"
    if value is None:
        return "-"
    return str(value)


def _is_table(value: Any) -> bool:
    return isinstance(value, list) and bool(value) and all(isinstance(row, dict) for row in value)


def render_text(report: RunReport) -> str:
    results = to_jsonable(report.results)
    lines = [f"[{report.command}]"]
    tables = []
    for key in sorted(results):
        value = results[key]
        if _is_table(value):
            tables.append((key, value))
        elif isinstance(value, dict) and set(value) != {"numerator", "exponent"}:
            for sub_key in sorted(value):
                lines.append(f"{key}.{sub_key}: {_format_scalar(value[sub_key])}")
        else:
            lines.append(f"{key}: {_format_scalar(value)}")

    for key, rows in tables:
        frame = pd.DataFrame([{col: _format_scalar(val) for col, val in row.items()} for row in rows])
        lines.append("")
        lines.append(f"{key}:")
        lines.append(frame.to_string(index=False))
    return "\n".join(lines) + "\n"


def write_report(report: RunReport, json_path: Optional[str]) -> None:
    if json_path:
        write_text(json_path, render_json(report))
