import io
import json
import logging
import math
from datetime import datetime, timezone

import numpy as np
import pandas as pd
from pydantic import BaseModel

from utils.config import get_config
from utils.ooda import OODAAgent


def to_plain(value):
    """numpy scalars/arrays and pydantic models to plain Python values."""
    if isinstance(value, BaseModel):
        return to_plain(value.model_dump())
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_plain(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def format_json(value, digits=17, indent=2, level=0):
    """JSON text with every float printed to ``digits`` significant digits."""
    pad, inner = " " * (indent * level), " " * (indent * (level + 1))
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {format_json(v, digits, indent, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        items = [f"{inner}{format_json(v, digits, indent, level + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return json.dumps(str(value))
        return format(value, f".{digits}g")
    return json.dumps(str(value))


class ReportAgent(OODAAgent):
    """Assembles command results into the JSON envelope or a CSV table."""

    def __init__(self, output_format="json"):
        super().__init__("ReportAgent")
        self.output_format = output_format
        self.settings = get_config().output

    def observe(self, data):
        cases = [to_plain(c) for c in data.get("cases", [])]
        self.log(f"Observed {len(cases)} cases for {data.get('command')}", logging.DEBUG)
        return {**data, "cases": cases}

    def orient(self, data):
        data["cases"] = sorted(data["cases"], key=lambda c: str(c.get("id", "")))
        passed = sum(1 for c in data["cases"] if c.get("pass", True))
        data["summary"] = {"pass": passed, "fail": len(data["cases"]) - passed}
        return data

    def decide(self, data):
        started = data.get("started_at")
        now = datetime.now(timezone.utc)
        return {
            "tool_version": self.settings.tool_version,
            "command": data.get("command"),
            "seed": data.get("seed"),
            "cases": data["cases"],
            "summary": data["summary"],
            "timestamp": {
                "generated_at": now.isoformat(),
                "wall_time": (now - started).total_seconds() if started else 0.0,
            },
        }

    def act(self, envelope):
        if self.output_format == "csv":
            text = self._to_csv(envelope["cases"])
        else:
            text = format_json(envelope, self.settings.significant_digits) + "\n"
        self.log(f"Report ready: {envelope['summary']['pass']} pass, {envelope['summary']['fail']} fail")
        return {"envelope": envelope, "text": text}

    def _to_csv(self, cases):
        frame = pd.json_normalize(cases, sep=".") if cases else pd.DataFrame()
        for column in frame.columns:
            if frame[column].map(lambda v: isinstance(v, list)).any():
                frame[column] = frame[column].map(lambda v: json.dumps(v) if isinstance(v, list) else v)
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, float_format=f"%.{self.settings.significant_digits}g")
        return buffer.getvalue()
