import logging
import os

import numpy as np
import pandas as pd

from quadrature.function_handle import FunctionHandle, Regularity
from utils.errors import RejectedInputError
from utils.ooda import OODAAgent

REQUIRED_COLUMNS = ("x", "value")


class SampleCollector(OODAAgent):
    """Reads a sampled function from CSV (columns ``x,value``, header required)."""

    def __init__(self):
        super().__init__("SampleCollector")

    def observe(self, data):
        path = data.get("path")
        if path:
            if not os.path.isfile(path):
                raise RejectedInputError(f"sample file not found: {path}")
            self.log(f"Reading samples from {path}")
            frame = pd.read_csv(path)
        else:
            frame = pd.DataFrame(data.get("records", []))
        self.log(f"Observed {len(frame)} rows", logging.DEBUG)
        return {"source": path or "records", "frame": frame}

    def orient(self, data):
        frame = data["frame"]
        missing = [c for c in REQUIRED_COLUMNS if c not in frame.columns]
        if missing:
            raise RejectedInputError(f"sample table lacks column(s) {', '.join(missing)}")
        numeric = frame[list(REQUIRED_COLUMNS)].apply(pd.to_numeric, errors="coerce")
        bad = numeric.isna().any(axis=1) | ~np.isfinite(numeric.to_numpy()).all(axis=1)
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0])
            raise RejectedInputError(f"non-numeric or non-finite entry in data row {row + 1}", location=row + 1)
        data["x"] = numeric["x"].to_numpy(dtype=float)
        data["values"] = numeric["value"].to_numpy(dtype=float)
        return data

    def decide(self, data):
        x = data["x"]
        if x.size < 2:
            raise RejectedInputError("at least two samples are required")
        if np.any(np.abs(x) >= 1.0):
            row = int(np.flatnonzero(np.abs(x) >= 1.0)[0])
            raise RejectedInputError(f"x must lie in (-1, 1), row {row + 1} has x={x[row]!r}", location=row + 1)
        if np.any(np.diff(x) <= 0.0):
            row = int(np.flatnonzero(np.diff(x) <= 0.0)[0]) + 1
            raise RejectedInputError(f"x must be strictly increasing (data row {row + 1})", location=row + 1)
        return data

    def act(self, data):
        x, values = data["x"], data["values"]
        handle = FunctionHandle.from_callable(lambda t: np.interp(t, x, values),
                                              name=f"csv:{data['source']}", regularity=Regularity.ENDPOINT)
        self.log(f"Collected {x.size} samples on [{x[0]:.6g}, {x[-1]:.6g}]")
        return {"handle": handle, "x": x, "values": values, "count": int(x.size)}


def load_samples(path):
    """Run the collector and raise on a failed envelope."""
    result = SampleCollector().run({"path": path})
    if result["status"] != "success":
        raise RejectedInputError(result.get("message", "sample collection failed"))
    return result["data"]
