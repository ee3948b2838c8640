"""Deterministic report writers: key=value lines plus a JSON summary.

Floats are rendered with ``repr`` (shortest round-trip form), so identical
runs produce byte-identical files.
"""

import json
import math


def format_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):  # covers numpy float scalars too
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def write_kv_report(path, records):
    """Write ``key=value`` lines in the given (insertion) order."""
    lines = [f"{key}={format_value(value)}\n" for key, value in records.items()]
    with open(path, "w", encoding="utf-8") as fh:
        fh.writelines(lines)


def write_json_summary(path, obj):
    """Write the machine-readable summary next to the key=value report."""
    def _default(v):
        if isinstance(v, float) and math.isinf(v):
            return "inf" if v > 0 else "-inf"
        raise TypeError(f"not JSON serializable: {type(v)}")

    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2, default=_default)
        fh.write("\n")


def sanitize_json(obj):
    """Replace non-finite floats so the JSON output stays strictly parseable."""
    if isinstance(obj, dict):
        return {k: sanitize_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize_json(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else "-inf"
    return obj
