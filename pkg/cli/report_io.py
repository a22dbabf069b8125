"""Report serialization.

Text form: one `dotted.key: <json>` line per leaf. Nested objects are
flattened into dotted keys and lists of objects into numbered keys; every
other value (numbers, strings, null, lists of scalars) is written as JSON,
so parsing the lines back rebuilds the report exactly.
"""

import json
from typing import Any, Dict, Literal, Type, Union

from pydantic import BaseModel

from verifier.reports import CensusReport, DecodeReport, NestedReport, PerfectnessReport

ReportFormat = Literal["text", "json"]
Report = Union[PerfectnessReport, NestedReport, CensusReport, DecodeReport]

REPORT_TYPES: Dict[str, Type[BaseModel]] = {
    "perfectness": PerfectnessReport,
    "nested": NestedReport,
    "census": CensusReport,
    "decode": DecodeReport,
}


def _flatten(value: Any, prefix: str, out: Dict[str, Any]) -> None:
    if isinstance(value, dict) and value:
        for key, item in value.items():
            _flatten(item, f"{prefix}.{key}" if prefix else key, out)
    elif isinstance(value, list) and value and all(isinstance(item, dict) for item in value):
        for idx, item in enumerate(value):
            _flatten(item, f"{prefix}.{idx}", out)
    else:
        out[prefix] = value


def _listify(node: Any) -> Any:
    if not isinstance(node, dict):
        return node
    node = {key: _listify(item) for key, item in node.items()}
    if node and all(key.isdigit() for key in node):
        return [node[key] for key in sorted(node, key=int)]
    return node


def format_report(report: BaseModel, fmt: ReportFormat = "text") -> str:
    """Render a report as dotted key lines or as JSON."""
    if fmt == "json":
        return report.model_dump_json(indent=2) + "\n"
    flat: Dict[str, Any] = {}
    _flatten(report.model_dump(mode="json"), "", flat)
    return "".join(f"{key}: {json.dumps(value)}\n" for key, value in flat.items())


def parse_report_text(text: str) -> Dict[str, Any]:
    """Rebuild the nested document from `key: value` lines."""
    root: Dict[str, Any] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        key, sep, raw = line.partition(": ")
        if not sep:
            raise ValueError(f"line {number}: expected 'key: value', got {line!r}")
        node = root
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = json.loads(raw)
    return _listify(root)


def load_report(text: str) -> Report:
    """Parse either format back into its report model."""
    document = json.loads(text) if text.lstrip().startswith("{") else parse_report_text(text)
    kind = document.get("report")
    if kind not in REPORT_TYPES:
        raise ValueError(f"unknown report type {kind!r}")
    return REPORT_TYPES[kind].model_validate(document)
