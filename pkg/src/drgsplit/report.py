"""Deterministic report serialization.

``canonical_json`` writes nested dict/list/scalar structures with fixed field
order (dict insertion order), two-space indentation for objects, inline
arrays, and floats at 17 significant digits — enough to round-trip IEEE
doubles exactly, so identical runs produce byte-identical documents.  The
markdown and csv renderers draw from the same report dictionary, so all
formats carry identical numbers.
"""

import json
import math

__all__ = [
    "canonical_json",
    "format_float",
    "verify_report_markdown",
    "verify_report_csv",
    "dims_markdown",
    "dims_csv",
]


def format_float(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError(f"cannot serialize non-finite float {value!r}")
    return format(float(value), ".17g")


def _encode(value, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        parts = [
            f'{inner}{json.dumps(str(key))}: {_encode(item, indent + 1)}'
            for key, item in value.items()
        ]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_encode(item, indent) for item in value) + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot serialize {type(value).__name__} in a report")


def canonical_json(value) -> str:
    return _encode(value, 0) + "\n"


def _flatten(value, prefix, rows):
    if isinstance(value, dict):
        for key, item in value.items():
            _flatten(item, f"{prefix}.{key}" if prefix else str(key), rows)
    elif isinstance(value, (list, tuple)):
        for idx, item in enumerate(value):
            _flatten(item, f"{prefix}[{idx}]", rows)
    else:
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            text = format_float(value)
        elif value is None:
            text = ""
        else:
            text = str(value)
        rows.append((prefix, text))


def verify_report_csv(report: dict) -> str:
    """Flat key,value rows covering the entire report."""
    rows = []
    _flatten(report, "", rows)
    lines = ["key,value"]
    for key, text in rows:
        if "," in text or '"' in text:
            text = '"' + text.replace('"', '""') + '"'
        lines.append(f"{key},{text}")
    return "\n".join(lines) + "\n"


def _dims_table_md(dims: list[list[int]]) -> list[str]:
    d = len(dims) - 1
    lines = ["| i\\j | " + " | ".join(str(j) for j in range(d + 1)) + " |"]
    lines.append("|" + " --- |" * (d + 2))
    for i, row in enumerate(dims):
        lines.append(f"| {i} | " + " | ".join(str(v) for v in row) + " |")
    return lines


def dims_markdown(graph_name: str, dims_by_pair: dict[str, list[list[int]]]) -> str:
    lines = [f"# Reduced split-space dimensions for {graph_name}", ""]
    for pair, dims in dims_by_pair.items():
        lines.append(f"## ({pair[0]},{pair[1]})")
        lines.append("")
        lines.extend(_dims_table_md(dims))
        lines.append("")
    return "\n".join(lines)


def dims_csv(dims_by_pair: dict[str, list[list[int]]]) -> str:
    lines = ["pair,i,j,dim"]
    for pair, dims in dims_by_pair.items():
        for i, row in enumerate(dims):
            for j, value in enumerate(row):
                lines.append(f"{pair},{i},{j},{value}")
    return "\n".join(lines) + "\n"


def dims_json(graph_name: str, dims_by_pair: dict[str, list[list[int]]]) -> str:
    return canonical_json(
        {"schema_version": 1, "graph": graph_name, "dims": dims_by_pair}
    )


def verify_report_markdown(report: dict) -> str:
    graph = report["graph"]
    lines = [f"# Verification report: {graph['name']}", ""]
    lines.append(
        f"n = {graph['n']}, diameter = {graph['diameter']}, "
        f"base vertex = {report['config']['base']}, seed = {report['config']['seed']}"
    )
    lines.append("")
    lines.append(f"Overall: **{'PASS' if report['ok'] else 'FAIL'}** "
                 f"(exit code {report['exit_code']})")
    lines.append("")

    lines.append("## Reduced split-space dimensions")
    lines.append("")
    for pair, grid in report["grids"].items():
        lines.append(f"### ({pair[0]},{pair[1]})")
        lines.append("")
        lines.extend(_dims_table_md(grid["dims"]))
        lines.append("")

    lines.append("## Duality")
    lines.append("")
    for pair, dual in report["duality"].items():
        lines.append(
            f"- {pair}: worst non-exempt inner product "
            f"{format_float(dual['worst_offdiagonal'])} "
            f"(witness {dual['witness']}), exempt control max "
            f"{format_float(dual['exempt_max'])}, dimension corollary "
            f"{'ok' if dual['dim_corollary_ok'] else 'VIOLATED'}"
        )
    lines.append("")

    modules = report["modules"]
    lines.append("## Irreducible modules")
    lines.append("")
    lines.append(
        f"{modules['count']} modules (decomposition attempts: "
        f"{modules['attempts']}), dimensions sum to {modules['dim_total']}"
    )
    lines.append("")
    lines.append("| dim | endpoint | dual endpoint | diameter | "
                 "td violation | split orthogonality |")
    lines.append("| --- | --- | --- | --- | --- | --- |")
    for rec in modules["records"]:
        lines.append(
            f"| {rec['dim']} | {rec['endpoint']} | {rec['dual_endpoint']} | "
            f"{rec['diameter']} | {format_float(rec['max_td_violation'])} | "
            f"{format_float(rec['max_split_orthogonality'])} |"
        )
    lines.append("")

    lines.append("## Reconstruction")
    lines.append("")
    for pair, rec in report["reconstruction"].items():
        lines.append(
            f"- {pair}: worst projector distance {format_float(rec['worst_distance'])}"
            f" at cell {rec['worst_cell']}"
        )
    lines.append("")

    lines.append("## Checks")
    lines.append("")
    lines.append("| check | value | threshold | result |")
    lines.append("| --- | --- | --- | --- |")
    for check in report["checks"]:
        value = check["value"]
        value_text = format_float(value) if isinstance(value, float) else str(value)
        thr = check["threshold"]
        thr_text = format_float(thr) if isinstance(thr, float) else str(thr)
        lines.append(
            f"| {check['name']} | {value_text} | {thr_text} | "
            f"{'pass' if check['ok'] else 'FAIL'} |"
        )
    lines.append("")
    return "\n".join(lines)
