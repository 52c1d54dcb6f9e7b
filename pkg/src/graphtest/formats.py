"""File formats: graph-sample text files, channel CSV, result CSV, run manifests.

The graph-sample format is line-oriented text. The first content line is a
header ``graphsample v=<int> n=<int> base=<0|1>``; every following content
line is one edge occurrence ``<graph_index> <i> <j>``. Graph indices are
always zero-based and lie in [0, n); ``base`` applies to the vertex labels
only. Lines starting with ``#`` are comments, blank lines are ignored, and a
graph with no edges simply contributes no lines.

Channel CSV holds one label row followed by one row per time sample. Result
CSVs have fixed per-command schemas. When a run writes a manifest, each
output file carries a ``# manifest: <name>`` comment line referencing it.
"""

from __future__ import annotations

import csv
import dataclasses
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DataFormatError, EmptySampleError
from .graphs import Graph, GraphSample
from .inference import PowerPoint, TestResult
from .models import DensityPoint
from .timeseries import ChannelMatrix, SummaryGraph

__all__ = [
    "RunManifest",
    "format_graph_sample",
    "write_graph_sample",
    "read_graph_sample",
    "read_channel_csv",
    "format_test_csv",
    "format_power_csv",
    "format_density_csv",
    "format_summary_csv",
    "write_text",
    "write_manifest",
]


def _manifest_comment(manifest_name: str | None) -> list[str]:
    return [f"# manifest: {manifest_name}"] if manifest_name else []


def format_graph_sample(
    sample: GraphSample, base: int = 0, manifest_name: str | None = None
) -> str:
    """Serialize a sample to graph-sample text."""
    if base not in (0, 1):
        raise ValueError(f"base must be 0 or 1, got {base}")
    lines = [f"graphsample v={sample.v} n={sample.n} base={base}"]
    lines += _manifest_comment(manifest_name)
    for g_idx, g in enumerate(sample):
        for i, j in g.edges():
            lines.append(f"{g_idx} {i + base} {j + base}")
    return "\n".join(lines) + "\n"


def write_graph_sample(
    path,
    sample: GraphSample,
    base: int = 0,
    manifest_name: str | None = None,
) -> None:
    Path(path).write_text(format_graph_sample(sample, base, manifest_name))


def _content_lines(path) -> list[tuple[int, str]]:
    """(line_number, text) for every non-blank, non-comment line."""
    out = []
    with open(path, "r") as fh:
        for lineno, raw in enumerate(fh, start=1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            out.append((lineno, stripped))
    return out


def read_graph_sample(path) -> GraphSample:
    """Parse a graph-sample file; errors carry the offending line number."""
    path = str(path)
    lines = _content_lines(path)
    if not lines:
        raise DataFormatError("file has no content lines", path=path)

    lineno, header = lines[0]
    tokens = header.split()
    if not tokens or tokens[0] != "graphsample":
        raise DataFormatError(
            "header must start with 'graphsample'", path=path, line=lineno
        )
    fields = {}
    for tok in tokens[1:]:
        key, eq, value = tok.partition("=")
        if not eq or key in fields:
            raise DataFormatError(
                f"malformed header token {tok!r}", path=path, line=lineno
            )
        fields[key] = value
    if set(fields) != {"v", "n", "base"}:
        raise DataFormatError(
            f"header must define v, n and base, got {sorted(fields)}",
            path=path,
            line=lineno,
        )
    try:
        v, n, base = int(fields["v"]), int(fields["n"]), int(fields["base"])
    except ValueError:
        raise DataFormatError(
            "header fields must be integers", path=path, line=lineno
        ) from None
    if v < 2:
        raise DataFormatError(f"need v >= 2, got v={v}", path=path, line=lineno)
    if n < 1:
        raise DataFormatError(
            f"sample must contain at least one graph, got n={n}",
            path=path,
            line=lineno,
        )
    if base not in (0, 1):
        raise DataFormatError(
            f"base must be 0 or 1, got {base}", path=path, line=lineno
        )

    edge_sets: list[set[tuple[int, int]]] = [set() for _ in range(n)]
    for lineno, text in lines[1:]:
        parts = text.split()
        if len(parts) != 3:
            raise DataFormatError(
                f"expected '<graph> <i> <j>', got {text!r}", path=path, line=lineno
            )
        try:
            g_idx, i, j = (int(p) for p in parts)
        except ValueError:
            raise DataFormatError(
                f"non-integer edge line {text!r}", path=path, line=lineno
            ) from None
        if not 0 <= g_idx < n:
            raise DataFormatError(
                f"graph index {g_idx} outside [0, {n})", path=path, line=lineno
            )
        i -= base
        j -= base
        if i == j or not (0 <= i < v and 0 <= j < v):
            raise DataFormatError(
                f"invalid vertex pair ({i + base}, {j + base}) for v={v}",
                path=path,
                line=lineno,
            )
        if i > j:
            i, j = j, i
        if (i, j) in edge_sets[g_idx]:
            raise DataFormatError(
                f"duplicate edge ({i + base}, {j + base}) in graph {g_idx}",
                path=path,
                line=lineno,
            )
        edge_sets[g_idx].add((i, j))
    try:
        return GraphSample(Graph.from_edges(v, edges) for edges in edge_sets)
    except EmptySampleError:
        raise DataFormatError("sample must contain at least one graph", path=path)


def read_channel_csv(path, sampling_rate: float) -> ChannelMatrix:
    """Parse a channel CSV (label row + one row of reals per time sample)."""
    path = str(path)
    with open(path, "r", newline="") as fh:
        reader = csv.reader(fh)
        rows = [(lineno, row) for lineno, row in enumerate(reader, start=1) if row]
    if not rows:
        raise DataFormatError("file is empty", path=path)
    header_line, header = rows[0]
    labels = [cell.strip() for cell in header]
    if any(not lab for lab in labels):
        raise DataFormatError("empty channel label", path=path, line=header_line)
    data = []
    for lineno, row in rows[1:]:
        if len(row) != len(labels):
            raise DataFormatError(
                f"expected {len(labels)} columns, got {len(row)}",
                path=path,
                line=lineno,
            )
        try:
            parsed = [float(cell) for cell in row]
        except ValueError:
            raise DataFormatError(
                "non-numeric value in data row", path=path, line=lineno
            ) from None
        if not all(np.isfinite(parsed)):
            raise DataFormatError(
                "non-finite value in data row", path=path, line=lineno
            )
        data.append(parsed)
    if not data:
        raise DataFormatError("no data rows after the label row", path=path)
    try:
        return ChannelMatrix(labels, data, sampling_rate)
    except ValueError as e:
        raise DataFormatError(str(e), path=path) from e


def _csv_lines(header: str, rows: Sequence[str], manifest_name: str | None) -> str:
    return "\n".join(_manifest_comment(manifest_name) + [header] + list(rows)) + "\n"


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    return repr(x) if isinstance(x, float) else str(x)


def format_test_csv(result: TestResult, manifest_name: str | None = None) -> str:
    """One-row CSV: method,w,critical_value,p_value,reject,alpha,replications,seed."""
    w = None if result.statistic is None else result.statistic.value
    row = ",".join(
        _fmt(x)
        for x in (
            result.method,
            w,
            result.critical_value,
            result.p_value,
            result.reject,
            result.alpha,
            result.replications,
            result.seed,
        )
    )
    return _csv_lines(
        "method,w,critical_value,p_value,reject,alpha,replications,seed",
        [row],
        manifest_name,
    )


def format_power_csv(
    points: Sequence[PowerPoint], manifest_name: str | None = None
) -> str:
    """CSV with one row per grid point: param,power_w,power_bc,replications."""
    rows = [
        ",".join(
            _fmt(x)
            for x in (p.parameter, p.power, p.power_baseline, p.replications)
        )
        for p in points
    ]
    return _csv_lines("param,power_w,power_bc,replications", rows, manifest_name)


def format_density_csv(
    points: Sequence[DensityPoint], manifest_name: str | None = None
) -> str:
    """CSV with one row per parameter value: theta1,theta2,density,draws."""
    rows = [
        ",".join(_fmt(x) for x in (p.theta1, p.theta2, p.density, p.draws))
        for p in points
    ]
    return _csv_lines("theta1,theta2,density,draws", rows, manifest_name)


def format_summary_csv(
    summary: SummaryGraph, base: int = 0, manifest_name: str | None = None
) -> str:
    """CSV of the selected edges, most frequent first: i,j,frequency."""
    if base not in (0, 1):
        raise ValueError(f"base must be 0 or 1, got {base}")
    rows = [
        f"{i + base},{j + base},{_fmt(freq)}"
        for (i, j), freq in summary.frequencies
    ]
    return _csv_lines("i,j,frequency", rows, manifest_name)


def write_text(path, text: str) -> None:
    Path(path).write_text(text)


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility record for one command invocation."""

    command: str
    seed: int
    parameters: dict
    version: str
    created: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat()
    )
    outputs: tuple[str, ...] = ()

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True) + "\n"


def write_manifest(path, manifest: RunManifest) -> None:
    Path(path).write_text(manifest.to_json())
