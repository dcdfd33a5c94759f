"""JSON and CSV serialisation for complexes, posets, reports and graphs.

Every document carries a ``format`` tag; builders add a ``meta`` object
(model, n, q or L) that later reports copy so bundles can key rows by it.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any

from .homology import HomologyReport
from .poset import Poset, SimplicialComplex, face_closure

SC = "sc-v1"
POSET = "poset-v1"
HOMOLOGY = "homology-v1"
GRAPH = "lg-v1"
VERIFY = "verify-v1"
PHI = "phi-v1"


class FormatError(ValueError):
    """A document is unreadable or has the wrong format tag."""


def dumps(doc: Any) -> str:
    """Deterministic JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"


def load(path: str | Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not JSON: {exc}") from exc
    if not isinstance(doc, dict) or "format" not in doc:
        raise FormatError(f"{path} has no format tag")
    return doc


def _expect(doc: dict, fmt: str):
    if doc.get("format") != fmt:
        raise FormatError(f"expected {fmt}, got {doc.get('format')!r}")


def complex_to_json(k: SimplicialComplex, meta: dict | None = None) -> dict:
    doc = {
        "format": SC,
        "vertices": [{"id": v, "label": k.labels[v]} for v in k.vertices],
        "facets": [list(f) for f in k.facets()],
    }
    if meta:
        doc["meta"] = meta
    return doc


def complex_from_json(doc: dict) -> SimplicialComplex:
    _expect(doc, SC)
    try:
        labels = {int(v["id"]): str(v["label"]) for v in doc["vertices"]}
        facets = [[int(x) for x in f] for f in doc["facets"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed {SC} document: {exc}") from exc
    unknown = {x for f in facets for x in f} - set(labels)
    if unknown:
        raise FormatError(f"facets use undeclared vertices {sorted(unknown)[:5]}")
    k = face_closure(facets, labels=labels)
    lonely = set(labels) - set(k.vertices)
    if lonely:
        k = face_closure(facets + [[v] for v in sorted(lonely)], labels=labels)
    return k


def poset_to_json(p: Poset, meta: dict | None = None) -> dict:
    doc = {
        "format": POSET,
        "elements": [p.label(i) for i in range(len(p))],
        "hasse": [list(e) for e in p.hasse()],
    }
    if meta:
        doc["meta"] = meta
    return doc


def poset_from_json(doc: dict) -> Poset:
    _expect(doc, POSET)
    try:
        elements = [str(e) for e in doc["elements"]]
        hasse = [(int(a), int(b)) for a, b in doc["hasse"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed {POSET} document: {exc}") from exc
    if any(not (0 <= a < len(elements) and 0 <= b < len(elements)) for a, b in hasse):
        raise FormatError("hasse edge refers to a missing element")
    return Poset.from_hasse(elements, hasse)


def homology_from_json(doc: dict) -> HomologyReport:
    _expect(doc, HOMOLOGY)
    return HomologyReport(doc["betti"], doc["torsion"], doc["euler"], doc.get("coefficients", "Q"))


def matrix_json(vectors) -> list[list[int]]:
    """Basis witness as a row-major integer matrix."""
    return [list(map(int, v)) for v in vectors]


def _param(meta: dict) -> str:
    for key in ("q", "L", "max_edges"):
        if key in meta:
            return f"{key}={meta[key]}"
    return ""


def _row_key(meta: dict):
    return (str(meta.get("model", "")), int(meta.get("n", 0)), _param(meta))


BUNDLE_COLUMNS = {
    HOMOLOGY: ["model", "n", "param", "coefficients", "betti", "torsion", "euler"],
    VERIFY: ["model", "n", "param", "checked", "violations"],
    PHI: ["model", "n", "param", "order_preserving", "fibers", "failures"],
}


def bundle_rows(docs: list[dict]) -> tuple[str | None, list[dict]]:
    """One row per report, sorted by (model, n, parameter); all inputs must share a format."""
    if not docs:
        return None, []
    formats = {d.get("format") for d in docs}
    if len(formats) != 1:
        raise FormatError(f"cannot bundle mixed formats {sorted(map(str, formats))}")
    fmt = formats.pop()
    if fmt not in BUNDLE_COLUMNS:
        raise FormatError(f"format {fmt!r} cannot be bundled")
    rows = []
    for d in docs:
        meta = d.get("meta", {})
        row = {"model": meta.get("model", ""), "n": meta.get("n", ""), "param": _param(meta)}
        if fmt == HOMOLOGY:
            row.update(
                coefficients=d["coefficients"],
                betti=" ".join(map(str, d["betti"])),
                torsion=";".join(" ".join(map(str, t)) for t in d["torsion"]),
                euler=d["euler"],
            )
        elif fmt == VERIFY:
            row.update(checked=d["checked"], violations=len(d["violations"]))
        else:
            row.update(order_preserving=d["order_preserving"], fibers=d["checked"], failures=len(d["failures"]))
        rows.append((_row_key(meta), row))
    rows.sort(key=lambda r: r[0])
    return fmt, [r for _, r in rows]


def bundle_csv(fmt: str | None, rows: list[dict]) -> str:
    if fmt is None:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BUNDLE_COLUMNS[fmt], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def bundle_json(fmt: str | None, rows: list[dict]) -> dict:
    return {"format": "bundle-v1", "source_format": fmt, "rows": rows}
