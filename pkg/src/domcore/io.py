"""File formats: community lists, relation incidences, reports."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

from .errors import InputError, ParseError
from .evaluation import CommunitySet
from .graph import id_key, parse_id


def read_communities(path, name=None, source="ground-truth") -> CommunitySet:
    """One community per line, whitespace-separated IDs (SNAP ``cmty`` files)."""
    sets = []
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                s = line.strip()
                if not s or s.startswith("#"):
                    continue
                sets.append({parse_id(tok) for tok in s.split()})
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return CommunitySet(name or Path(path).name, sets, source)


def community_lines(sets) -> list:
    return ["\t".join(str(x) for x in sorted(s, key=id_key)) for s in sets]


def write_communities(path, sets) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in community_lines(sets):
            fh.write(line + "\n")


def read_relations(path) -> list:
    """``<node_id><TAB><simplex_id>`` incidences, one per line."""
    out = []
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                s = line.strip()
                if not s or s.startswith("#"):
                    continue
                parts = s.split()
                if len(parts) != 2:
                    raise ParseError(f"expected node and simplex ID: {s!r}", line=lineno, path=path)
                out.append((parse_id(parts[0]), parse_id(parts[1])))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return out


def write_id_list(path, ids) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for x in ids:
            fh.write(f"{x}\n")


def write_removals(path, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["removed_id", "dominator_id", "iteration"])
        w.writerows(rows)


def write_scatter(path, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "degree", "bc", "region"])
        for ext, deg, bc, region in rows:
            w.writerow([ext, deg, repr(bc), region])


def _finite(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {str(k): _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def dump_json(obj) -> str:
    """Stable JSON text: sorted keys, non-finite floats as null."""
    return json.dumps(_finite(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dump_json(obj))
