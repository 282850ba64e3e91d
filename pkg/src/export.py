"""Text renderings of graphs, eigenfunctions, vertex sets and censuses."""

import csv
import io
import json
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Sequence, Union

from src.clique_search import CliqueCensus
from src.finite_field import QuadExtContext, field_tables
from src.paley import PaleyGraph
from src.spectral import Eigenfunction


def _dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def graph_dimacs(g: PaleyGraph) -> str:
    """DIMACS edge format, 1-based vertex ids in index order."""
    lines = [f"c Paley graph P({g.q}^2)", f"p edge {g.v} {g.edge_count()}"]
    lines.extend(f"e {i + 1} {j + 1}" for i, j in g.edges())
    return "\n".join(lines) + "\n"


def cliques_dimacs(cliques: Iterable[Sequence[int]]) -> str:
    """One `c clique ...` line per set (1-based), for comparing with external solvers."""
    return "".join("c clique " + " ".join(str(v + 1) for v in clique) + "\n" for clique in cliques)


def graph_json(g: PaleyGraph) -> str:
    width = (g.v + 3) // 4
    return _dumps({"q": g.q, "vertices": g.v, "edges": g.edge_count(),
                   "rows": [format(row, f"0{width}x") for row in g.adj]})


def eigenfunction_json(q: int, f: Eigenfunction) -> str:
    return _dumps({"q": q, "theta": str(f.theta), "support_size": len(f.support),
                   "values": {str(i): x for i, x in f.sparse().items()}})


def eigenfunction_csv(f: Eigenfunction) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["vertex", "value"])
    writer.writerows(enumerate(f.values))
    return buffer.getvalue()


def sets_json(q: int, sets: Sequence[Mapping[str, object]]) -> str:
    return _dumps({"q": q, "sets": list(sets)})


def sets_csv(sets: Sequence[Mapping[str, object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["label", "kind", "vertex"])
    for s in sets:
        for v in s["set"]:
            writer.writerow([s["label"], s["kind"], v])
    return buffer.getvalue()


def census_json(census: CliqueCensus) -> str:
    data = census.to_dict()
    return _dumps({key: data[key] for key in ("q", "histogram", "orbit_counts", "truncated")})


def field_json(ctx: QuadExtContext) -> str:
    return _dumps(field_tables(ctx))


def point_report_json(q: int, report: List[Dict[str, object]]) -> str:
    return _dumps({"q": q, "points": report})


def write_text(path: Union[str, Path], text: str) -> Path:
    path = Path(path)
    if path.parent != Path("."):
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")
    return path
