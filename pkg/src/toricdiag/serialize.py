"""JSON, Macaulay2 and plain-text renderings of complexes, tables and splitting types."""
from __future__ import annotations

import json
from fractions import Fraction

from .cohom import CohomologyTable
from .coxalg import Entry, FreeComplex, Generator, GradedFreeModule, LinearMatrix, RingSpec


def _coeff_out(c):
    if isinstance(c, Fraction):
        return int(c) if c.denominator == 1 else str(c)
    return int(c)


def _coeff_in(c):
    return Fraction(c) if isinstance(c, str) else int(c)


# -- FreeComplex ---------------------------------------------------------------

def ring_to_dict(ring: RingSpec) -> dict:
    return {"vars": list(ring.variable_names),
            "degrees": [list(d) for d in ring.degrees],
            "weight": list(ring.weight),
            "prime": ring.prime}


def ring_from_dict(d: dict) -> RingSpec:
    degs = tuple(tuple(x) for x in d["degrees"])
    weight = d.get("weight")
    if weight is None:
        # any functional positive on all degrees will do; try (1, N, 1, N, ...)
        g = len(degs[0])
        N = 1 + max(abs(x) for deg in degs for x in deg)
        weight = [1 if t % 2 == 0 else N for t in range(g)]
    return RingSpec(tuple(d["vars"]), degs, tuple(weight), d.get("prime"))


def complex_to_dict(c: FreeComplex) -> dict:
    return {
        "ring": ring_to_dict(c.ring),
        "terms": [[{"degree": list(g.degree), "label": g.label} for g in t.generators]
                  for t in c.terms],
        "diffs": [[{"row": e.row, "col": e.col, "coeff": _coeff_out(e.coeff), "var": e.var}
                   for e in D.entries] for D in c.diffs],
    }


def complex_from_dict(d: dict) -> FreeComplex:
    ring = ring_from_dict(d["ring"])
    terms = tuple(GradedFreeModule(tuple(Generator(tuple(g["degree"]), g["label"]) for g in t))
                  for t in d["terms"])
    diffs = tuple(
        LinearMatrix(terms[k].rank, terms[k + 1].rank,
                     tuple(Entry(e["row"], e["col"], _coeff_in(e["coeff"]), e["var"]) for e in D))
        for k, D in enumerate(d["diffs"]))
    return FreeComplex(ring, terms, diffs)


# -- CohomologyTable -------------------------------------------------------------

def table_to_dict(t: CohomologyTable) -> dict:
    rows = []
    for i in range(t.dim + 1):
        rows.append({"i": i, "entries": {f"{k},{l}": t.get(i, (k, l))
                                         for k, l in t.degrees() if t.get(i, (k, l))}})
    return {"window": [list(t.window[0]), list(t.window[1])], "dim": t.dim, "rows": rows}


def table_from_dict(d: dict) -> CohomologyTable:
    t = CohomologyTable((tuple(d["window"][0]), tuple(d["window"][1])), d["dim"])
    for row in d["rows"]:
        for key, v in row["entries"].items():
            k, l = (int(x) for x in key.split(","))
            if v:
                t.entries[(row["i"], (k, l))] = v
    return t


# -- SplittingType ------------------------------------------------------------------

def splitting_to_dict(st) -> dict:
    return {"parts": [{"twist": list(tw), "mult": m} for tw, m in st.parts]}


def splitting_from_dict(d: dict):
    from .applications import SplittingType
    return SplittingType(tuple((tuple(p["twist"]), p["mult"]) for p in d["parts"]))


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


# -- Macaulay2 ----------------------------------------------------------------------

def _m2_name(v: str) -> str:
    return v.replace("'", "p")


def complex_to_m2(c: FreeComplex, name: str = "C") -> str:
    ring = c.ring
    field = f"ZZ/{ring.prime}" if ring.prime else "QQ"
    names = [_m2_name(v) for v in ring.variable_names]
    degs = ", ".join("{" + ",".join(str(x) for x in d) + "}" for d in ring.degrees)
    lines = [f"S = {field}[{', '.join(names)}, Degrees => {{{degs}}}];"]
    for k, t in enumerate(c.terms):
        gens = ", ".join("{" + ",".join(str(x) for x in g.degree) + "}" for g in t.generators)
        lines.append(f"F{k} = S^{{{gens}}};" if t.rank else f"F{k} = S^0;")
    for k, D in enumerate(c.diffs, start=1):
        ents = []
        for e in D.entries:
            coeff = _coeff_out(e.coeff)
            val = str(coeff) if e.var is None else f"({coeff})*{names[e.var]}"
            ents.append(f"({e.row},{e.col}) => {val}")
        lines.append(f"d{k} = map(F{k - 1}, F{k}, {{{', '.join(ents)}}});")
    if c.diffs:
        maps = ", ".join(f"d{k}" for k in range(1, len(c.diffs) + 1))
        lines.append(f"{name} = chainComplex {{{maps}}};")
        lines.append(f"assert({name}.dd^2 == 0);")
        lines.append(f"assert(isHomogeneous {name});")
    return "\n".join(lines) + "\n"


# -- aligned text ---------------------------------------------------------------------

def _entry_text(e: Entry, names) -> str:
    c = e.coeff
    if e.var is None:
        return str(c)
    v = names[e.var]
    if c == 1:
        return v
    if c == -1:
        return "-" + v
    return f"{c}{v}"


def matrix_to_text(D: LinearMatrix, names, row_labels, col_labels) -> str:
    grid = [["." for _ in range(D.cols)] for _ in range(D.rows)]
    for e in D.entries:
        grid[e.row][e.col] = _entry_text(e, names)
    width = max([len(s) for row in grid for s in row] + [len(l) for l in col_labels] + [1])
    lw = max([len(l) for l in row_labels] + [0])
    out = [" " * lw + " | " + " ".join(l.rjust(width) for l in col_labels)]
    for lab, row in zip(row_labels, grid):
        out.append(lab.rjust(lw) + " | " + " ".join(s.rjust(width) for s in row))
    return "\n".join(out)


def complex_to_text(c: FreeComplex, max_cols: int = 40) -> str:
    names = c.ring.variable_names
    out = [f"ranks: {c.ranks()}"]
    for k, t in enumerate(c.terms):
        out.append(f"slot {k}:")
        for g in t.generators:
            out.append(f"  S({', '.join(str(x) for x in g.degree)})  {g.label}")
    for k, D in enumerate(c.diffs, start=1):
        out.append(f"d_{k}: {D.rows} x {D.cols}")
        if D.cols <= max_cols:
            out.append(matrix_to_text(D, names,
                                      [g.label for g in c.terms[k - 1].generators],
                                      [g.label for g in c.terms[k].generators]))
        else:
            out.append("  (matrix too wide to render; use --format json)")
    return "\n".join(out) + "\n"


def table_to_text(t: CohomologyTable) -> str:
    (k0, k1), (l0, l1) = t.window
    out = []
    for i in range(t.dim + 1):
        out.append(f"h^{i}  (rows l = {l1}..{l0}, columns k = {k0}..{k1})")
        cells = [[str(t.get(i, (k, l))) for k in range(k0, k1 + 1)] for l in range(l1, l0 - 1, -1)]
        width = max(len(s) for row in cells for s in row)
        for l, row in zip(range(l1, l0 - 1, -1), cells):
            out.append(f"{l:>4} | " + " ".join(s.rjust(width) for s in row))
        out.append("")
    return "\n".join(out)
