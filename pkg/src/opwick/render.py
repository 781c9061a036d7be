"""Text, JSON, and LaTeX rendering of polynomials and contraction data."""

from __future__ import annotations

from .algebra import OperatorPoly
from .contractions import ContractionMatrix
from .scalars import ScalarPoly, _gaussian_latex

__all__ = [
    "poly_to_text",
    "poly_to_json",
    "poly_to_latex",
    "contraction_to_json",
    "contraction_to_latex",
    "ORDER_LATEX",
]

ORDER_LATEX = {
    "normal": r"\mathcal{N}",
    "antinormal": r"\mathcal{A}",
    "weyl": r"\mathcal{W}",
    "time": r"\mathcal{T}",
}


def _symbol_latex(name: str) -> str:
    if name.endswith("†"):
        return f"{name[:-1]}^\\dagger"
    return name


def poly_to_text(p: OperatorPoly) -> str:
    return str(p)


def poly_to_json(p: OperatorPoly) -> dict:
    terms = []
    for word in sorted(p.terms, key=lambda w: (-len(w), [s.name for s in w])):
        terms.append(
            {
                "word": [s.name for s in word],
                "coeff": _scalar_json(p.terms[word]),
            }
        )
    return {"terms": terms}


def _scalar_json(s: ScalarPoly):
    out = []
    for mono, coeff in sorted(s.terms.items()):
        out.append(
            {
                "monomial": [[name, exp] for name, exp in mono],
                "value": coeff.to_string(),
            }
        )
    return out


def poly_to_latex(p: OperatorPoly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for word in sorted(p.terms, key=lambda w: (-len(w), [s.name for s in w])):
        coeff = p.terms[word]
        body = "\\,".join(_symbol_latex(s.name) for s in word)
        cs = coeff.to_latex()
        if body:
            if cs == "1":
                text = body
            elif cs == "-1":
                text = f"-{body}"
            else:
                needs_wrap = "+" in cs[1:] or ("-" in cs[1:] and "\\tfrac" not in cs)
                text = (f"\\left({cs}\\right)" if needs_wrap else cs) + "\\," + body
        else:
            text = cs
        parts.append(text)
    out = parts[0]
    for part in parts[1:]:
        out += part if part.startswith("-") else "+" + part
    return out


def ordering_latex(name: str) -> str:
    return ORDER_LATEX.get(name, f"\\mathcal{{{name[:1].upper()}}}")


def contraction_to_json(c: ContractionMatrix) -> dict:
    return {
        "symbols": c.names(),
        "parity": c.parity,
        "entries": [
            {"pair": [a, b], "value": _scalar_json(v)}
            for (a, b), v in sorted(c.entries.items())
        ],
    }


def contraction_to_latex(c: ContractionMatrix) -> str:
    names = c.names()
    header = " & ".join([""] + [_symbol_latex(n) for n in names])
    rows = []
    for a in names:
        cells = [_symbol_latex(a)]
        for b in names:
            cells.append(c.get(a, b).to_latex())
        rows.append(" & ".join(cells))
    body = " \\\\\n".join(rows)
    cols = "l" + "c" * len(names)
    return (
        f"\\begin{{array}}{{{cols}}}\n{header} \\\\\n{body}\n\\end{{array}}"
    )
