"""JSON documents for solution bases.

Coefficients and exponents are kept as exact strings (``"-3/2"``,
``"2*w + 1"``), so a document survives a JSON round trip unchanged and
can be turned back into series objects with :meth:`SolutionDoc.series`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .exactalg import FieldDesc
from .frobenius0 import LogSeries, SolutionBasis
from .frobeniusp import SectorSeries
from .parser import parse_field_element


@dataclass(frozen=True)
class MonomialRecord:
    k: int
    alpha: tuple[int, ...]
    coeff: str


@dataclass(frozen=True)
class SolutionRecord:
    """One solution y_{rho,i}.

    ``base`` is the exponent the offsets ``k`` are measured from: the
    smallest exponent of the integer class in characteristic 0, the sector
    exponent itself in characteristic p.
    """

    rho: str
    base: str
    i: int
    trunc: int | None
    monomials: tuple[MonomialRecord, ...]


def field_to_json(desc: FieldDesc) -> dict:
    return {
        "characteristic": desc.characteristic,
        "ext_degree": desc.ext_degree,
        "modulus": list(desc.modulus) if desc.modulus else None,
    }


def field_from_json(d: dict) -> FieldDesc:
    mod = d.get("modulus")
    return FieldDesc(d["characteristic"], d.get("ext_degree", 1), tuple(mod) if mod else None)


def monomials_to_json(coeffs: dict, log: bool) -> list[dict]:
    """{(k, i): c} (log=True, characteristic 0) or {(k, alpha): c} as monomial records."""
    out = []
    for (k, a), c in sorted(coeffs.items()):
        alpha = ([a] if a else []) if log else list(a)
        out.append({"k": k, "alpha": alpha, "coeff": str(c)})
    return out


def _record(sol) -> SolutionRecord:
    s = sol.series
    if isinstance(s, LogSeries):
        mons = tuple(
            MonomialRecord(k, (i,) if i else (), str(c))
            for (k, i), c in sorted(s.coeffs.items())
        )
        return SolutionRecord(str(sol.rho), str(s.base), sol.i, s.trunc, mons)
    mons = tuple(
        MonomialRecord(k, tuple(alpha), str(c))
        for (k, alpha), c in sorted(s.coeffs.items())
    )
    return SolutionRecord(str(sol.rho), str(s.rho), sol.i, s.trunc, mons)


@dataclass(frozen=True)
class SolutionDoc:
    operator: str
    field: FieldDesc
    solutions: tuple[SolutionRecord, ...]

    @classmethod
    def from_basis(cls, operator: str, basis: SolutionBasis | list) -> SolutionDoc:
        sols = tuple(basis)
        desc = basis.desc if isinstance(basis, SolutionBasis) else sols[0].series.desc
        return cls(operator, desc, tuple(_record(s) for s in sols))

    def to_dict(self) -> dict:
        return {
            "operator": self.operator,
            "field": field_to_json(self.field),
            "solutions": [
                {
                    "rho": r.rho,
                    "base": r.base,
                    "i": r.i,
                    "trunc": r.trunc,
                    "monomials": [{"k": m.k, "alpha": list(m.alpha), "coeff": m.coeff} for m in r.monomials],
                }
                for r in self.solutions
            ],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> SolutionDoc:
        d = json.loads(text)
        sols = tuple(
            SolutionRecord(
                r["rho"],
                r["base"],
                r["i"],
                r["trunc"],
                tuple(MonomialRecord(m["k"], tuple(m["alpha"]), m["coeff"]) for m in r["monomials"]),
            )
            for r in d["solutions"]
        )
        return cls(d["operator"], field_from_json(d["field"]), sols)

    def series(self) -> list:
        """Rebuild the series objects (LogSeries over Q, SectorSeries over F_q)."""
        out = []
        for r in self.solutions:
            if self.field.characteristic == 0:
                coeffs = {(m.k, m.alpha[0] if m.alpha else 0): Fraction(m.coeff) for m in r.monomials}
                out.append(LogSeries(Fraction(r.base), coeffs, r.trunc))
            else:
                rho = parse_field_element(r.base, self.field)
                coeffs = {(m.k, m.alpha): parse_field_element(m.coeff, self.field) for m in r.monomials}
                out.append(SectorSeries(rho, coeffs, r.trunc))
        return out
