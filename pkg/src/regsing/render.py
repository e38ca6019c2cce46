"""Plain-text rendering of truncated series, grouped by power of x."""

from __future__ import annotations

from fractions import Fraction

from .exactalg import FieldElem, join_terms, signed_term


def power(var: str, e) -> str:
    """``var`` raised to ``e``; empty for e = 0, parenthesized when not an integer."""
    if e == 0:
        return ""
    if e == 1:
        return var
    if isinstance(e, Fraction) and e.denominator != 1:
        return f"{var}^({e})"
    return f"{var}^{e}"


def z_monomial(alpha: tuple[int, ...]) -> str:
    return "*".join(power(f"z{j + 1}", a) for j, a in enumerate(alpha) if a)


def _scalar_term(c) -> tuple[bool, str]:
    if isinstance(c, FieldElem):
        return signed_term(c, "")
    c = Fraction(c)
    return c < 0, str(abs(c))


def _product(coeff, factors: list[str]) -> tuple[bool, str]:
    negative, text = _scalar_term(coeff)
    mono = "*".join(f for f in factors if f)
    if not mono:
        return negative, text
    if text == "1":
        return negative, mono
    if " + " in text:
        text = f"({text})"
    return negative, f"{text}*{mono}"


def format_grouped(groups: list[tuple[str, list[tuple[object, str]]]], trunc_marker: bool) -> str:
    """Render ``[(x_factor, [(coeff, z_factor), ...]), ...]``.

    Each inner list is already sorted; a single entry prints as a plain
    product, several entries are factored as ``x_factor*(...)``.
    """
    parts = []
    for xf, entries in groups:
        if len(entries) == 1 or not xf:
            for coeff, zf in entries:
                parts.append(_product(coeff, [xf, zf]))
            continue
        inner = join_terms([_product(c, [zf]) for c, zf in entries])
        parts.append((False, f"{xf}*({inner})"))
    text = join_terms(parts)
    if trunc_marker:
        text += " + ..."
    return text
