"""Multisingularity combinatorics: codimension, automorphisms, expansions.

A multisingularity is a multiset of singularity names with a distinguished
first element.  Two formal expansions drive everything downstream:

  * the target class n of a multisingularity expands recursively into
    products of residue symbols S over sub-multisets (one product per set
    partition of the points);
  * the source class m expands into residue polynomials R times pullbacks
    f*(n) of target classes of complements, one term per subset of the
    points containing the distinguished one.

Reduced (barred) classes divide by the automorphism counts; the source
expansions are stated internally in barred form with exact rational
prefactors and converted at the boundary.  The A_0^r specialization of the
target expansion supplies the coefficient pattern of the secant-plane
integrand, so its coefficients are computed here, never hard-coded there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Optional, Sequence, Tuple

from .poly import GradedPoly, PolyError, Rat, constant, one, rat, to_latex, to_text
from .thom import (
    ThomSeries,
    multisingularity_codim,
    parse_multisingularity,
    residue_A0A1,
    residue_A0r,
    residue_III22,
    residue_III22A0,
    singularity_info,
)


class MissingResidue(PolyError):
    """A required residue polynomial is not present in the table."""


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _multiset_aut(names: Sequence[str]) -> int:
    counts: Dict[str, int] = {}
    for name in names:
        counts[name] = counts.get(name, 0) + 1
    out = 1
    for k in counts.values():
        out *= _factorial(k)
    return out


@dataclass(frozen=True)
class MultiSingularity:
    """Multiset of singularity names, distinguished element first."""

    parts: Tuple[str, ...]

    def __post_init__(self):
        if not self.parts:
            raise PolyError("a multisingularity must be nonempty")
        canonical = (self.parts[0],) + tuple(sorted(self.parts[1:]))
        object.__setattr__(self, "parts", canonical)
        for name in self.parts:
            singularity_info(name)

    @classmethod
    def from_name(cls, text: str) -> "MultiSingularity":
        return cls(parse_multisingularity(text))

    @property
    def size(self) -> int:
        return len(self.parts)

    def codim(self, ell: int) -> int:
        return multisingularity_codim(self.parts, ell)

    def aut_count(self) -> int:
        return _multiset_aut(self.parts)

    def rest_aut_count(self) -> int:
        """Automorphisms fixing the distinguished element."""
        return _multiset_aut(self.parts[1:])

    def label(self) -> str:
        return "".join(self.parts)


def codim(multi: MultiSingularity, ell: int) -> int:
    return multi.codim(ell)


def aut_count(multi: MultiSingularity) -> int:
    return multi.aut_count()


# -- target-class expansion into S symbols ---------------------------------------

# A FormalExpansion maps monomials to rational coefficients; a monomial is a
# sorted tuple of S-symbol labels, each label a sorted tuple of names.
FormalExpansion = Dict[Tuple[Tuple[str, ...], ...], Rat]

_EXPAND_N_MEMO: Dict[Tuple[str, ...], FormalExpansion] = {}


def _expansion_product(a: FormalExpansion, b: FormalExpansion) -> FormalExpansion:
    out: FormalExpansion = {}
    for mono_a, ca in a.items():
        for mono_b, cb in b.items():
            key = tuple(sorted(mono_a + mono_b))
            out[key] = out.get(key, rat(0)) + ca * cb
    return {k: c for k, c in out.items() if c != 0}


def expand_n(multi: MultiSingularity) -> FormalExpansion:
    """Target class as a polynomial in residue symbols S_{sub-multiset}.

    One term per set partition of the points; with identical entries the
    terms merge into the familiar coefficients, e.g. for four ordinary
    points s_4 + 4 s_1 s_3 + 6 s_1^2 s_2 + 3 s_2^2 + s_1^4.
    """
    tokens = multi.parts
    key = tuple(sorted(tokens))
    cached = _EXPAND_N_MEMO.get(key)
    if cached is not None:
        return dict(cached)
    r = len(tokens)
    result: FormalExpansion = {(key,): rat(1)}
    if r > 1:
        rest_positions = list(range(1, r))
        for mask in range(2 ** (r - 1) - 1):
            picked = [0] + [
                p for i, p in enumerate(rest_positions) if mask >> i & 1
            ]
            complement = [p for p in rest_positions if p not in picked]
            s_label = tuple(sorted(tokens[p] for p in picked))
            sub = expand_n(MultiSingularity(tuple(tokens[p] for p in complement)))
            for mono, c in _expansion_product({(s_label,): rat(1)}, sub).items():
                result[mono] = result.get(mono, rat(0)) + c
    result = {k: c for k, c in result.items() if c != 0}
    _EXPAND_N_MEMO[key] = dict(result)
    return result


def a0_partition_coefficients(r: int) -> Dict[Tuple[int, ...], Rat]:
    """expand_n of r ordinary points, keyed by the sorted block-size partition."""
    expansion = expand_n(MultiSingularity(("A0",) * r))
    out: Dict[Tuple[int, ...], Rat] = {}
    for mono, coeff in expansion.items():
        sizes = tuple(sorted(len(label) for label in mono))
        out[sizes] = out.get(sizes, rat(0)) + coeff
    return out


# -- residue tables ------------------------------------------------------------------


class ResidueTable:
    """Map from a sorted multisingularity label to a residue generator.

    Residue polynomials do not depend on which element is distinguished, so
    lookups canonicalize to the sorted multiset.
    """

    def __init__(self, generators: Mapping[Tuple[str, ...], Callable[[int], GradedPoly]]):
        self._generators = {tuple(sorted(k)): v for k, v in generators.items()}

    def residue(self, parts: Sequence[str], ell: int) -> GradedPoly:
        key = tuple(sorted(parts))
        gen = self._generators.get(key)
        if gen is None:
            raise MissingResidue(f"no residue entry for {''.join(key)}")
        return gen(ell)

    def has(self, parts: Sequence[str]) -> bool:
        return tuple(sorted(parts)) in self._generators


def default_residue_table(
    extra_series: Optional[Mapping[int, ThomSeries]] = None,
) -> ResidueTable:
    """Built-in residues: single point, A_0^r for r = 2..4, A_0A_1,
    III_{2,2} and III_{2,2}A_0; extra_series adds A_0^r for r = 5..7."""
    generators: Dict[Tuple[str, ...], Callable[[int], GradedPoly]] = {
        ("A0",): lambda ell: one(),
        ("A0", "A0"): lambda ell: residue_A0r(2, ell),
        ("A0",) * 3: lambda ell: residue_A0r(3, ell),
        ("A0",) * 4: lambda ell: residue_A0r(4, ell),
        ("A0", "A1"): residue_A0A1,
        ("III22",): residue_III22,
        ("A0", "III22"): residue_III22A0,
    }
    if extra_series:
        for r, series in extra_series.items():
            generators[("A0",) * r] = (
                lambda ell, r=r, s=series: residue_A0r(r, ell, series=s)
            )
    return ResidueTable(generators)


# -- source-class expansion with resolved residues -------------------------------------


@dataclass(frozen=True)
class SourceTerm:
    """One term R * f*(n_complement) of a source-class expansion.

    complement is the sorted label of the pulled-back target class; the
    empty tuple marks the pure residue term.  fn_degree is the degree
    assigned to the pullback symbol in the homogeneity bookkeeping.
    """

    coefficient: GradedPoly
    complement: Tuple[str, ...]
    barred: bool

    def fn_degree(self, ell: int) -> int:
        if not self.complement:
            return 0
        return len(self.complement) * ell + sum(
            singularity_info(t).codim(ell) for t in self.complement
        )


@dataclass(frozen=True)
class SourceExpansion:
    multi: MultiSingularity
    ell: int
    barred: bool
    terms: Tuple[SourceTerm, ...]

    def coefficient_of(self, complement: Sequence[str]) -> GradedPoly:
        key = tuple(sorted(complement))
        for term in self.terms:
            if term.complement == key:
                return term.coefficient
        return constant(0)

    def to_latex(self) -> str:
        return _render_source(self, to_latex, latex=True)

    def to_text(self) -> str:
        return _render_source(self, to_text, latex=False)


def expand_m(
    multi: MultiSingularity,
    ell: int,
    table: Optional[ResidueTable] = None,
    barred: bool = True,
) -> SourceExpansion:
    """Source class of a multisingularity with residues resolved.

    Unbarred form: m = R + sum over proper subsets J containing the
    distinguished point of R_J f*(n_complement); exactly 2^(r-1) terms
    before merging.  Barred form divides by the automorphisms fixing the
    distinguished point and rewrites pullbacks in reduced classes.
    """
    if table is None:
        table = default_residue_table()
    tokens = multi.parts
    r = len(tokens)
    merged: Dict[Tuple[str, ...], GradedPoly] = {}
    rest = list(range(1, r))
    for mask in range(2 ** (r - 1)):
        picked = [0] + [p for i, p in enumerate(rest) if mask >> i & 1]
        complement = tuple(
            sorted(tokens[p] for p in rest if p not in picked)
        )
        residue_poly = table.residue([tokens[p] for p in picked], ell)
        if complement in merged:
            merged[complement] = merged[complement] + residue_poly
        else:
            merged[complement] = residue_poly
    if barred:
        scale = rat(1, multi.rest_aut_count())
        merged = {
            comp: poly * (scale * _multiset_aut(comp))
            for comp, poly in merged.items()
        }
    terms = tuple(
        SourceTerm(coefficient=poly, complement=comp, barred=barred)
        for comp, poly in sorted(
            merged.items(), key=lambda kv: (-len(kv[0]), kv[0])
        )
    )
    return SourceExpansion(multi=multi, ell=ell, barred=barred, terms=terms)


def emit_quadruple_formula(ell: int, table: Optional[ResidueTable] = None) -> SourceExpansion:
    """The general quadruple point formula at relative dimension ell.

    m_4 = f*(n_3) - 3 c_ell f*(n_2) + 3 R_{A_0^3} f*(n_1) + R_{A_0^4},
    in unreduced classes (m_4 = 3! reduced).
    """
    if ell < 1:
        raise PolyError("the quadruple point formula needs ell >= 1")
    return expand_m(
        MultiSingularity(("A0",) * 4), ell, table=table, barred=False
    )


# -- rendering ----------------------------------------------------------------------


_TOKEN_LATEX = {"A0": "A_0", "A1": "A_1", "A2": "A_2", "A3": "A_3",
                "III22": "III_{2,2}", "I22": "I_{2,2}"}


def _sym_latex(label: Tuple[str, ...]) -> str:
    if all(t == "A0" for t in label):
        return f"s_{len(label)}"
    inner = "".join(_TOKEN_LATEX.get(t, t) for t in label)
    return f"S_{{{inner}}}"


def _sym_text(label: Tuple[str, ...]) -> str:
    if all(t == "A0" for t in label):
        return f"s{len(label)}"
    return "S[" + ",".join(label) + "]"


def expansion_to_latex(expansion: FormalExpansion) -> str:
    return _render_expansion(expansion, _sym_latex, "^")


def expansion_to_text(expansion: FormalExpansion) -> str:
    return _render_expansion(expansion, _sym_text, "^")


def _render_expansion(expansion, namer, power_mark) -> str:
    if not expansion:
        return "0"
    items = sorted(
        expansion.items(), key=lambda kv: (len(kv[0]), kv[0])
    )
    pieces = []
    for mono, coeff in items:
        powers: Dict[Tuple[str, ...], int] = {}
        for label in mono:
            powers[label] = powers.get(label, 0) + 1
        body = "".join(
            namer(label) + (f"{power_mark}{e}" if e > 1 else "")
            for label, e in sorted(powers.items(), key=lambda kv: len(kv[0]))
        )
        num, den = coeff.numerator, coeff.denominator
        sign = "-" if num < 0 else "+"
        mag = -num if num < 0 else num
        mag_s = "" if (mag == 1 and den == 1) else (
            str(mag) if den == 1 else f"{mag}/{den}"
        )
        pieces.append((sign, f"{mag_s}{body}"))
    first_sign, first = pieces[0]
    out = first if first_sign == "+" else f"-{first}"
    for sign, piece in pieces[1:]:
        out += f" {sign} {piece}"
    return out


def _render_source(expansion: SourceExpansion, poly_renderer, latex: bool) -> str:
    pieces = []
    bar = r"\bar n" if latex else "nbar"
    for term in expansion.terms:
        coeff = poly_renderer(term.coefficient)
        if term.complement:
            k = len(term.complement)
            if all(t == "A0" for t in term.complement):
                sub = str(k) if not latex else str(k)
            else:
                sub = (
                    "".join(_TOKEN_LATEX.get(t, t) for t in term.complement)
                    if latex
                    else ",".join(term.complement)
                )
            if expansion.barred:
                fn = (
                    rf"f^*({bar}_{{{sub}}})" if latex else f"f^(nbar_{sub})"
                )
            else:
                fn = rf"f^*(n_{{{sub}}})" if latex else f"f^(n_{sub})"
            if coeff == "1":
                pieces.append(fn)
            else:
                pieces.append(f"({coeff}){fn}")
        else:
            wrap = " " in coeff or coeff.startswith("-")
            pieces.append(f"({coeff})" if wrap else coeff)
    return " + ".join(pieces)


def source_expansion_json(expansion: SourceExpansion) -> dict:
    from .poly import to_json_dict

    return {
        "multisingularity": expansion.multi.label(),
        "ell": expansion.ell,
        "barred": expansion.barred,
        "terms": [
            {
                "pullback": list(term.complement) or None,
                "coefficient": to_json_dict(term.coefficient),
            }
            for term in expansion.terms
        ],
    }


def expansion_json(expansion: FormalExpansion) -> dict:
    items = sorted(expansion.items(), key=lambda kv: (len(kv[0]), kv[0]))
    return {
        "terms": [
            {
                "symbols": [list(label) for label in mono],
                "coeff": f"{c.numerator}/{c.denominator}",
            }
            for mono, c in items
        ]
    }
