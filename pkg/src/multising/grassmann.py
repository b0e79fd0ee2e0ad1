"""Exact Schur-calculus on Grassmannians and the line-in-subbundle fibration.

The cohomology of Gr_k(C^n) is modelled in the basis of Schur classes s_lam
indexed by partitions inside the k x (n-k) box, normalized so that the class
of a point (the full box) integrates to 1.  Products are computed by the
Jacobi-Trudi expansion of one factor into complete homogeneous slices followed
by iterated Pieri steps; partitions leaving the box are dropped as soon as
they appear, which is safe because containment only grows along a Pieri chain.

On top of the base ring the module models the projectivization of the
universal subbundle S for k = 3: classes are polynomials in the fiberwise
hyperplane class xi with Schur-class coefficients, kept in raw powers of xi.
The degree-three relation satisfied by xi, the Chern classes of the fiberwise
twist bundle kappa, and the pushforward rule xi^w -> c_{w-2}(Q) each carry a
sign ambiguity that the written sources do not pin down consistently, so all
three are grouped into named orientation settings.  Exactly one setting is
meant to survive the planar four-secant calibration; the others stay
available for the negative controls.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .poly import PolyError, Rat, rat, rat_str

Partition = Tuple[int, ...]


class RingMismatch(PolyError):
    """Raised when classes from different Grassmannians are combined."""


@dataclass(frozen=True)
class GrassRing:
    """The Grassmannian of k-planes in C^n."""

    k: int
    n: int

    def __post_init__(self) -> None:
        if not 0 < self.k < self.n:
            raise PolyError(f"need 0 < k < n, got k={self.k}, n={self.n}")

    @property
    def cols(self) -> int:
        return self.n - self.k

    @property
    def dim(self) -> int:
        return self.k * (self.n - self.k)

    @property
    def box(self) -> Partition:
        return (self.cols,) * self.k

    def contains(self, lam: Partition) -> bool:
        return len(lam) <= self.k and (not lam or lam[0] <= self.cols)

    def partitions(self, degree: Optional[int] = None) -> Iterator[Partition]:
        """All box partitions, or only those of the given degree."""
        for lam in _box_partitions(self.k, self.cols):
            if degree is None or sum(lam) == degree:
                yield lam

    def dual(self, lam: Partition) -> Partition:
        if not self.contains(lam):
            raise PolyError(f"partition {lam} outside the {self.k}x{self.cols} box")
        padded = tuple(lam) + (0,) * (self.k - len(lam))
        return _strip_zeros(tuple(self.cols - p for p in reversed(padded)))


def _strip_zeros(lam: Sequence[int]) -> Partition:
    out = tuple(lam)
    while out and out[-1] == 0:
        out = out[:-1]
    return out


def _validate_partition(lam: Sequence[int]) -> Partition:
    parts = tuple(int(p) for p in lam)
    if any(p < 0 for p in parts):
        raise PolyError(f"negative part in partition {parts}")
    if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise PolyError(f"partition parts must be weakly decreasing: {parts}")
    return _strip_zeros(parts)


@lru_cache(maxsize=None)
def _box_partitions(rows: int, cols: int) -> Tuple[Partition, ...]:
    acc: List[Partition] = []

    def grow(prefix: List[int], bound: int, depth: int) -> None:
        acc.append(_strip_zeros(tuple(prefix)))
        if depth == rows:
            return
        for part in range(bound, 0, -1):
            prefix.append(part)
            grow(prefix, part, depth + 1)
            prefix.pop()

    grow([], cols, 0)
    return tuple(dict.fromkeys(acc))


class GrassClass:
    """A cohomology class on a Grassmannian in the boxed Schur basis."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: GrassRing, coeffs: Mapping[Sequence[int], object]):
        clean: Dict[Partition, Rat] = {}
        for raw, value in coeffs.items():
            lam = _validate_partition(raw)
            if not ring.contains(lam):
                continue  # zero in the boxed quotient
            c = rat(value)
            if c == 0:
                continue
            clean[lam] = clean.get(lam, rat(0)) + c
            if clean[lam] == 0:
                del clean[lam]
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name: str, value) -> None:
        raise AttributeError("GrassClass is immutable")

    # -- inspection --

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, lam: Sequence[int]) -> Rat:
        return self.coeffs.get(_validate_partition(lam), rat(0))

    def degree(self) -> Optional[int]:
        if not self.coeffs:
            return None
        degrees = {sum(lam) for lam in self.coeffs}
        if len(degrees) > 1:
            raise PolyError("class is not homogeneous")
        return degrees.pop()

    def is_homogeneous(self) -> bool:
        return len({sum(lam) for lam in self.coeffs}) <= 1

    def homogeneous_part(self, d: int) -> "GrassClass":
        return GrassClass(
            self.ring, {lam: c for lam, c in self.coeffs.items() if sum(lam) == d}
        )

    def integrate(self) -> Rat:
        return self.coeffs.get(self.ring.box, rat(0))

    # -- arithmetic --

    def _coerce(self, other) -> Optional["GrassClass"]:
        if isinstance(other, GrassClass):
            if other.ring != self.ring:
                raise RingMismatch("classes live on different Grassmannians")
            return other
        if isinstance(other, (int, Rat)) or type(other).__name__ == "mpq":
            return GrassClass(self.ring, {(): rat(other)})
        return None

    def __add__(self, other) -> "GrassClass":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        merged = dict(self.coeffs)
        for lam, c in rhs.coeffs.items():
            merged[lam] = merged.get(lam, rat(0)) + c
        return GrassClass(self.ring, merged)

    __radd__ = __add__

    def __neg__(self) -> "GrassClass":
        return GrassClass(self.ring, {lam: -c for lam, c in self.coeffs.items()})

    def __sub__(self, other) -> "GrassClass":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other) -> "GrassClass":
        return -(self - other)

    def __mul__(self, other) -> "GrassClass":
        if isinstance(other, GrassClass):
            return class_mul(self, other)
        if isinstance(other, (int, Rat)) or type(other).__name__ == "mpq":
            c = rat(other)
            return GrassClass(
                self.ring, {lam: c * v for lam, v in self.coeffs.items()}
            )
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "GrassClass":
        if exponent < 0:
            raise PolyError("negative powers are not defined")
        out = schur(self.ring, ())
        base = self
        e = exponent
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    def __eq__(self, other) -> bool:
        try:
            rhs = self._coerce(other)
        except RingMismatch:
            return False
        if rhs is None:
            return NotImplemented
        return self.coeffs == rhs.coeffs

    def __hash__(self) -> int:
        return hash((self.ring, tuple(sorted(self.coeffs.items()))))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        bits = []
        for lam in sorted(self.coeffs, key=lambda p: (sum(p), p)):
            c = self.coeffs[lam]
            name = "s" + "".join(str(p) for p in lam) if lam else "1"
            bits.append(name if c == 1 else f"{rat_str(c)}*{name}")
        return " + ".join(bits)

    # -- serialization --

    def to_json_list(self) -> List[dict]:
        return [
            {"partition": list(lam), "coeff": rat_str(c)}
            for lam, c in sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        ]


def schur(ring: GrassRing, lam: Sequence[int]) -> GrassClass:
    """The Schur basis class s_lam (zero if lam leaves the box)."""
    return GrassClass(ring, {tuple(lam): 1})


def class_from_json(ring: GrassRing, payload: Iterable[Mapping]) -> GrassClass:
    coeffs: Dict[Partition, Rat] = {}
    for entry in payload:
        lam = _validate_partition(entry["partition"])
        coeffs[lam] = coeffs.get(lam, rat(0)) + rat(entry["coeff"])
    return GrassClass(ring, coeffs)


# -- products ------------------------------------------------------------------


def _pieri(lam: Partition, strip: int, rows: int, cols: int) -> Tuple[Partition, ...]:
    """Partitions in the box obtained from lam by adding a horizontal strip."""
    padded = list(lam) + [0] * (rows - len(lam))
    results: List[Partition] = []

    # interlacing: nu_i >= lam_i and nu_{i+1} <= lam_i keeps the strip horizontal
    def place(i: int, remaining: int, bound: int, acc: List[int]) -> None:
        if i == rows:
            if remaining == 0:
                results.append(_strip_zeros(tuple(acc)))
            return
        old = padded[i]
        upper = min(cols, bound, old + remaining)
        for new in range(old, upper + 1):
            acc.append(new)
            place(i + 1, remaining - (new - old), old, acc)
            acc.pop()

    place(0, strip, cols, [])
    return tuple(results)


@lru_cache(maxsize=None)
def _mul_basis(k: int, n: int, lam: Partition, mu: Partition) -> Tuple[Tuple[Partition, int], ...]:
    """Boxed expansion of s_lam * s_mu with integer multiplicities."""
    if len(mu) > len(lam):
        lam, mu = mu, lam
    rows, cols = k, n - k
    if not mu:
        return ((lam, 1),)
    m = len(mu)
    acc: Dict[Partition, int] = {}
    for sigma in itertools.permutations(range(m)):
        sign = _permutation_sign(sigma)
        strips = [mu[i] - i + sigma[i] for i in range(m)]
        if any(s < 0 for s in strips):
            continue
        frontier: Dict[Partition, int] = {lam: sign}
        for strip in strips:
            if strip == 0:
                continue
            grown: Dict[Partition, int] = {}
            for base, mult in frontier.items():
                for nu in _pieri(base, strip, rows, cols):
                    grown[nu] = grown.get(nu, 0) + mult
            frontier = grown
            if not frontier:
                break
        for nu, mult in frontier.items():
            acc[nu] = acc.get(nu, 0) + mult
    return tuple(sorted((nu, m_) for nu, m_ in acc.items() if m_))


def _permutation_sign(sigma: Sequence[int]) -> int:
    sign = 1
    for i in range(len(sigma)):
        for j in range(i + 1, len(sigma)):
            if sigma[i] > sigma[j]:
                sign = -sign
    return sign


def class_mul(x: GrassClass, y: GrassClass) -> GrassClass:
    if x.ring != y.ring:
        raise RingMismatch("classes live on different Grassmannians")
    ring = x.ring
    out: Dict[Partition, Rat] = {}
    for lam, a in x.coeffs.items():
        for mu, b in y.coeffs.items():
            scale = a * b
            for nu, mult in _mul_basis(ring.k, ring.n, lam, mu):
                out[nu] = out.get(nu, rat(0)) + scale * mult
    return GrassClass(ring, out)


def integrate(x: GrassClass) -> Rat:
    """Evaluation against the fundamental class: the full-box coefficient."""
    return x.integrate()


# -- tautological bundles ----------------------------------------------------------


def chern_Q(ring: GrassRing, i: int) -> GrassClass:
    """c_i of the universal quotient bundle: the one-row Schur class."""
    if not 0 <= i <= ring.cols:
        raise PolyError(f"c_{i}(Q) out of range for rank {ring.cols}")
    return schur(ring, (i,) if i else ())


def chern_S(ring: GrassRing, i: int) -> GrassClass:
    """c_i of the universal subbundle: a signed one-column Schur class."""
    if not 0 <= i <= ring.k:
        raise PolyError(f"c_{i}(S) out of range for rank {ring.k}")
    return GrassClass(ring, {(1,) * i: (-1) ** i})


# -- the fibration of lines in S -----------------------------------------------------


@dataclass(frozen=True)
class Orientation:
    """One self-consistent choice of signs for the xi-calculus.

    relation_signs = (s2, s1, s0) encodes xi^3 = s2*c1(S)xi^2 + s1*c2(S)xi
    + s0*c3(S) (Chern classes pulled back from the base); push_sign**w scales
    the pushforward of xi^w.
    """

    name: str
    kappa_xi_sign: int
    push_sign: int
    relation_signs: Tuple[int, int, int]


TAUTOLOGICAL_LINE = Orientation("tautological-line", -1, +1, (1, -1, 1))
SIGNED_PUSH = Orientation("signed-push", -1, -1, (1, -1, 1))
DUAL_LINE = Orientation("dual-line", +1, +1, (-1, -1, -1))

ORIENTATIONS: Dict[str, Orientation] = {
    o.name: o for o in (TAUTOLOGICAL_LINE, SIGNED_PUSH, DUAL_LINE)
}


class FiberClass:
    """A polynomial in the fiberwise hyperplane class xi over a Grassmannian.

    Powers of xi are kept raw; reduce() rewrites into xi-degree < 3 using the
    relation of a chosen orientation.
    """

    __slots__ = ("ring", "parts")

    def __init__(self, ring: GrassRing, parts: Mapping[int, GrassClass]):
        clean: Dict[int, GrassClass] = {}
        for w, g in parts.items():
            if w < 0:
                raise PolyError("negative xi-powers are not defined")
            if g.ring != ring:
                raise RingMismatch("coefficient lives on a different Grassmannian")
            if not g.is_zero():
                clean[int(w)] = g
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "parts", clean)

    def __setattr__(self, name: str, value) -> None:
        raise AttributeError("FiberClass is immutable")

    @staticmethod
    def lift(g: GrassClass) -> "FiberClass":
        """Pullback of a base class to the fibration."""
        return FiberClass(g.ring, {0: g})

    @staticmethod
    def xi(ring: GrassRing, power: int = 1) -> "FiberClass":
        return FiberClass(ring, {power: schur(ring, ())})

    def is_zero(self) -> bool:
        return not self.parts

    def xi_degree(self) -> Optional[int]:
        return max(self.parts) if self.parts else None

    def coefficient(self, w: int) -> GrassClass:
        return self.parts.get(w, GrassClass(self.ring, {}))

    def _coerce(self, other) -> Optional["FiberClass"]:
        if isinstance(other, FiberClass):
            if other.ring != self.ring:
                raise RingMismatch("classes live on different fibrations")
            return other
        if isinstance(other, GrassClass):
            return FiberClass.lift(other)
        if isinstance(other, (int, Rat)) or type(other).__name__ == "mpq":
            return FiberClass(self.ring, {0: GrassClass(self.ring, {(): rat(other)})})
        return None

    def __add__(self, other) -> "FiberClass":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        merged = dict(self.parts)
        for w, g in rhs.parts.items():
            merged[w] = merged.get(w, GrassClass(self.ring, {})) + g
        return FiberClass(self.ring, merged)

    __radd__ = __add__

    def __neg__(self) -> "FiberClass":
        return FiberClass(self.ring, {w: -g for w, g in self.parts.items()})

    def __sub__(self, other) -> "FiberClass":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other) -> "FiberClass":
        return -(self - other)

    def __mul__(self, other) -> "FiberClass":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out: Dict[int, GrassClass] = {}
        for w1, g1 in self.parts.items():
            for w2, g2 in rhs.parts.items():
                w = w1 + w2
                out[w] = out.get(w, GrassClass(self.ring, {})) + g1 * g2
        return FiberClass(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "FiberClass":
        if exponent < 0:
            raise PolyError("negative powers are not defined")
        out = FiberClass(self.ring, {0: schur(self.ring, ())})
        for _ in range(exponent):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        try:
            rhs = self._coerce(other)
        except RingMismatch:
            return False
        if rhs is None:
            return NotImplemented
        return self.parts == rhs.parts

    def __repr__(self) -> str:
        if not self.parts:
            return "0"
        bits = []
        for w in sorted(self.parts):
            head = "1" if w == 0 else ("xi" if w == 1 else f"xi^{w}")
            bits.append(f"({self.parts[w]!r})*{head}" if w else f"({self.parts[w]!r})")
        return " + ".join(bits)

    def reduce(self, orientation: Orientation) -> "FiberClass":
        """Rewrite into xi-degree < 3 using the orientation's cubic relation."""
        if self.ring.k != 3:
            raise PolyError("the cubic relation needs k = 3")
        s2, s1, s0 = orientation.relation_signs
        c1 = chern_S(self.ring, 1)
        c2 = chern_S(self.ring, 2)
        c3 = chern_S(self.ring, 3)
        parts = dict(self.parts)
        while parts:
            top = max(parts)
            if top < 3:
                break
            g = parts.pop(top)
            for shift, cls, sign in ((1, c1, s2), (2, c2, s1), (3, c3, s0)):
                w = top - shift
                add = g * cls * sign
                parts[w] = parts.get(w, GrassClass(self.ring, {})) + add
                if parts[w].is_zero():
                    del parts[w]
        return FiberClass(self.ring, parts)


def pushforward_P_S(
    x: FiberClass, orientation: Orientation = TAUTOLOGICAL_LINE
) -> GrassClass:
    """Integrate over the fibers: xi^w contributes c_{w-2}(Q) times its sign."""
    ring = x.ring
    out = GrassClass(ring, {})
    for w, g in x.parts.items():
        i = w - 2
        if i < 0 or i > ring.cols:
            continue
        out = out + g * chern_Q(ring, i) * (orientation.push_sign ** w)
    return out


def kappa_chern(
    ring: GrassRing, orientation: Orientation = TAUTOLOGICAL_LINE
) -> Tuple[FiberClass, FiberClass]:
    """Chern classes of the rank-two fiberwise twist bundle (k = 3 only)."""
    if ring.k != 3:
        raise PolyError("the fiberwise twist bundle needs k = 3")
    s = orientation.kappa_xi_sign
    xi = FiberClass.xi(ring)
    c1 = FiberClass.lift(chern_S(ring, 1))
    c2 = FiberClass.lift(chern_S(ring, 2))
    k1 = c1 + 3 * s * xi
    k2 = c2 + 2 * s * (xi * c1) + 3 * (xi * xi)
    return k1, k2
