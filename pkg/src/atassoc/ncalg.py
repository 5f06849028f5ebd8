"""Truncated free associative algebra on the letters A, B.

Words are plain strings over "AB"; the empty string is the unit.  Series
are sparse word->scalar maps with a hard truncation degree.  Three scalar
kinds are supported:

* ``exact``    -- ``fractions.Fraction``
* ``floaterr`` -- :class:`FloatErr`, a float with a worst-case error bound
* ``formal``   -- any object with ring operations and ``is_zero`` (used by
  :mod:`atassoc.transport` for iterated-integral symbols)

Values are never mutated after construction, so series can be shared
freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb as binom
from typing import Iterable, Union

ALPHABET = "AB"

Word = str

BracketTree = Union[str, tuple]  # "A" | "B" | (left, right)


def degree(w: Word) -> int:
    return len(w)


def depth(w: Word) -> int:
    """Number of B letters."""
    return w.count("B")


def check_word(w: Word) -> Word:
    if any(c not in ALPHABET for c in w):
        raise ValueError(f"not a word over A/B: {w!r}")
    return w


@dataclass(frozen=True)
class FloatErr:
    """Float with a nonnegative worst-case error bound.

    Propagation is first-order interval style: an upper bound on the
    error, not a statistical confidence interval.
    """

    value: float
    err: float = 0.0

    def __post_init__(self):
        if self.err < 0:
            raise ValueError("negative error bound")

    def __add__(self, other):
        other = _as_floaterr(other)
        return FloatErr(self.value + other.value, self.err + other.err)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_floaterr(other)
        return FloatErr(self.value - other.value, self.err + other.err)

    def __neg__(self):
        return FloatErr(-self.value, self.err)

    def __mul__(self, other):
        if isinstance(other, (int, float, Fraction)):
            c = float(other)
            return FloatErr(self.value * c, self.err * abs(c))
        if isinstance(other, FloatErr):
            a, ea, b, eb = self.value, self.err, other.value, other.err
            return FloatErr(a * b, abs(a) * eb + ea * abs(b) + ea * eb)
        return NotImplemented

    __rmul__ = __mul__


def _as_floaterr(x) -> FloatErr:
    if isinstance(x, FloatErr):
        return x
    if isinstance(x, (int, float, Fraction)):
        return FloatErr(float(x), 0.0)
    raise TypeError(f"cannot coerce {type(x)} to FloatErr")


KINDS = ("exact", "floaterr", "formal")


def scalar_is_zero(x) -> bool:
    if isinstance(x, Fraction) or isinstance(x, int):
        return x == 0
    if isinstance(x, FloatErr):
        return x.value == 0.0 and x.err == 0.0
    return x.is_zero()


class NCSeries:
    """Sparse truncated series; immutable by convention."""

    __slots__ = ("trunc", "kind", "_c")

    def __init__(self, trunc: int, kind: str, coeffs: dict | None = None):
        if trunc < 0:
            raise ValueError("truncation degree must be >= 0")
        if kind not in KINDS:
            raise ValueError(f"unknown scalar kind {kind!r}")
        self.trunc = trunc
        self.kind = kind
        c = {}
        if coeffs:
            for w, v in coeffs.items():
                check_word(w)
                if len(w) > trunc:
                    raise ValueError(f"word {w!r} exceeds truncation {trunc}")
                if not scalar_is_zero(v):
                    c[w] = v
        self._c = c

    # -- access ----------------------------------------------------------

    def coeff(self, w: Word):
        """Stored coefficient of ``w`` (zero scalar if absent)."""
        check_word(w)
        if len(w) > self.trunc:
            raise ValueError(f"word {w!r} exceeds truncation {self.trunc}")
        if w in self._c:
            return self._c[w]
        return self._zero_scalar()

    def items(self):
        return self._c.items()

    def words(self):
        return self._c.keys()

    def _zero_scalar(self):
        if self.kind == "exact":
            return Fraction(0)
        if self.kind == "floaterr":
            return FloatErr(0.0, 0.0)
        from .transport import FormalExpr

        return FormalExpr.zero()

    def __eq__(self, other):
        if not isinstance(other, NCSeries):
            return NotImplemented
        return self.kind == other.kind and self._c == other._c

    def __hash__(self):
        return hash((self.kind, frozenset(self._c.items())))

    def __repr__(self):
        terms = sorted(self._c.items(), key=lambda kv: (len(kv[0]), kv[0]))
        body = " + ".join(f"({v})*{w or '1'}" for w, v in terms[:8])
        more = "" if len(terms) <= 8 else f" + ... [{len(terms)} terms]"
        return f"NCSeries(N={self.trunc}, {body or '0'}{more})"

    # -- ring operations --------------------------------------------------

    def _check_kind(self, other: "NCSeries"):
        if self.kind != other.kind:
            raise ValueError(f"scalar-kind mismatch: {self.kind} vs {other.kind}")

    def __add__(self, other: "NCSeries") -> "NCSeries":
        self._check_kind(other)
        n = min(self.trunc, other.trunc)
        c = {w: v for w, v in self._c.items() if len(w) <= n}
        for w, v in other._c.items():
            if len(w) <= n:
                c[w] = c[w] + v if w in c else v
        return NCSeries(n, self.kind, c)

    def __sub__(self, other: "NCSeries") -> "NCSeries":
        return self + (-other)

    def __neg__(self) -> "NCSeries":
        return NCSeries(self.trunc, self.kind, {w: -v for w, v in self._c.items()})

    def __mul__(self, other: "NCSeries") -> "NCSeries":
        self._check_kind(other)
        return mul(self, other)

    def scale(self, c) -> "NCSeries":
        if scalar_is_zero(c) and not isinstance(c, FloatErr):
            return NCSeries(self.trunc, self.kind, {})
        return NCSeries(self.trunc, self.kind, {w: c * v for w, v in self._c.items()})

    def truncate(self, n: int) -> "NCSeries":
        return NCSeries(min(n, self.trunc), self.kind,
                        {w: v for w, v in self._c.items() if len(w) <= n})

    def is_zero(self) -> bool:
        return not self._c


def series(trunc: int, kind: str = "exact", coeffs: dict | None = None) -> NCSeries:
    return NCSeries(trunc, kind, coeffs)


def one(trunc: int, kind: str = "exact") -> NCSeries:
    if kind == "exact":
        unit = Fraction(1)
    elif kind == "floaterr":
        unit = FloatErr(1.0, 0.0)
    else:
        from .transport import FormalExpr

        unit = FormalExpr.one()
    return NCSeries(trunc, kind, {"": unit})


def letter(c: str, trunc: int, kind: str = "exact") -> NCSeries:
    check_word(c)
    if kind == "exact":
        unit = Fraction(1)
    elif kind == "floaterr":
        unit = FloatErr(1.0, 0.0)
    else:
        from .transport import FormalExpr

        unit = FormalExpr.one()
    return NCSeries(trunc, kind, {c: unit})


def mul(s: NCSeries, t: NCSeries, _track: list | None = None) -> NCSeries:
    """Concatenation product; result truncation is min of the factors'.

    ``_track`` (internal): a one-element list set to True when terms were
    dropped by truncation.
    """
    if s.kind != t.kind:
        raise ValueError(f"scalar-kind mismatch: {s.kind} vs {t.kind}")
    n = min(s.trunc, t.trunc)
    acc: dict = {}
    for u, cu in s._c.items():
        for v, cv in t._c.items():
            if len(u) + len(v) > n:
                if _track is not None:
                    _track[0] = True
                continue
            w = u + v
            p = cu * cv
            acc[w] = acc[w] + p if w in acc else p
    return NCSeries(n, s.kind, acc)


def exp(s: NCSeries) -> NCSeries:
    """Truncated exponential; requires zero constant term."""
    if not scalar_is_zero(s.coeff("")):
        raise ValueError("exp requires zero constant term")
    out = one(s.trunc, s.kind)
    power = one(s.trunc, s.kind)
    fact = 1
    for m in range(1, s.trunc + 1):
        power = mul(power, s)
        fact *= m
        if power.is_zero():
            break
        out = out + power.scale(Fraction(1, fact))
    return out


def log(s: NCSeries) -> NCSeries:
    """Truncated logarithm; requires constant term 1."""
    c0 = s.coeff("")
    if s.kind == "exact":
        ok = c0 == 1
    elif s.kind == "floaterr":
        ok = c0.value == 1.0
    else:
        ok = (c0 - c0.__class__.one()).is_zero()
    if not ok:
        raise ValueError("log requires constant term 1")
    t = s - one(s.trunc, s.kind)
    out = NCSeries(s.trunc, s.kind, {})
    power = one(s.trunc, s.kind)
    for m in range(1, s.trunc + 1):
        power = mul(power, t)
        if power.is_zero():
            break
        out = out + power.scale(Fraction((-1) ** (m + 1), m))
    return out


def shuffle(u: Word, v: Word) -> list:
    """All interleavings of u and v preserving internal order (with
    multiplicity); the result has C(|u|+|v|, |u|) entries."""
    check_word(u)
    check_word(v)
    if not u:
        return [v]
    if not v:
        return [u]
    return [u[0] + w for w in shuffle(u[1:], v)] + [v[0] + w for w in shuffle(u, v[1:])]


def tree_degree(t: BracketTree) -> int:
    if isinstance(t, str):
        return 1
    return tree_degree(t[0]) + tree_degree(t[1])


def tree_str(t: BracketTree) -> str:
    if isinstance(t, str):
        return t
    return f"[{tree_str(t[0])},{tree_str(t[1])}]"


def bracket_expand(t: BracketTree, trunc: int, kind: str = "exact") -> NCSeries:
    """Expand a bracket tree into the associative algebra:
    node(l, r) -> expand(l)*expand(r) - expand(r)*expand(l)."""
    if tree_degree(t) > trunc:
        raise ValueError("tree degree exceeds truncation")
    if isinstance(t, str):
        return letter(t, trunc, kind)
    left = bracket_expand(t[0], trunc, kind)
    right = bracket_expand(t[1], trunc, kind)
    return mul(left, right) - mul(right, left)


def substitute(s: NCSeries, img_a: NCSeries, img_b: NCSeries,
               with_flag: bool = False):
    """Apply the algebra homomorphism A -> img_a, B -> img_b word-by-word.

    Returns the truncated image; with ``with_flag`` also returns whether
    truncation dropped any terms (overflow).
    """
    if not (s.kind == img_a.kind == img_b.kind):
        raise ValueError("scalar-kind mismatch in substitute")
    n = min(s.trunc, img_a.trunc, img_b.trunc)
    images = {"A": img_a.truncate(n), "B": img_b.truncate(n)}
    track = [False]
    out = NCSeries(n, s.kind, {})
    cache: dict = {"": one(n, s.kind)}

    def word_image(w: Word) -> NCSeries:
        if w in cache:
            return cache[w]
        img = mul(word_image(w[:-1]), images[w[-1]], _track=track)
        cache[w] = img
        return img

    for w, c in s.items():
        if len(w) > n:
            track[0] = True
            continue
        out = out + word_image(w).scale(c)
    if with_flag:
        return out, track[0]
    return out


@dataclass
class GrouplikeReport:
    passed: bool
    tol: float
    violations: list  # (u, v, residual) triples

    def __bool__(self):
        return self.passed


def is_grouplike(s: NCSeries, tol: float = 0.0) -> GrouplikeReport:
    """Check the shuffle relations coeff(u)*coeff(v) = sum over sh(u,v).

    For floaterr series the comparison allows ``tol`` plus the propagated
    error bound of the residual; exact and formal series must cancel
    exactly.  Constant term must be 1.
    """
    c0 = s.coeff("")
    if s.kind == "exact" and c0 != 1:
        raise ValueError("is_grouplike requires constant term 1")
    if s.kind == "floaterr" and c0.value != 1.0:
        raise ValueError("is_grouplike requires constant term 1")
    violations = []
    n = s.trunc
    for du in range(1, n):
        for dv in range(1, n - du + 1):
            for u in _all_words(du):
                for v in _all_words(dv):
                    lhs = s.coeff(u) * s.coeff(v)
                    rhs = None
                    for w in shuffle(u, v):
                        cw = s.coeff(w)
                        rhs = cw if rhs is None else rhs + cw
                    r = lhs - rhs
                    if s.kind == "floaterr":
                        if abs(r.value) > tol + r.err:
                            violations.append((u, v, r))
                    elif not scalar_is_zero(r):
                        violations.append((u, v, r))
    return GrouplikeReport(passed=not violations, tol=tol, violations=violations)


def _all_words(d: int) -> Iterable[Word]:
    if d == 0:
        yield ""
        return
    for w in _all_words(d - 1):
        yield w + "A"
        yield w + "B"


def all_words(d: int) -> list:
    """All 2^d words of degree exactly d, in a fixed order."""
    return list(_all_words(d))


# -- serialization ---------------------------------------------------------

def scalar_to_json(v, kind: str):
    if kind == "exact":
        return f"{v.numerator}/{v.denominator}"
    if kind == "floaterr":
        return {"value": v.value, "error": v.err}
    return v.to_json()


def scalar_from_json(obj, kind: str):
    if kind == "exact":
        return Fraction(obj)
    if kind == "floaterr":
        return FloatErr(obj["value"], obj["error"])
    from .transport import FormalExpr

    return FormalExpr.from_json(obj)


def series_to_json(s: NCSeries) -> dict:
    return {
        "truncation": s.trunc,
        "kind": s.kind,
        "coefficients": {w: scalar_to_json(v, s.kind)
                         for w, v in sorted(s.items())},
    }


def series_from_json(obj: dict) -> NCSeries:
    kind = obj["kind"]
    coeffs = {w: scalar_from_json(v, kind) for w, v in obj["coefficients"].items()}
    return NCSeries(obj["truncation"], kind, coeffs)


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return binom(n, k)
