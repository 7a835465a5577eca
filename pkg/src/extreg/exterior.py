"""Exterior algebra core: bitmask monomials, graded elements, wedge products.

A monomial is an int bitmask over the context's variables; bit i set means
variable i occurs.  Products of overlapping monomials vanish (a squared
generator kills the term in every characteristic, which is why the zero
test is the disjointness test and never sign cancellation), and products
of disjoint monomials merge the masks with a sign given by the parity of
the number of index inversions between the two ascending index sequences.

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .fields import FieldSpec

MAX_VARS = 64


@dataclass(frozen=True)
class AlgebraContext:
    """A fixed ordered set of generators over a fixed coefficient field.

    The declaration order of ``var_names`` pins every sign in the algebra;
    two contexts with the same names in a different order are different
    algebras for all practical purposes.
    """

    var_names: tuple[str, ...]
    field: FieldSpec

    def __post_init__(self):
        object.__setattr__(self, "var_names", tuple(self.var_names))
        n = len(self.var_names)
        if not 1 <= n <= MAX_VARS:
            raise ValueError(f"need between 1 and {MAX_VARS} variables, got {n}")
        if len(set(self.var_names)) != n:
            raise ValueError("variable names must be distinct")
        for name in self.var_names:
            if not name.isidentifier():
                raise ValueError(f'invalid variable name "{name}"')

    @property
    def n_vars(self) -> int:
        return len(self.var_names)

    def dim(self, d: int) -> int:
        """Dimension of the degree-d component: C(n_vars, d), 0 outside [0, n]."""
        if 0 <= d <= self.n_vars:
            return comb(self.n_vars, d)
        return 0

    def var_index(self, name: str) -> int:
        try:
            return self.var_names.index(name)
        except ValueError:
            raise KeyError(name) from None


def mono_degree(mask: int) -> int:
    return mask.bit_count()


def mono_indices(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def mono_from_indices(indices) -> int:
    mask = 0
    for i in indices:
        bit = 1 << i
        if mask & bit:
            raise ValueError(f"repeated index {i}")
        mask |= bit
    return mask


def mono_str(ctx: AlgebraContext, mask: int) -> str:
    if mask == 0:
        return "1"
    return "*".join(ctx.var_names[i] for i in mono_indices(mask))


def wedge_monomials(m1: int, m2: int):
    """Wedge two monomial masks.

    Returns None when the masks overlap (the product is zero), otherwise
    (sign, merged_mask) with sign = (-1)**inv, where inv counts the pairs
    i in m1, j in m2 with i > j.
    """
    if m1 & m2:
        return None
    inv = 0
    rest = m2
    while rest:
        low = rest & -rest
        inv += (m1 >> low.bit_length()).bit_count()
        rest ^= low
    return (-1 if inv & 1 else 1), m1 | m2


@lru_cache(maxsize=None)
def basis(ctx: AlgebraContext, d: int) -> tuple[int, ...]:
    """All degree-d monomial masks, ascending as integers (Gosper's hack)."""
    n = ctx.n_vars
    if d < 0 or d > n:
        return ()
    if d == 0:
        return (0,)
    out = []
    mask = (1 << d) - 1
    top = 1 << n
    while mask < top:
        out.append(mask)
        c = mask & -mask
        r = mask + c
        mask = (((r ^ mask) >> 2) // c) | r
    return tuple(out)


@lru_cache(maxsize=None)
def basis_index(ctx: AlgebraContext, d: int) -> dict:
    return {m: i for i, m in enumerate(basis(ctx, d))}


class Element:
    """A finite sum of monomials with nonzero field coefficients.

    ``terms`` maps monomial masks to raw field values; zero coefficients
    are never stored, so the zero element is the empty map.  Elements may
    be inhomogeneous; use graded_component to slice.
    """

    __slots__ = ("context", "terms")

    def __init__(self, context: AlgebraContext, terms=None, _trusted=False):
        self.context = context
        if terms is None:
            terms = {}
        if _trusted:
            self.terms = terms
        else:
            field = context.field
            top = 1 << context.n_vars
            clean = {}
            for mask, value in terms.items():
                if not 0 <= mask < top:
                    raise ValueError(f"monomial mask {mask} outside context")
                value = field.coerce(value)
                if value:
                    clean[mask] = value
            self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ctx: AlgebraContext) -> "Element":
        return cls(ctx, {}, _trusted=True)

    @classmethod
    def one(cls, ctx: AlgebraContext) -> "Element":
        return cls(ctx, {0: ctx.field.one()}, _trusted=True)

    @classmethod
    def variable(cls, ctx: AlgebraContext, name_or_index) -> "Element":
        idx = name_or_index
        if isinstance(idx, str):
            idx = ctx.var_index(idx)
        if not 0 <= idx < ctx.n_vars:
            raise ValueError(f"variable index {idx} out of range")
        return cls(ctx, {1 << idx: ctx.field.one()}, _trusted=True)

    @classmethod
    def monomial(cls, ctx: AlgebraContext, mask: int, coeff=None) -> "Element":
        value = ctx.field.one() if coeff is None else ctx.field.coerce(coeff)
        if not value:
            return cls.zero(ctx)
        return cls(ctx, {mask: value})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def support_degrees(self) -> set[int]:
        return {mono_degree(m) for m in self.terms}

    def homogeneous_degree(self):
        """The common degree of all terms, or None if inhomogeneous/zero."""
        degs = self.support_degrees()
        if len(degs) == 1:
            return degs.pop()
        return None

    def _check_context(self, other: "Element"):
        if self.context != other.context:
            raise ValueError("elements belong to different algebra contexts")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Element") -> "Element":
        self._check_context(other)
        field = self.context.field
        out = dict(self.terms)
        for mask, value in other.terms.items():
            s = field.add(out.get(mask, field.zero()), value)
            if s:
                out[mask] = s
            else:
                out.pop(mask, None)
        return Element(self.context, out, _trusted=True)

    def __neg__(self) -> "Element":
        field = self.context.field
        return Element(self.context,
                       {m: field.neg(v) for m, v in self.terms.items()},
                       _trusted=True)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, scalar) -> "Element":
        field = self.context.field
        scalar = field.coerce(scalar)
        if not scalar:
            return Element.zero(self.context)
        return Element(self.context,
                       {m: field.mul(scalar, v) for m, v in self.terms.items()},
                       _trusted=True)

    def wedge(self, other: "Element") -> "Element":
        self._check_context(other)
        field = self.context.field
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                hit = wedge_monomials(m1, m2)
                if hit is None:
                    continue
                sign, mask = hit
                c = field.mul(c1, c2)
                if sign < 0:
                    c = field.neg(c)
                s = field.add(out.get(mask, field.zero()), c)
                if s:
                    out[mask] = s
                else:
                    out.pop(mask, None)
        return Element(self.context, out, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.wedge(other)
        return self.scale(other)

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def graded_component(self, d: int) -> "Element":
        return Element(self.context,
                       {m: v for m, v in self.terms.items() if mono_degree(m) == d},
                       _trusted=True)

    # -- comparison / rendering ---------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Element)
                and self.context == other.context
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.context, frozenset(self.terms.items())))

    def __str__(self):
        return render_element(self)

    def __repr__(self):
        return f"Element({render_element(self)!r})"


def render_element(e: Element) -> str:
    """Deterministic text form: terms ascending by monomial mask.

    Round-trips through the expression parser.  Coefficient 1 is dropped
    on non-constant monomials; over Q a negative coefficient folds into
    the joining minus sign, over F_p all residues are rendered as-is.
    """
    if not e.terms:
        return "0"
    field = e.context.field
    parts = []
    for mask in sorted(e.terms):
        value = e.terms[mask]
        negative = field.characteristic == 0 and value < 0
        mag = -value if negative else value
        coeff = field.render(mag)
        if mask == 0:
            body = coeff
        elif coeff == "1":
            body = mono_str(e.context, mask)
        else:
            body = f"{coeff}*{mono_str(e.context, mask)}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(parts)


def wedge(a: Element, b: Element) -> Element:
    return a.wedge(b)


def graded_component(e: Element, d: int) -> Element:
    return e.graded_component(d)


def coords(e: Element, d: int) -> list:
    """Coordinates of the degree-d component of e over basis(ctx, d)."""
    ctx = e.context
    vec = [ctx.field.zero()] * ctx.dim(d)
    index = basis_index(ctx, d)
    for mask, value in e.terms.items():
        if mono_degree(mask) == d:
            vec[index[mask]] = value
    return vec


def from_coords(ctx: AlgebraContext, d: int, vec) -> Element:
    terms = {}
    for mask, value in zip(basis(ctx, d), vec):
        if value:
            terms[mask] = value
    return Element(ctx, terms, _trusted=True)
