"""Graded free modules, annihilators, syzygies, Betti tables, regularity.

A free module is a direct sum of twisted copies of the ambient exterior
algebra; its degree-d component is coordinatized by pairs (generator,
monomial) in generator-major order.  Module maps store one image vector
per source generator, with coefficients acting from the left (phi of
e times gen equals e wedge phi(gen)), matching the left annihilator
convention e wedge g.  For even-degree g left and right annihilators
coincide; for odd degree the right annihilator is sign-isomorphic and is
not computed separately.

Resolutions over an exterior algebra are almost never finite, so every
Betti table here is a truncation to an explicit window (i_max, j_max) and
the regularity figure derived from it is only ever a certified lower
bound.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from math import comb

from .exterior import (AlgebraContext, Element, basis, basis_index, coords,
                       from_coords, mono_degree, wedge_monomials)
from .fields import Rationals
from .linalg import Matrix, SpanBuilder, kernel_basis, in_span

DEFAULT_MAX_VARS = 12


def worker_cap() -> int:
    """Upper bound on internal parallelism, from EXTREG_THREADS (default 1)."""
    try:
        v = int(os.environ.get("EXTREG_THREADS", ""))
    except ValueError:
        return 1
    return v if v >= 1 else 1


def _degreewise(fn, degrees):
    # independent per-degree work; merged back in degree order either way
    cap = worker_cap()
    if cap > 1 and len(degrees) > 1:
        with ThreadPoolExecutor(max_workers=min(cap, len(degrees))) as pool:
            return list(pool.map(fn, degrees))
    return [fn(d) for d in degrees]


class SizeGuardError(ValueError):
    """Raised when a computation would exceed the dense-size guard."""


def check_size_guard(ctx: AlgebraContext, allow_large: bool = False):
    """Dense resolutions enumerate full monomial bases; cap the blowup.

    Contexts up to 12 variables are always allowed.  Larger contexts are
    allowed over a prime field with an explicit override, never over Q
    (C(n, n/2) rational columns stop being desk scale well before n = 16).
    """
    n = ctx.n_vars
    if n <= DEFAULT_MAX_VARS:
        return
    if isinstance(ctx.field, Rationals):
        raise SizeGuardError(
            f"{n} variables exceeds the size guard ({DEFAULT_MAX_VARS}); "
            "contexts this large are only supported over a prime field")
    if not allow_large:
        raise SizeGuardError(
            f"{n} variables exceeds the size guard ({DEFAULT_MAX_VARS}); "
            "pass allow_large / --allow-large to override")


@dataclass(frozen=True)
class FreeModule:
    """F = (+)_k E(-a_k): the k-th generator sits in internal degree a_k."""

    context: AlgebraContext
    twists: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(self.twists))

    @property
    def rank(self) -> int:
        return len(self.twists)

    def dim(self, d: int) -> int:
        n = self.context.n_vars
        return sum(comb(n, d - a) for a in self.twists if 0 <= d - a <= n)

    def component_basis(self, d: int) -> list:
        """Degree-d basis as (generator index, monomial mask) pairs."""
        out = []
        for k, a in enumerate(self.twists):
            for mask in basis(self.context, d - a):
                out.append((k, mask))
        return out

    def component_index(self, d: int) -> dict:
        return {km: i for i, km in enumerate(self.component_basis(d))}

    def zero_vector(self) -> tuple:
        z = Element.zero(self.context)
        return tuple(z for _ in self.twists)

    def vector_to_coords(self, vec, d: int) -> list:
        """Coordinates of a module element (tuple of Elements) in degree d."""
        out = []
        for k, a in enumerate(self.twists):
            out.extend(coords(vec[k], d - a))
        return out

    def coords_to_vector(self, coord_list, d: int) -> tuple:
        ctx = self.context
        vec = []
        pos = 0
        for a in self.twists:
            width = ctx.dim(d - a)
            vec.append(from_coords(ctx, d - a, coord_list[pos:pos + width]))
            pos += width
        return tuple(vec)

    def multiply_vector(self, e: Element, vec) -> tuple:
        return tuple(e.wedge(component) for component in vec)


@dataclass
class ModuleMap:
    """Graded map between free modules, one Element column per source gen.

    columns[k][l] is the entry in row l, column k: the image of source
    generator k is sum_l columns[k][l] * target_gen_l.  Every nonzero
    entry must be homogeneous of degree source.twists[k] - target.twists[l].
    """

    source: FreeModule
    target: FreeModule
    columns: tuple
    note: str | None = dc_field(default=None, compare=False)

    def __post_init__(self):
        if self.source.context != self.target.context:
            raise ValueError("source and target live over different contexts")
        self.columns = tuple(tuple(col) for col in self.columns)
        if len(self.columns) != self.source.rank:
            raise ValueError("need one column per source generator")
        for k, col in enumerate(self.columns):
            if len(col) != self.target.rank:
                raise ValueError("column length must equal target rank")
            for l, entry in enumerate(col):
                if entry.is_zero():
                    continue
                deg = entry.homogeneous_degree()
                expected = self.source.twists[k] - self.target.twists[l]
                if deg != expected:
                    raise ValueError(
                        f"entry ({l},{k}) has degree {deg}, expected {expected}")

    @property
    def context(self) -> AlgebraContext:
        return self.source.context

    def is_minimal(self) -> bool:
        """No nonzero scalar (degree-0) entries anywhere."""
        for col in self.columns:
            for entry in col:
                if entry and entry.homogeneous_degree() == 0:
                    return False
        return True

    def apply(self, vec) -> tuple:
        """Image of a module element given as a tuple of Elements."""
        ctx = self.context
        out = [Element.zero(ctx) for _ in range(self.target.rank)]
        for k, col in enumerate(self.columns):
            e = vec[k]
            if e.is_zero():
                continue
            for l, entry in enumerate(col):
                if entry:
                    out[l] = out[l] + e.wedge(entry)
        return tuple(out)

    def matrix_at_degree(self, d: int) -> Matrix:
        """Matrix of the degree-d component in the component_basis orders."""
        ctx = self.context
        field = ctx.field
        tgt_index = self.target.component_index(d)
        n_rows = len(tgt_index)
        cols = []
        for k, a in enumerate(self.source.twists):
            col_entries = self.columns[k]
            for mask in basis(ctx, d - a):
                vec = [field.zero()] * n_rows
                for l, entry in enumerate(col_entries):
                    for m2, c in entry.terms.items():
                        hit = wedge_monomials(mask, m2)
                        if hit is None:
                            continue
                        sign, merged = hit
                        value = c if sign > 0 else field.neg(c)
                        idx = tgt_index[(l, merged)]
                        vec[idx] = field.add(vec[idx], value)
                cols.append(vec)
        return Matrix.from_columns(field, cols, n_rows)

    def compose(self, inner: "ModuleMap") -> "ModuleMap":
        """self after inner: source = inner.source, target = self.target."""
        if inner.target != self.source:
            raise ValueError("maps are not composable")
        ctx = self.context
        cols = []
        for j in range(inner.source.rank):
            col = [Element.zero(ctx) for _ in range(self.target.rank)]
            for k in range(self.source.rank):
                mid = inner.columns[j][k]
                if mid.is_zero():
                    continue
                for l in range(self.target.rank):
                    entry = self.columns[k][l]
                    if entry:
                        col[l] = col[l] + mid.wedge(entry)
            cols.append(tuple(col))
        return ModuleMap(inner.source, self.target, tuple(cols))

    def is_zero_map(self) -> bool:
        return all(entry.is_zero() for col in self.columns for entry in col)


@dataclass
class GradedSubmodule:
    """Degreewise coordinate bases of a submodule of a graded free module.

    degree_bases[d] is a Matrix whose columns are coordinates (in the
    ambient component_basis(d) order) of a basis of the degree-d piece.
    Multiplying any basis column by any variable must land in the span of
    the next degree's basis whenever that degree is stored.
    """

    ambient: FreeModule
    degree_bases: dict

    def dim(self, d: int) -> int:
        m = self.degree_bases.get(d)
        return m.n_cols if m is not None else 0

    def degrees(self) -> list:
        return sorted(self.degree_bases)

    def contains(self, vec, d: int) -> bool:
        m = self.degree_bases.get(d)
        if m is None:
            raise KeyError(f"degree {d} not computed")
        return in_span(m, self.ambient.vector_to_coords(vec, d))


def multiplication_matrix(g: Element, d: int) -> Matrix:
    """Matrix of E_d -> E_{d+deg g}, e -> e wedge g, in the basis orders."""
    ctx = g.context
    dg = g.homogeneous_degree()
    if dg is None:
        raise ValueError("multiplication element must be homogeneous and nonzero")
    field = ctx.field
    tgt_index = basis_index(ctx, d + dg)
    n_rows = ctx.dim(d + dg)
    cols = []
    for mask in basis(ctx, d):
        vec = [field.zero()] * n_rows
        for m2, c in g.terms.items():
            hit = wedge_monomials(mask, m2)
            if hit is None:
                continue
            sign, merged = hit
            value = c if sign > 0 else field.neg(c)
            vec[tgt_index[merged]] = field.add(vec[tgt_index[merged]], value)
        cols.append(vec)
    return Matrix.from_columns(field, cols, n_rows)


def annihilator(g: Element, d_max: int, allow_large: bool = False) -> GradedSubmodule:
    """Left annihilator {e : e wedge g = 0} degreewise up to d_max.

    Its degree-d piece is the kernel of the multiplication matrix on E_d;
    the elements are exactly the degree-d first syzygies of the principal
    ideal (g).
    """
    if g.is_zero():
        raise ValueError("annihilator of zero is everything; rejected as degenerate")
    if g.homogeneous_degree() is None:
        raise ValueError("annihilator input must be homogeneous")
    ctx = g.context
    check_size_guard(ctx, allow_large)
    ambient = FreeModule(ctx, (0,))
    degrees = list(range(d_max + 1))
    columns = _degreewise(lambda d: kernel_basis(multiplication_matrix(g, d)),
                          degrees)
    bases = {d: Matrix.from_columns(ctx.field, cols, ctx.dim(d))
             for d, cols in zip(degrees, columns)}
    return GradedSubmodule(ambient, bases)


def minimal_generators(sub: GradedSubmodule) -> dict:
    """Degree -> (count, representative vectors) for a graded submodule.

    In each degree d the span of variable times (degree d-1 basis) is
    built first; representatives are the degree-d basis columns that
    enlarge it, so count = dim(sub_d) - dim(m * sub_{d-1}).  Degrees whose
    component is zero are omitted from the result.  Requires the stored
    degrees to form a contiguous range starting no later than the lowest
    nonzero component.
    """
    degrees = sub.degrees()
    if not degrees:
        return {}
    lo, hi = degrees[0], degrees[-1]
    if degrees != list(range(lo, hi + 1)):
        raise ValueError("degree bases must cover a contiguous range")
    ambient = sub.ambient
    ctx = ambient.context
    field = ctx.field
    variables = [Element.variable(ctx, i) for i in range(ctx.n_vars)]
    out = {}
    prev_vectors = []  # degree-(d-1) basis as module vectors
    for d in range(lo, hi + 1):
        mat = sub.degree_bases[d]
        if mat.n_cols == 0:
            prev_vectors = []
            continue
        tracker = SpanBuilder(field, ambient.dim(d))
        for v in variables:
            for vec in prev_vectors:
                shifted = ambient.multiply_vector(v, vec)
                tracker.insert(ambient.vector_to_coords(shifted, d))
        reps = []
        for col in mat.columns():
            if tracker.insert(col):
                reps.append(ambient.coords_to_vector(col, d))
        out[d] = (len(reps), reps)
        prev_vectors = [ambient.coords_to_vector(col, d) for col in mat.columns()]
    return out


def kernel_submodule(phi: ModuleMap, j_max: int) -> GradedSubmodule:
    """Degreewise kernel of phi for min(source twists) <= d <= j_max."""
    src = phi.source
    lo = min(src.twists)
    degrees = list(range(lo, j_max + 1))
    columns = _degreewise(lambda d: kernel_basis(phi.matrix_at_degree(d)),
                          degrees)
    bases = {d: Matrix.from_columns(src.context.field, cols, src.dim(d))
             for d, cols in zip(degrees, columns)}
    return GradedSubmodule(src, bases)


def syzygy_step(phi: ModuleMap, j_max: int) -> ModuleMap:
    """Minimal presentation of ker(phi) in internal degrees <= j_max.

    Returns psi with image = ker(phi) up to degree j_max; the new module
    is twisted by the kernel's minimal generator degrees.  Because the
    generators are minimal, psi never carries degree-0 entries.  When the
    window shows no kernel generator at all, an empty map is returned with
    an explanatory note rather than an error.
    """
    src = phi.source
    if src.rank == 0:
        return ModuleMap(FreeModule(src.context, ()), src, (),
                         note="empty source, nothing to resolve")
    if j_max < max(src.twists):
        raise ValueError(
            f"j_max={j_max} is below the largest source twist {max(src.twists)}")
    gens = minimal_generators(kernel_submodule(phi, j_max))
    twists = []
    columns = []
    for d in sorted(gens):
        _, reps = gens[d]
        for rep in reps:
            twists.append(d)
            columns.append(rep)
    note = None
    if not twists:
        note = f"no kernel generators in internal degrees <= {j_max}"
    return ModuleMap(FreeModule(src.context, tuple(twists)), src,
                     tuple(columns), note=note)


def ideal_submodule(gens, d_max: int) -> GradedSubmodule:
    """The ideal generated by homogeneous elements, degreewise up to d_max."""
    if not gens:
        raise ValueError("need at least one generator")
    ctx = gens[0].context
    field = ctx.field
    ambient = FreeModule(ctx, (0,))
    bases = {}
    for d in range(d_max + 1):
        tracker = SpanBuilder(field, ctx.dim(d))
        cols = []
        for g in gens:
            dg = g.homogeneous_degree()
            if d - dg < 0 or d - dg > ctx.n_vars:
                continue
            for mask in basis(ctx, d - dg):
                image = Element.monomial(ctx, mask).wedge(g)
                if image.is_zero():
                    continue
                vec = coords(image, d)
                if tracker.insert(list(vec)):
                    cols.append(vec)
        bases[d] = Matrix.from_columns(field, cols, ctx.dim(d))
    return GradedSubmodule(ambient, bases)


@dataclass(frozen=True)
class BettiTable:
    """Truncated graded Betti numbers: (i, j, beta) triples plus the window."""

    entries: tuple
    window: tuple

    def __post_init__(self):
        i_max, j_max = self.window
        seen = set()
        for (i, j, beta) in self.entries:
            if beta <= 0:
                raise ValueError("beta entries must be positive")
            if not (0 <= i <= i_max and j <= j_max):
                raise ValueError(f"entry ({i},{j}) outside window {self.window}")
            if (i, j) in seen:
                raise ValueError(f"duplicate entry at ({i},{j})")
            seen.add((i, j))
        object.__setattr__(self, "entries",
                           tuple(sorted(self.entries)))

    def beta(self, i: int, j: int) -> int:
        for (ii, jj, b) in self.entries:
            if (ii, jj) == (i, j):
                return b
        return 0

    def column(self, i: int) -> dict:
        return {j: b for (ii, j, b) in self.entries if ii == i}

    def to_json_dict(self) -> dict:
        return {
            "window": [self.window[0], self.window[1]],
            "entries": [{"i": i, "j": j, "beta": b} for (i, j, b) in self.entries],
            "reg_lower_bound": regularity_lower_bound(self),
        }

    def render(self) -> str:
        return render_betti(self)


def regularity_lower_bound(table: BettiTable) -> int:
    """max(j - i) over the table; a lower bound only, the table is truncated."""
    if not table.entries:
        raise ValueError("empty Betti table")
    return max(j - i for (i, j, _) in table.entries)


def render_betti(table: BettiTable) -> str:
    """Diagonal text layout: rows are j - i, columns are homological degree."""
    i_max = table.window[0]
    n_rows = max((j - i for (i, j, _) in table.entries), default=0) + 1
    cols = list(range(i_max + 1))
    grid = {}
    totals = {i: 0 for i in cols}
    for (i, j, b) in table.entries:
        grid[(j - i, i)] = b
        totals[i] += b
    body = []
    header = [""] + [str(i) for i in cols]
    total_row = ["total:"] + [str(totals[i]) if totals[i] else "." for i in cols]
    body.append(header)
    body.append(total_row)
    for r in range(n_rows):
        row = [f"{r}:"]
        for i in cols:
            b = grid.get((r, i))
            row.append(str(b) if b else ".")
        body.append(row)
    widths = [max(len(line[c]) for line in body) for c in range(len(cols) + 1)]
    lines = []
    for line in body:
        lines.append(" ".join(cell.rjust(w) for cell, w in zip(line, widths)))
    return "\n".join(lines)


def betti_table(ideal_gens, i_max: int, j_max: int,
                allow_large: bool = False) -> BettiTable:
    """Betti numbers of E/I for I = (ideal_gens), truncated to the window.

    beta_{0,0} = 1 for the cyclic module; beta_{1,j} counts minimal ideal
    generators in degree j; higher rows come from iterated syzygy steps on
    the minimal presentation.  Generators must be nonzero, homogeneous of
    positive degree (a degree-0 generator is a unit, making I = E), and
    are deduplicated first.  The empty list is the zero ideal.
    """
    if i_max < 0 or j_max < 0:
        raise ValueError("window bounds must be nonnegative")
    gens = []
    for g in ideal_gens:
        if g.is_zero():
            raise ValueError("zero generator rejected")
        dg = g.homogeneous_degree()
        if dg is None:
            raise ValueError("generators must be homogeneous")
        if dg == 0:
            raise ValueError("unit generator makes the ideal the whole ring")
        if g not in gens:
            gens.append(g)
    if gens:
        check_size_guard(gens[0].context, allow_large)
        for g in gens:
            if g.context != gens[0].context:
                raise ValueError("generators belong to different contexts")
    entries = [(0, 0, 1)]
    if not gens or i_max == 0:
        return BettiTable(tuple(entries), (i_max, j_max))

    ctx = gens[0].context
    ideal = ideal_submodule(gens, j_max)
    min_gens = minimal_generators(ideal)
    twists = []
    columns = []
    for d in sorted(min_gens):
        count, reps = min_gens[d]
        for rep in reps:
            twists.append(d)
            columns.append(rep)
    if twists:
        entries.extend((1, d, c) for d, (c, _) in sorted(min_gens.items()) if c)
        phi = ModuleMap(FreeModule(ctx, tuple(twists)), FreeModule(ctx, (0,)),
                        tuple(columns))
        i = 1
        while i < i_max and phi.source.rank > 0 and max(phi.source.twists) <= j_max:
            psi = syzygy_step(phi, j_max)
            counts = {}
            for d in psi.source.twists:
                counts[d] = counts.get(d, 0) + 1
            entries.extend((i + 1, d, c) for d, c in sorted(counts.items()))
            phi = psi
            i += 1
    return BettiTable(tuple(entries), (i_max, j_max))
