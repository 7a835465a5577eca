"""The quadric family f = x1*y1 + ... + xn*yn and its regularity checks.

On 2n exterior variables x1..xn, y1..yn the cyclic module E/(f) acquires a
minimal first syzygy in degree n, witnessed by s = x1*...*xn (s wedge f
dies because every expanded term repeats some x generator).  Consequently
the truncated Betti table shows beta_{2,n+2} >= 1 and the regularity of
E/(f) is at least n, over every coefficient field.  Verification runs two
independent routes - the annihilator of f, and the resolution-based Betti
table - and cross-checks them against each other.

In characteristic 0 all minimal generators of the annihilator sit in
degree n exactly; in characteristic 2 the square of f vanishes, adding a
degree-2 generator.  Other positive characteristics are reported without
asserted expectations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exterior import AlgebraContext, Element
from .fields import FieldSpec, PrimeField
from .resolution import (BettiTable, annihilator, betti_table,
                         check_size_guard, minimal_generators,
                         regularity_lower_bound)

MAX_N = 32

FAMILY_NAME = "peeva"

DEFAULT_I_MAX = 3


def default_window(n: int) -> tuple:
    return (DEFAULT_I_MAX, n + 4)


@dataclass(frozen=True)
class FamilyInstance:
    n: int
    context: AlgebraContext
    f: Element
    s: Element


def build_family(n: int, field: FieldSpec) -> FamilyInstance:
    """Instance on variables x1..xn, y1..yn (xi at index i-1, yi at n+i-1)."""
    if not isinstance(n, int) or not 1 <= n <= MAX_N:
        raise ValueError(f"n must be an integer in [1, {MAX_N}], got {n}")
    names = tuple(f"x{i}" for i in range(1, n + 1)) + \
        tuple(f"y{i}" for i in range(1, n + 1))
    ctx = AlgebraContext(names, field)
    f = Element.zero(ctx)
    for i in range(n):
        f = f + Element.variable(ctx, i).wedge(Element.variable(ctx, n + i))
    s = Element.one(ctx)
    for i in range(n):
        s = s.wedge(Element.variable(ctx, i))
    return FamilyInstance(n, ctx, f, s)


def check_witness(inst: FamilyInstance) -> bool:
    return inst.s.wedge(inst.f).is_zero()


def _min_gen_counts(inst: FamilyInstance, d_max: int, allow_large: bool) -> dict:
    ann = annihilator(inst.f, d_max, allow_large=allow_large)
    return {d: count for d, (count, _) in minimal_generators(ann).items()}


@dataclass
class VerificationReport:
    n: int
    field: FieldSpec
    witness_ok: bool
    min_gen_degrees: dict
    has_degree_n_generator: bool
    reg_lower_bound: int
    window: tuple
    betti: BettiTable
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "field": self.field.name,
            "witness_ok": self.witness_ok,
            "min_gen_degrees": {str(d): c for d, c in
                                sorted(self.min_gen_degrees.items())},
            "has_degree_n_generator": self.has_degree_n_generator,
            "reg_lower_bound": self.reg_lower_bound,
            "window": [self.window[0], self.window[1]],
            "pass": self.passed,
        }


def verify_family(n: int, field: FieldSpec, i_max: int | None = None,
                  j_max: int | None = None,
                  allow_large: bool = False) -> VerificationReport:
    """Check the degree-n syzygy of (f) and the regularity bound reg >= n.

    Route one: the annihilator of f must acquire a minimal generator in
    degree n (s is such an element).  Route two: the Betti table of E/(f)
    must show the matching beta_{2,j} entries.  The two routes are
    cross-checked entry by entry (beta_{2,j} = new annihilator generators
    in degree j-2); a mismatch means an internal bug, not a verification
    failure, and raises.
    """
    inst = build_family(n, field)
    check_size_guard(inst.context, allow_large)
    if i_max is None or j_max is None:
        di, dj = default_window(n)
        i_max = di if i_max is None else i_max
        j_max = dj if j_max is None else j_max

    witness_ok = check_witness(inst)
    min_gen_degrees = _min_gen_counts(inst, n, allow_large)
    has_degree_n = min_gen_degrees.get(n, 0) >= 1

    table = betti_table([inst.f], i_max, j_max, allow_large=allow_large)
    reg = regularity_lower_bound(table)

    # beta_{2,j} entries are annihilator generators shifted by the twist
    # of f; compare wherever both windows computed the degree
    beta2 = table.column(2)
    for j in range(2, min(j_max, n + 2) + 1):
        left = beta2.get(j, 0)
        right = min_gen_degrees.get(j - 2, 0)
        if left != right:
            raise RuntimeError(
                f"route mismatch at n={n}, j={j}: betti {left} vs annihilator {right}")

    passed = witness_ok and has_degree_n and reg >= n
    return VerificationReport(n=n, field=field, witness_ok=witness_ok,
                              min_gen_degrees=min_gen_degrees,
                              has_degree_n_generator=has_degree_n,
                              reg_lower_bound=reg, window=(i_max, j_max),
                              betti=table, passed=passed)


@dataclass
class CharacteristicReport:
    """Characteristic-dependent behavior of the annihilator of f.

    mode "uniform-degree" (char 0): asserts all minimal generators sit in
    degree n.  mode "square-zero" (char 2): asserts f*f = 0 and a degree-2
    generator.  mode "exploratory" (other char p): data only, passed stays
    None.
    """

    n: int
    field: FieldSpec
    mode: str
    min_gen_degrees: dict
    f_square_zero: bool | None
    passed: bool | None

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "field": self.field.name,
            "mode": self.mode,
            "min_gen_degrees": {str(d): c for d, c in
                                sorted(self.min_gen_degrees.items())},
            "f_square_zero": self.f_square_zero,
            "pass": self.passed,
        }


def characteristic_report(n: int, field: FieldSpec,
                          allow_large: bool = False) -> CharacteristicReport:
    inst = build_family(n, field)
    check_size_guard(inst.context, allow_large)
    counts = _min_gen_counts(inst, n, allow_large)
    support = {d for d, c in counts.items() if c}
    char = field.characteristic
    if char == 0:
        return CharacteristicReport(n, field, "uniform-degree", counts,
                                    None, support == {n})
    if char == 2:
        square_zero = inst.f.wedge(inst.f).is_zero()
        return CharacteristicReport(n, field, "square-zero", counts,
                                    square_zero, square_zero and 2 in support)
    return CharacteristicReport(n, field, "exploratory", counts, None, None)


def characteristic_scan(n: int, primes, allow_large: bool = False) -> list:
    """Minimal generator degrees of the annihilator of f over each F_p."""
    rows = []
    for p in primes:
        field = PrimeField(p)  # validates primality
        inst = build_family(n, field)
        check_size_guard(inst.context, allow_large)
        rows.append((p, _min_gen_counts(inst, n, allow_large)))
    return rows
