"""Block template for directed terraces of semidirect products Z_q x| A.

The proposed terrace runs: a prefix (0, g_1..g_t), then m-1 blocks whose
first coordinates walk 1, lam^{q-2}, ..., lam while the second coordinates
read a grid h_{ij}, then a middle run with zero second coordinates whose
first coordinates burn through Z_q \ {0, 1}, then the suffix
(0, g_{t+1}..g_m).  A short checklist of coverage conditions on the g and
h families is equivalent to the assembled arrangement being a directed
terrace; the theorem-4 assignment fills the grid from an R-terrace of A
and a #-harmonious sequence so that the checklist passes by construction.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .errors import ConditionsViolated, ConstructionFailed, GroupFormatError, ShapeMismatch
from .groups import AbElem, AbelianSpec, SdElem, SdSpec
from .harmonious import HashHarmonious
from .numtheory import is_primitive_root
from .rotational import RTerrace


@dataclass(frozen=True)
class TemplateInputs:
    sd: SdSpec
    lam: int
    gs: tuple[AbElem, ...]
    hss: tuple[tuple[AbElem, ...], ...]
    t: int

    def __post_init__(self) -> None:
        q = self.sd.s
        m = self.sd.base.order
        if self.sd.alpha.order != q:
            raise GroupFormatError(f"automorphism order {self.sd.alpha.order} != q={q}")
        lam = self.lam % q
        inv_lm1 = pow(lam - 1, -1, q) if lam != 1 else None
        if lam < 2 or not is_primitive_root(lam, q) or not is_primitive_root(
            lam * inv_lm1 % q, q
        ):
            raise GroupFormatError(f"lam={self.lam} is not doubly primitive mod {q}")
        if not 1 <= self.t <= m:
            raise ShapeMismatch(f"t={self.t} outside 1..{m}")
        if len(self.gs) != m:
            raise ShapeMismatch(f"expected {m} g values, got {len(self.gs)}")
        if len(self.hss) != q - 1 or any(len(row) != m - 1 for row in self.hss):
            raise ShapeMismatch(f"h grid must be {q - 1} x {m - 1}")


def first_coordinates(q: int, lam: int) -> list[int]:
    """Block first coordinates: 1, lam^{q-2}, lam^{q-3}, ..., lam."""
    return [1] + [pow(lam, q - i, q) for i in range(2, q)]


def middle_segment(q: int, lam: int, base: Optional[AbelianSpec] = None) -> list[SdElem]:
    """The q-1 zero-second-coordinate entries between the blocks and the suffix.

    First coordinates are lam^i / (lam-1)^{i-1} for i = 1..q-2 followed by
    lam-1; consecutive differences must cover Z_q \\ {0, 1}.
    """
    zero = base.identity if base is not None else ()
    lam %= q
    inv = pow(lam - 1, -1, q)
    firsts = [pow(lam, i, q) * pow(inv, i - 1, q) % q for i in range(1, q - 1)]
    firsts.append((lam - 1) % q)
    diffs = {(firsts[i + 1] - firsts[i]) % q for i in range(len(firsts) - 1)}
    if diffs != set(range(2, q)):
        raise ConstructionFailed(
            "middle_segment", f"differences {sorted(diffs)} miss Z_{q} \\ {{0,1}}"
        )
    return [(x, zero) for x in firsts]


def assemble(inputs: TemplateInputs) -> tuple[SdElem, ...]:
    """Lay the template out in order; makes no validity promise."""
    sd = inputs.sd
    q, m, t = sd.s, sd.base.order, inputs.t
    fcs = first_coordinates(q, inputs.lam)
    out: list[SdElem] = [(0, g) for g in inputs.gs[:t]]
    for j in range(m - 1):
        out.extend((fcs[i], inputs.hss[i][j]) for i in range(q - 1))
    out.extend(middle_segment(q, inputs.lam, sd.base))
    out.extend((0, g) for g in inputs.gs[t:])
    if len(out) != q * m:
        raise ShapeMismatch(f"assembled {len(out)} entries, expected {q * m}")
    return tuple(out)


@dataclass(frozen=True)
class ChecklistReport:
    a: bool
    b: bool
    c: tuple[bool, ...]
    d: bool
    e: tuple[bool, ...]
    f: bool
    g: bool

    @property
    def all_pass(self) -> bool:
        return (
            self.a and self.b and all(self.c) and self.d and all(self.e) and self.f and self.g
        )

    def failures(self) -> tuple[str, ...]:
        out = []
        if not self.a:
            out.append("a")
        if not self.b:
            out.append("b")
        out.extend(f"c[{i + 1}]" for i, ok in enumerate(self.c) if not ok)
        if not self.d:
            out.append("d")
        out.extend(f"e[{i + 2}]" for i, ok in enumerate(self.e) if not ok)
        if not self.f:
            out.append("f")
        if not self.g:
            out.append("g")
        return tuple(out)


def checklist(inputs: TemplateInputs) -> ChecklistReport:
    """Evaluate every coverage family the template requires.

    (a) the first block entry continues the prefix with quotient (1, 0);
    (b) the g values cover A; (c) each h row covers A minus zero; (d) the
    g differences with -h_{q-1,m-1} substituted at the junction cover A
    minus zero; (e) each cross-row difference family covers A minus zero;
    (f) the block-to-block junctions closed by g_{t+1} cover A minus
    zero; (g) the middle segment walks Z_q correctly.
    """
    sd = inputs.sd
    A = sd.base
    alpha = sd.alpha
    q = sd.s
    m, t, lam = A.order, inputs.t, inputs.lam % q
    gs, hss = inputs.gs, inputs.hss
    nonzero = Counter(e for e in A.elements() if e != A.identity)
    full = Counter(A.elements())

    fam_a = hss[0][0] == alpha.apply(gs[t - 1])
    fam_b = Counter(gs) == full
    fam_c = tuple(Counter(row) == nonzero for row in hss)

    dvals = [A.sub(gs[i + 1], gs[i]) for i in range(t - 1)]
    dvals.append(A.neg(hss[q - 2][m - 2]))
    dvals.extend(A.sub(gs[i + 1], gs[i]) for i in range(t, m - 1))
    fam_d = Counter(dvals) == nonzero

    fcs = first_coordinates(q, lam)
    fam_e = []
    for i in range(1, q - 1):
        exp = (fcs[i] - fcs[i - 1]) % q
        vals = [A.sub(hss[i][j], alpha.apply_power(exp, hss[i - 1][j])) for j in range(m - 1)]
        fam_e.append(Counter(vals) == nonzero)

    exp_f = (1 - lam) % q
    fvals = [A.sub(hss[0][j + 1], alpha.apply_power(exp_f, hss[q - 2][j])) for j in range(m - 2)]
    fvals.append(gs[t])
    fam_f = Counter(fvals) == nonzero

    try:
        mids = middle_segment(q, lam, A)
        fam_g = {x for x, _ in mids} == set(range(1, q))
    except ConstructionFailed:
        fam_g = False

    return ChecklistReport(fam_a, fam_b, fam_c, fam_d, tuple(fam_e), fam_f, fam_g)


def theorem4_assign(
    a: RTerrace, c: HashHarmonious, sd: SdSpec, lam: int
) -> TemplateInputs:
    """Fill the template from an R-terrace and a #-harmonious sequence with t=1.

    Requires the two endpoint conditions:
        a_1 = c_1 + c_{m-1} - alpha^{q-1}(c_1)
        a_{m-1} = a_1 - alpha^{lam-1}(c_{m-1})
    The g values are the terrace shifted by alpha^{q-1}(c_1); odd h rows
    copy c and even rows carry -alpha^{lam-1}(c).
    """
    A = sd.base
    alpha = sd.alpha
    q = sd.s
    m = A.order
    if a.group != A or c.group != A:
        raise ShapeMismatch("terrace and sequence must live in the base group")
    if len(a.entries) != m - 1 or len(c.entries) != m - 1:
        raise ShapeMismatch("need m-1 entries in both inputs")
    c1, clast = c.entries[0], c.entries[-1]
    shift = alpha.apply_power(q - 1, c1)
    failures = []
    want1 = A.sub(A.add(c1, clast), shift)
    if a.entries[0] != want1:
        failures.append(("condition 1", f"a_1 = {a.entries[0]}, needs {want1}"))
    want2 = A.sub(a.entries[0], alpha.apply_power((lam - 1) % q, clast))
    if a.entries[-1] != want2:
        failures.append(("condition 2", f"a_last = {a.entries[-1]}, needs {want2}"))
    if failures:
        raise ConditionsViolated(failures)
    gs = (shift,) + tuple(A.add(e, shift) for e in a.entries)
    rows = []
    for i in range(1, q):
        if i % 2 == 1:
            rows.append(tuple(c.entries))
        else:
            rows.append(
                tuple(A.neg(alpha.apply_power((lam - 1) % q, cj)) for cj in c.entries)
            )
    return TemplateInputs(sd, lam, gs, tuple(rows), 1)
