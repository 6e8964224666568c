"""Template layout, checklist coverage families, and the terrace assignment."""

import pytest

from seqlatin.errors import ConditionsViolated, GroupFormatError, ShapeMismatch
from seqlatin.groups import AbelianSpec, Automorphism, ScalarBlock, SdSpec, cyclic
from seqlatin.harmonious import HashHarmonious
from seqlatin.latin import is_directed_terrace
from seqlatin.rotational import make_r_terrace
from seqlatin.template import (
    TemplateInputs,
    assemble,
    checklist,
    first_coordinates,
    middle_segment,
    theorem4_assign,
)

Z7 = cyclic(7)
SD_3_7 = SdSpec(3, Z7, Automorphism((ScalarBlock(7, 2),)))
# verified instance over Z_3 x| Z_7: endpoint conditions hold with lam=2
TERRACE_3_7 = (5, 3, 4, 6, 2, 1)
HASH_3_7 = (6, 4, 5, 1, 3, 2)


def _inputs():
    a = make_r_terrace(Z7, tuple((x,) for x in TERRACE_3_7))
    c = HashHarmonious(Z7, tuple((x,) for x in HASH_3_7))
    return theorem4_assign(a, c, SD_3_7, 2)


def test_first_coordinates():
    assert first_coordinates(3, 2) == [1, 2]
    assert first_coordinates(5, 2) == [1, 3, 4, 2]
    assert first_coordinates(7, 3) == [1, 5, 4, 6, 2, 3]


def test_middle_segment_small():
    assert middle_segment(3, 2) == [(2, ()), (1, ())]
    assert middle_segment(5, 2) == [(2, ()), (4, ()), (3, ()), (1, ())]
    firsts = [x for x, _ in middle_segment(7, 3)]
    assert firsts == [3, 1, 5, 4, 6, 2]
    diffs = {(firsts[i + 1] - firsts[i]) % 7 for i in range(5)}
    assert diffs == {2, 3, 4, 5, 6}


def test_middle_segment_base_zero():
    assert middle_segment(3, 2, Z7) == [(2, (0,)), (1, (0,))]


def test_assign_produces_passing_checklist():
    inputs = _inputs()
    assert inputs.t == 1
    rep = checklist(inputs)
    assert rep.all_pass, rep.failures()


def test_assign_shift_and_rows():
    inputs = _inputs()
    # shift = alpha^2(c_1) = 4 * 6 = 3; g_1 is the bare shift
    assert inputs.gs[0] == (3,)
    assert inputs.gs[1:] == tuple(((x + 3) % 7,) for x in TERRACE_3_7)
    assert inputs.hss[0] == tuple((x,) for x in HASH_3_7)
    # even rows carry -alpha^(lam-1)(c) = -2c
    assert inputs.hss[1] == tuple(((-2 * x) % 7,) for x in HASH_3_7)


def test_assign_row_parity_q5():
    group = cyclic(11)
    sd = SdSpec(5, group, Automorphism((ScalarBlock(11, 3),)))
    from seqlatin.pipelines import sequence_cyclic

    cert = sequence_cyclic(5, 11)
    a = make_r_terrace(group, tuple((x,) for x in cert.provenance["r_terrace"]))
    c = HashHarmonious(group, tuple((x,) for x in cert.provenance["hash"]))
    inputs = theorem4_assign(a, c, cert.group, cert.provenance["lam"])
    assert inputs.hss[0] == inputs.hss[2] == c.entries
    assert inputs.hss[1] == inputs.hss[3]
    assert inputs.hss[1] != inputs.hss[0]


def test_assemble_is_terrace():
    arr = assemble(_inputs())
    assert len(arr) == 21
    assert arr[0] == (0, (3,))
    ok, quots = is_directed_terrace(SD_3_7, arr)
    assert ok
    assert quots[0] == (1, (0,))


def test_assign_rejects_wrong_ends():
    a = make_r_terrace(Z7, tuple((x,) for x in (3, 4, 6, 2, 1, 5)))  # rotated
    c = HashHarmonious(Z7, tuple((x,) for x in HASH_3_7))
    with pytest.raises(ConditionsViolated) as exc:
        theorem4_assign(a, c, SD_3_7, 2)
    assert "condition 1" in str(exc.value)


def test_assign_rejects_wrong_group():
    a = make_r_terrace(Z7, tuple((x,) for x in TERRACE_3_7))
    c = HashHarmonious(cyclic(9), tuple((x,) for x in (1, 2, 4, 8, 7, 5, 3, 6)))
    with pytest.raises(ShapeMismatch):
        theorem4_assign(a, c, SD_3_7, 2)


def test_checklist_flags_broken_row():
    inputs = _inputs()
    rows = [list(map(tuple, row)) for row in inputs.hss]
    rows[0][2] = rows[0][1]  # duplicate kills the coverage of row 1
    broken = TemplateInputs(
        inputs.sd, inputs.lam, inputs.gs, tuple(tuple(r) for r in rows), inputs.t
    )
    rep = checklist(broken)
    assert not rep.all_pass
    assert "c[1]" in rep.failures()
    ok, _ = is_directed_terrace(SD_3_7, assemble(broken))
    assert not ok


def test_checklist_flags_broken_gs():
    inputs = _inputs()
    gs = list(inputs.gs)
    gs[3] = gs[2]
    broken = TemplateInputs(inputs.sd, inputs.lam, gs=tuple(gs), hss=inputs.hss, t=1)
    rep = checklist(broken)
    assert not rep.b or not rep.d


def test_inputs_validate_shapes():
    inputs = _inputs()
    with pytest.raises(ShapeMismatch):
        TemplateInputs(inputs.sd, inputs.lam, inputs.gs[:-1], inputs.hss, 1)
    with pytest.raises(ShapeMismatch):
        TemplateInputs(inputs.sd, inputs.lam, inputs.gs, inputs.hss[:1], 1)
    with pytest.raises(ShapeMismatch):
        TemplateInputs(inputs.sd, inputs.lam, inputs.gs, inputs.hss, 0)


def test_inputs_validate_lambda():
    inputs = _inputs()
    with pytest.raises(GroupFormatError):
        TemplateInputs(inputs.sd, 1, inputs.gs, inputs.hss, 1)


def test_checklist_matches_checker_on_random_grids():
    # the equivalence goes both ways: scrambled grids that happen to pass
    # every family must assemble to genuine terraces, failures must not
    import random

    rng = random.Random(7)
    base = _inputs()
    for _ in range(25):
        rows = [list(map(tuple, row)) for row in base.hss]
        i = rng.randrange(len(rows))
        j, k = rng.randrange(6), rng.randrange(6)
        rows[i][j], rows[i][k] = rows[i][k], rows[i][j]
        cand = TemplateInputs(
            base.sd, base.lam, base.gs, tuple(tuple(r) for r in rows), base.t
        )
        ok, _ = is_directed_terrace(SD_3_7, assemble(cand))
        assert ok == checklist(cand).all_pass
