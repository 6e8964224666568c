"""Certificates from the cyclic, product, and spectrum pipelines."""

import json

import pytest

from seqlatin.errors import (
    Diagonalisable,
    DeskScaleExceeded,
    NoSuchUnit,
    NotIndependent,
    OrderMismatch,
)
from seqlatin.groups import AbelianSpec, SdSpec, cyclic
from seqlatin.latin import (
    completeness_report,
    is_directed_terrace,
    terrace_to_complete_square,
)
from seqlatin.pipelines import (
    NoGroupBasedCLS,
    SequencingCertificate,
    TrivialOrder,
    build_nondiag_aut,
    pair_transport,
    sequence_cyclic,
    sequence_non3,
    sequence_order,
    sequence_theorem3,
)


def _assert_certificate(cert, order):
    assert isinstance(cert, SequencingCertificate)
    assert cert.group.order == order
    assert len(cert.terrace) == order
    ok, quots = is_directed_terrace(cert.group, cert.terrace)
    assert ok
    assert tuple(quots) == cert.sequencing
    json.dumps(cert.to_json())  # provenance must stay serializable


def test_cyclic_named_pairs():
    for q, m in ((3, 7), (3, 9), (3, 13), (5, 11), (7, 29)):
        cert = sequence_cyclic(q, m)
        _assert_certificate(cert, q * m)
        rep = completeness_report(terrace_to_complete_square(cert.group, cert.terrace))
        assert rep.is_complete


def test_cyclic_routes():
    # the principal endpoint allocations go dead exactly when every unit
    # of order q is 1 mod each prime-power component they depend on
    assert sequence_cyclic(3, 7).provenance["route"] == "principal"
    for m in (9, 45, 81):
        cert = sequence_cyclic(3, m)
        assert cert.provenance["route"] == "extended"
        _assert_certificate(cert, 3 * m)


def test_cyclic_provenance_fields():
    cert = sequence_cyclic(5, 11)
    p = cert.provenance
    assert p["pipeline"] == "cyclic" and p["q"] == 5 and p["m"] == 11
    assert pow(p["r"], 5, 11) == 1 and p["r"] != 1
    assert sorted(p["graceful"]) == list(range(1, 6))
    assert len(p["r_terrace"]) == 10 and len(p["hash"]) == 10
    assert p["a1"] == p["r_terrace"][0]
    assert p["alast"] == p["r_terrace"][-1]


def test_cyclic_deterministic():
    a = sequence_cyclic(3, 13)
    b = sequence_cyclic(3, 13)
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(
        b.to_json(), sort_keys=True
    )


def test_cyclic_rejects_bad_parameters():
    with pytest.raises(ValueError):
        sequence_cyclic(4, 7)
    with pytest.raises(ValueError):
        sequence_cyclic(3, 8)
    with pytest.raises(NoSuchUnit):
        sequence_cyclic(3, 5)  # no unit of order 3 mod 5


def test_nondiag_aut_example():
    na = build_nondiag_aut(5, 2, 3)
    assert na.companion == ((0, 4), (1, 4))
    assert na.alpha.blocks[0].mat == ((0, 4), (1, 4))
    assert na.d == 2
    assert na.alpha.order == 3
    assert na.basis_change == ((1, 0), (0, 1))


def test_nondiag_aut_power_relation():
    # alpha^(lam-1) must be the companion block itself
    na = build_nondiag_aut(3, 6, 7)
    assert na.d == 6
    cols = [
        na.alpha.apply_power(2, tuple(1 if i == j else 0 for i in range(6)))
        for j in range(6)
    ]
    assert tuple(tuple(col[i] for col in cols) for i in range(6)) == na.companion


def test_nondiag_aut_errors():
    with pytest.raises(Diagonalisable):
        build_nondiag_aut(7, 2, 3)  # 7 = 1 mod 3
    with pytest.raises(ValueError):
        build_nondiag_aut(5, 1, 3)  # needs k >= 2
    with pytest.raises(ValueError):
        build_nondiag_aut(4, 2, 3)


def test_pair_transport_examples():
    g = AbelianSpec((5, 5))
    psi = pair_transport(g, ((1, 0), (0, 1)), ((2, 0), (0, 2)))
    assert psi.blocks[0].mat == ((2, 0), (0, 2))
    ident = pair_transport(g, ((1, 3), (2, 2)), ((1, 3), (2, 2)))
    assert ident.blocks[0].mat == ((1, 0), (0, 1))
    src, dst = ((1, 2), (3, 2)), ((4, 0), (2, 3))
    psi = pair_transport(g, src, dst)
    assert psi.apply(src[0]) == dst[0]
    assert psi.apply(src[1]) == dst[1]


def test_pair_transport_cofactors_fixed():
    g = AbelianSpec((5, 5, 7))
    psi = pair_transport(g, ((1, 0, 0), (0, 1, 0)), ((0, 1, 0), (1, 0, 0)))
    assert psi.apply((0, 0, 3)) == (0, 0, 3)


def test_pair_transport_errors():
    g = AbelianSpec((5, 5))
    with pytest.raises(NotIndependent):
        pair_transport(g, ((1, 0), (2, 0)), ((1, 0), (0, 1)))
    with pytest.raises(OrderMismatch):
        pair_transport(AbelianSpec((5, 7)), ((1, 0), (0, 1)), ((1, 0), (0, 1)))
    with pytest.raises(OrderMismatch):
        # order-5 pair but the leading factor is Z_7
        pair_transport(AbelianSpec((7, 5)), ((0, 1), (0, 2)), ((0, 1), (0, 2)))
    with pytest.raises(OrderMismatch):
        # order-5 element outside the leading Z_5 block
        pair_transport(AbelianSpec((5, 35)), ((1, 0), (0, 7)), ((1, 0), (0, 7)))


def test_non3_order_75():
    cert = sequence_non3(5, 2, 3)
    _assert_certificate(cert, 75)
    p = cert.provenance
    assert p["pipeline"] == "non3"
    assert p["alpha_block"] == [[0, 4], [1, 4]]
    assert p["base_source"].startswith("searched")
    assert len(p["psi"]) == 2


def test_non3_order_525():
    cert = sequence_non3(5, 2, 3, AbelianSpec((7,)))
    _assert_certificate(cert, 525)
    assert cert.provenance["b"] == [7]
    assert cert.group.base.factors == (5, 5, 7)


def test_non3_deterministic():
    a = sequence_non3(5, 2, 3)
    b = sequence_non3(5, 2, 3)
    assert a.terrace == b.terrace and a.provenance == b.provenance


def test_non3_rejects_bad_parameters():
    with pytest.raises(ValueError):
        sequence_non3(3, 2, 3)
    with pytest.raises(ValueError):
        sequence_non3(5, 1, 3)  # 5 is not 1 mod 3
    with pytest.raises(ValueError):
        sequence_non3(5, 2, 3, AbelianSpec((9,)))
    with pytest.raises(ValueError):
        sequence_non3(5, 2, 3, AbelianSpec((4,)))
    with pytest.raises(Diagonalisable):
        sequence_non3(7, 2, 3)


def test_theorem3_order_225():
    cert = sequence_theorem3(5, 3)
    _assert_certificate(cert, 225)
    p = cert.provenance
    assert p["pipeline"] == "theorem3" and not p["nine"]
    assert p["walecki_k"] == 7
    assert p["star_index"] == 9
    assert cert.group.base.factors == (5, 5, 3)


def test_theorem3_order_675():
    cert = sequence_theorem3(5, 3, nine=True)
    _assert_certificate(cert, 675)
    p = cert.provenance
    assert p["nine"]
    assert len(p["searched_base"]) == 44
    assert cert.group.base.factors == (5, 5, 9)


def test_theorem3_rejects_bad_parameters():
    with pytest.raises(ValueError):
        sequence_theorem3(3, 3)
    with pytest.raises(ValueError):
        sequence_theorem3(7, 5)  # 49 is not 1 mod 5
    with pytest.raises(Diagonalisable):
        sequence_theorem3(7, 3)  # 7 = 1 mod 3
    with pytest.raises(ValueError):
        sequence_theorem3(5, 3, AbelianSpec((3,)))


def test_walecki_star_for_3p():
    # the lifted graceful zig-zag of Z_3p stars at 0-based 2p - 1
    from seqlatin.graceful import graceful_to_r_terrace, walecki_graceful
    from seqlatin.rotational import check_r_terrace, transform

    for p in (5, 7):
        lift = graceful_to_r_terrace(walecki_graceful((3 * p - 1) // 2))
        res = check_r_terrace(lift.group, lift.entries)
        assert 2 * p - 1 in res.star_indices
        assert transform(lift, "rotate", 2 * p - 1).is_standard


def test_order_dispatch():
    assert isinstance(sequence_order(1), TrivialOrder)
    even = sequence_order(6)
    _assert_certificate(even, 6)
    assert even.provenance["pipeline"] == "walecki"
    neg = sequence_order(15)
    assert isinstance(neg, NoGroupBasedCLS)
    assert neg.order == 15
    cyc = sequence_order(21)
    _assert_certificate(cyc, 21)
    assert cyc.provenance["pipeline"] == "cyclic"
    prod = sequence_order(75)
    _assert_certificate(prod, 75)
    assert prod.provenance["pipeline"] == "non3"
    t3 = sequence_order(225)
    _assert_certificate(t3, 225)
    assert t3.provenance["pipeline"] == "theorem3"


def test_order_desk_cap():
    with pytest.raises(DeskScaleExceeded):
        sequence_order(5001)
    assert isinstance(sequence_order(5001, desk_limit=6000), NoGroupBasedCLS)
    with pytest.raises(ValueError):
        sequence_order(0)


def test_certificate_json_shape():
    cert = sequence_cyclic(3, 7)
    doc = cert.to_json()
    assert "semidirect" in doc["group"]
    assert len(doc["terrace"]) == 21
    assert len(doc["sequencing"]) == 20
    assert doc["provenance"]["pipeline"] == "cyclic"
