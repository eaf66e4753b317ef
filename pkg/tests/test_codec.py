"""Report canonicalization: hand-assembled layout and injectivity."""

from decimal import Decimal

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ags.codec import (
    CodecError,
    MeasurementReport,
    canonical_bytes,
    canonical_json,
    payload_digest,
    report_digest,
    report_from_json,
    report_to_json,
)
from ags.crypto import PrivateKey, TOY, derive_address, derive_public, sha256

AUTHOR = derive_address(derive_public(PrivateKey(7, TOY)))
CONTRACT = sha256(b"contract-under-test")


def make_report(**overrides):
    base = dict(
        contract_id=CONTRACT,
        period_id="2023-04",
        metrics={"U": Decimal("99.4")},
        author=AUTHOR,
        version=1,
        notes="",
        attachment_digests=(),
    )
    base.update(overrides)
    return MeasurementReport(**base)


def frame(code: int, payload: bytes) -> bytes:
    return bytes([code]) + len(payload).to_bytes(4, "big") + payload


def test_empty_metrics_layout_hand_assembled():
    report = make_report(metrics={})
    expected = (
        frame(0x01, CONTRACT)
        + frame(0x02, b"2023-04")
        + frame(0x03, (1).to_bytes(4, "big"))
        + frame(0x04, AUTHOR.encode())
        + frame(0x05, b"")
        + frame(0x06, b"")
        + frame(0x07, b"")
    )
    assert canonical_bytes(report) == expected
    assert report_digest(report) == sha256(expected)


def test_metric_entry_layout_hand_assembled():
    report = make_report(metrics={"U": Decimal("99.4")})
    entry = (1).to_bytes(2, "big") + b"U" + b"\x00\x01\x00\x00\x00\x02\x03\xe2"
    assert frame(0x05, entry) in canonical_bytes(report)


def test_metric_order_does_not_matter():
    r1 = make_report(metrics={"a": Decimal("1"), "b": Decimal("2")})
    r2 = make_report(metrics={"b": Decimal("2"), "a": Decimal("1")})
    assert canonical_bytes(r1) == canonical_bytes(r2)
    assert report_digest(r1) == report_digest(r2)


def test_trailing_zero_scale_is_normalized():
    r1 = make_report(metrics={"U": Decimal("2.50")})
    r2 = make_report(metrics={"U": Decimal("2.5")})
    assert canonical_bytes(r1) == canonical_bytes(r2)


def test_one_ulp_change_differs_at_predictable_offset():
    r1 = make_report(metrics={"U": Decimal("99.4")})
    r2 = make_report(metrics={"U": Decimal("99.5")})
    b1, b2 = canonical_bytes(r1), canonical_bytes(r2)
    assert len(b1) == len(b2)
    # last magnitude byte of the only metric, followed by the two empty
    # 5-byte notes/attachments frames
    diff = [i for i in range(len(b1)) if b1[i] != b2[i]]
    assert diff == [len(b1) - 11]
    assert report_digest(r1) != report_digest(r2)


def test_validation_errors():
    with pytest.raises(CodecError):
        make_report(contract_id=b"short")
    with pytest.raises(CodecError):
        make_report(period_id="")
    with pytest.raises(CodecError):
        make_report(version=0)
    with pytest.raises(CodecError):
        make_report(metrics={"bad name": Decimal(1)})
    with pytest.raises(CodecError):
        make_report(metrics={"": Decimal(1)})
    with pytest.raises(CodecError):
        make_report(metrics={"x": Decimal("NaN")})
    with pytest.raises(CodecError):
        make_report(metrics={"x": Decimal("0.0000000001")})
    with pytest.raises(CodecError):
        make_report(author="not-an-address")
    with pytest.raises(CodecError):
        make_report(attachment_digests=(b"tiny",))


def test_json_round_trip():
    report = make_report(
        metrics={"U": Decimal("99.40"), "tickets": Decimal("3")},
        notes="observed dip",
        attachment_digests=(sha256(b"scan"),),
    )
    obj = report_to_json(report)
    again = report_from_json(obj)
    assert canonical_bytes(again) == canonical_bytes(report)
    assert obj["metrics"]["U"] == "99.4"  # canonical in interchange too
    with pytest.raises(CodecError):
        report_from_json({"period_id": "x"})


def test_canonical_json_is_order_and_whitespace_independent():
    a = canonical_json({"b": 1, "a": [1, 2, {"z": None}]})
    b = canonical_json({"a": [1, 2, {"z": None}], "b": 1})
    assert a == b
    assert b" " not in a
    assert payload_digest({"b": 1, "a": [1, 2, {"z": None}]}) == sha256(a)


metric_names = st.from_regex(r"[a-z_][a-z0-9_]{0,6}", fullmatch=True)
metric_values = st.decimals(
    min_value=-10**6, max_value=10**6, allow_nan=False, allow_infinity=False, places=3
)


@given(
    st.dictionaries(metric_names, metric_values, max_size=4),
    st.dictionaries(metric_names, metric_values, max_size=4),
    st.integers(min_value=1, max_value=5),
    st.integers(min_value=1, max_value=5),
)
def test_injectivity_random_pairs(m1, m2, v1, v2):
    r1 = make_report(metrics=m1, version=v1)
    r2 = make_report(metrics=m2, version=v2)
    normalized1 = (v1, sorted((k, str(canon_v(v))) for k, v in m1.items()))
    normalized2 = (v2, sorted((k, str(canon_v(v))) for k, v in m2.items()))
    if normalized1 == normalized2:
        assert canonical_bytes(r1) == canonical_bytes(r2)
    else:
        assert canonical_bytes(r1) != canonical_bytes(r2)


def canon_v(value):
    from ags.decimals import canon

    return canon(value)
