"""Shared fixtures: toy-curve actors, a standard policy, the uptime rule."""

from decimal import Decimal

import pytest

from ags.codec import MeasurementReport
from ags.consensus import GovernanceBook, GovernancePolicy
from ags.crypto import TOY, PrivateKey
from ags.signing import Actor

UPTIME_PENALTY_PROGRAM = """\
param base = 1000
param C = 100
metric U
payable: if U >= 99.9 then base else base - C * (99.9 - U)
"""


@pytest.fixture(scope="session")
def actors():
    """Three deterministic toy-curve actors: alice, bob, carol."""
    return {name: Actor(PrivateKey(d, TOY)) for name, d in [("alice", 3), ("bob", 7), ("carol", 11)]}


@pytest.fixture()
def policy(actors):
    return GovernancePolicy(
        participants={
            actors["alice"].address: 2,
            actors["bob"].address: 1,
            actors["carol"].address: 1,
        },
        approval_threshold=3,
        proposer_roles=frozenset({actors["alice"].address}),
    )


@pytest.fixture()
def book():
    return GovernanceBook(TOY)


def make_report(contract_id, author, period="2023-04", version=1, uptime="99.4", **kw):
    return MeasurementReport(
        contract_id=contract_id,
        period_id=period,
        metrics={"U": Decimal(uptime)},
        author=author,
        version=version,
        **kw,
    )


def ts(i: int) -> str:
    return f"2024-03-01T10:{i // 60:02d}:{i % 60:02d}.000000Z"
