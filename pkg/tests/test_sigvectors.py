"""The shared signature vectors verify under this package's verifier.

The console's test suite asserts it reproduces these exact signatures;
this side asserts the vectors themselves are valid here, closing the
cross-component loop.
"""

import json
from pathlib import Path

from ags.crypto import (
    PrivateKey,
    PublicKey,
    Signature,
    derive_address,
    derive_public,
    get_curve,
    parse_point,
    sign,
    verify,
)

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "sigvectors.json"


def load_vectors():
    return json.loads(FIXTURE.read_text())["vectors"]


def test_every_vector_verifies():
    vectors = load_vectors()
    assert len(vectors) > 30
    for vector in vectors:
        curve = get_curve(vector["curve"])
        pub = PublicKey(parse_point(bytes.fromhex(vector["pubkey"]), curve), curve)
        sig = Signature.from_bytes(bytes.fromhex(vector["sig"]), curve)
        z = bytes.fromhex(vector["z"])
        assert verify(pub, z, sig), vector["kind"]
        assert int(vector["r"], 16) == sig.r
        assert int(vector["s"], 16) == sig.s


def test_vectors_are_reproducible():
    for vector in load_vectors():
        curve = get_curve(vector["curve"])
        priv = PrivateKey(int(vector["d"], 16), curve)
        pub = derive_public(priv)
        assert pub.to_bytes().hex() == vector["pubkey"]
        assert derive_address(pub) == vector["address"]
        sig = sign(priv, bytes.fromhex(vector["z"]))
        assert sig.to_bytes(curve).hex() == vector["sig"]
