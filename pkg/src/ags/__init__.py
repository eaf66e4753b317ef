"""Multi-party governance of SLA measurement reports.

Identified parties reach signed, weighted consensus on versioned
measurement reports; a small rule language turns the agreed report into a
payable statement; every artifact digest is anchored in a tamper-evident
hash chain, and all state is a deterministic replay of a signed event log.
"""

__version__ = "0.1.0"
