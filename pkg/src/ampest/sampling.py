"""Coin tosses from polynomials, with state tracking and query accounting.

Sampling from a polynomial P produces a bit with Pr[1] = |P(a)|^2 plus a
transition among the four tracked states, and charges the query ledger
according to the polynomial's degree, parity, and the input state's basis.
The final basis measurement counts as one query to the output-basis oracle,
so a pellian toss of degree d always charges q_psi + q_pi = d.

Large homogeneous batches (all tosses from the same polynomial at the same
amplitude) are drawn as a single binomial variate: the bit marginal is
state-independent, so this is an exact shortcut and keeps runs replayable
from the seed.
"""

from dataclasses import dataclass
from typing import Union

from .errors import DomainError, KindMismatch
from .grover import GroverLabel, validate_amplitude

REPREPARED = "reprepared"


@dataclass
class QueryLedger:
    """Running counts: oracle queries, max degree, total degree, tosses."""

    q_psi: int = 0
    q_pi: int = 0
    d_max: int = 0
    d_total: int = 0
    tosses: int = 0

    def charge(self, dq_psi, dq_pi, degree, n=1):
        self.q_psi += dq_psi
        self.q_pi += dq_pi
        self.d_total += degree * n
        self.tosses += n
        if degree > self.d_max:
            self.d_max = degree

    def merge(self, other):
        self.q_psi += other.q_psi
        self.q_pi += other.q_pi
        self.d_total += other.d_total
        self.tosses += other.tosses
        if other.d_max > self.d_max:
            self.d_max = other.d_max

    def as_dict(self):
        return {"q_psi": self.q_psi, "q_pi": self.q_pi, "d_max": self.d_max,
                "d_total": self.d_total, "tosses": self.tosses}


@dataclass
class SampleOutcome:
    bit: int
    state_after: Union[GroverLabel, str]


def target_of(state, parity):
    """Target state of a toss: odd swaps the basis, even is the identity."""
    if parity == "odd":
        return GroverLabel(state.value ^ 2)
    if parity == "even":
        return state
    raise DomainError(f"parity must be 'even' or 'odd', got {parity!r}")


def pellian_costs(degree, input_basis_is_pi):
    """(dq_psi, dq_pi) for one pellian toss, measurement query included."""
    k = degree // 2
    if degree % 2 == 1:
        return (k + 1, k) if input_basis_is_pi else (k, k + 1)
    return (k, k)


def semi_pellian_costs(degree, input_basis_is_pi=False):
    """(dq_psi, dq_pi) for one toss via the flag-qubit construction."""
    k = degree // 2
    if degree % 2 == 1:
        return (k + 2, k + 1) if input_basis_is_pi else (k + 1, k + 2)
    return (k, k + 3) if input_basis_is_pi else (k + 3, k)


def sample_pellian(spec, state, a, rng, ledger=None):
    """One toss from a pellian polynomial, tracking the state chain."""
    if spec.kind != "pellian":
        raise KindMismatch(f"family {spec.family!r} is {spec.kind}, not pellian")
    validate_amplitude(a)
    bit = 1 if rng.random() < spec.p2(a) else 0
    tgt = target_of(state, spec.parity)
    after = tgt if bit else GroverLabel(tgt.value ^ 1)
    if ledger is not None:
        dq_psi, dq_pi = pellian_costs(spec.degree, state.basis_is_pi)
        ledger.charge(dq_psi, dq_pi, spec.degree)
    return SampleOutcome(bit, after)


def sample_semi_pellian(spec, a, rng, ledger=None):
    """One destructive toss; the chain restarts from psi afterwards."""
    if spec.kind != "semi-pellian":
        raise KindMismatch(f"family {spec.family!r} is {spec.kind}, not semi-pellian")
    validate_amplitude(a)
    bit = 1 if rng.random() < spec.p2(a) else 0
    if ledger is not None:
        dq_psi, dq_pi = semi_pellian_costs(spec.degree)
        ledger.charge(dq_psi, dq_pi, spec.degree)
    return SampleOutcome(bit, REPREPARED)


_MONOMIAL = None


def monomial_spec():
    global _MONOMIAL
    if _MONOMIAL is None:
        from .polys import build_monomial
        _MONOMIAL = build_monomial()
    return _MONOMIAL


def measure_basis_swap(state, a, rng, ledger=None):
    """Measure in the opposite basis, i.e. sample from P(a) = a."""
    return sample_pellian(monomial_spec(), state, a, rng, ledger).state_after


def count_heads(p2_value, n, rng):
    """Heads among n tosses of a p2_value-coin, as one binomial draw."""
    if not 0.0 <= p2_value <= 1.0:
        raise DomainError(f"probability must be in [0, 1], got {p2_value}")
    return int(rng.binomial(n, p2_value))


def charge_semi_pellian_batch(ledger, degree, n):
    """Ledger entry for n destructive tosses of one semi-pellian polynomial."""
    dq_psi, dq_pi = semi_pellian_costs(degree)
    ledger.charge(dq_psi * n, dq_pi * n, degree, n)


def charge_pellian_batch(ledger, degree, n, input_basis_is_pi=False):
    """Ledger entry for n destructive tosses of one pellian polynomial."""
    dq_psi, dq_pi = pellian_costs(degree, input_basis_is_pi)
    ledger.charge(dq_psi * n, dq_pi * n, degree, n)
