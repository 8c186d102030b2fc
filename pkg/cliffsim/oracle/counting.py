"""Exhaustive census of input Paulis whose every layer image stays inside a region."""
import logging
from typing import Dict, Iterable, List, NamedTuple, Optional

from scipy.special import comb

from ..circuits.clifford import CliffordCircuit
from ..exceptions import SizeCapError, ToleranceError
from ..linalg.gf2 import popcount
from ..linalg.pauli import PauliString

logger = logging.getLogger(__name__)

MAX_REGION = 8


class SwCensus(NamedTuple):
    w: int
    count: int
    bound: int
    members: Optional[List[PauliString]] = None


def _scatter(local: int, qubits: List[int]) -> int:
    out = 0
    for i, q in enumerate(qubits):
        if (local >> i) & 1:
            out |= 1 << q
    return out


def census_by_weight(c: CliffordCircuit, region: Iterable[int]) -> Dict[int, List[PauliString]]:
    """All s with C_t(s) inside ``region`` for every noise layer, keyed by min_t |C_t(s)|."""
    qubits = sorted(set(region))
    if len(qubits) > MAX_REGION:
        raise SizeCapError("census is capped at |A| <= {}, got {}".format(MAX_REGION, len(qubits)))
    if any(not 0 <= q < c.n for q in qubits):
        raise ValueError("region has qubits outside the circuit")
    mask = _scatter((1 << len(qubits)) - 1, qubits)
    k = len(qubits)
    out: Dict[int, List[PauliString]] = {}
    for xl in range(2 ** k):
        x = _scatter(xl, qubits)
        for zl in range(2 ** k):
            s = PauliString(c.n, x, _scatter(zl, qubits))
            supports = c.support_profile(s)
            if any(m & ~mask for m in supports):
                continue
            w = min(popcount(m) for m in supports)
            out.setdefault(w, []).append(s)
    return out


def enumerate_S_w(c: CliffordCircuit, region: Iterable[int], w: int, return_set: bool = False) -> SwCensus:
    region = sorted(set(region))
    members = census_by_weight(c, region).get(w, [])
    bound = c.noise_layers * int(comb(len(region), w, exact=True)) * 3 ** w
    if len(members) > bound:
        raise ToleranceError("|S_{}| = {} exceeds the counting bound {}".format(w, len(members), bound))
    logger.debug("S_%d on %d qubits: %d of at most %d", w, len(region), len(members), bound)
    return SwCensus(w, len(members), bound, members if return_set else None)
