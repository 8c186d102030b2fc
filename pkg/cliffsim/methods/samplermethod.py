import time
from dataclasses import dataclass, field
from typing import List

import numpy as np

from ..exceptions import ConfigError
from ..linalg.gf2 import BitVector

DEFAULT_CUTOFF_LOG2 = 22

MASK64 = (1 << 64) - 1

CSV_FIELDS = ("seed", "shot", "n_depolarized", "n_components", "max_component", "max_rank",
              "aborted", "wall_micros", "bitstring")


def shot_rng(seed: int, index: int) -> np.random.Generator:
    """Philox4x64-10 stream for task ``index`` of a run seeded with ``seed``; key words (seed, index)."""
    return np.random.Generator(np.random.Philox(key=(seed & MASK64) + ((index & MASK64) << 64)))


@dataclass
class RunReport:
    """What one shot did; ``bitstring`` has qubit 0 as its least significant bit."""

    seed: int = 0
    shot: int = 0
    n_depolarized: int = 0
    component_sizes: List[int] = field(default_factory=list)
    ranks: List[int] = field(default_factory=list)
    aborted: bool = False
    wall_micros: int = 0
    bitstring: BitVector = None
    work: int = 0

    @property
    def n_components(self) -> int:
        return len(self.component_sizes)

    @property
    def max_component(self) -> int:
        return max(self.component_sizes, default=0)

    @property
    def max_rank(self) -> int:
        return max(self.ranks, default=0)

    @property
    def group_sizes(self) -> List[int]:
        return [2 ** r for r in self.ranks]

    def hex_bits(self) -> str:
        width = max(1, -(-self.bitstring.length // 4))
        return "{:0{}x}".format(self.bitstring.bits, width)

    def to_row(self, record_timing: bool = True) -> list:
        return [self.seed, self.shot, self.n_depolarized, self.n_components, self.max_component,
                self.max_rank, int(self.aborted), self.wall_micros if record_timing else 0, self.hex_bits()]


class SamplerMethod(object):
    """Base class for exact noisy samplers; subclasses implement ``sample``."""

    def __init__(self, circuit, model, cutoff_log2: int = DEFAULT_CUTOFF_LOG2, **kwargs):
        if cutoff_log2 < 0:
            raise ConfigError("Illegal cutoff_log2.")
        self.circuit = circuit
        self.model = model.validate()
        self.cutoff_log2 = cutoff_log2
        self.n = circuit.n

    def uniform_bits(self, rng: np.random.Generator, qubits) -> dict:
        qubits = list(qubits)
        return dict(zip(qubits, rng.integers(0, 2, size=len(qubits)).tolist()))

    def sample(self, rng: np.random.Generator, **kwargs):
        """Return (BitVector, RunReport) for one shot."""
        raise NotImplementedError

    def run_shot(self, seed: int, shot: int):
        start = time.perf_counter()
        bits, report = self.sample(shot_rng(seed, shot))
        report.seed, report.shot = seed, shot
        report.wall_micros = int((time.perf_counter() - start) * 1e6)
        return bits, report

    @staticmethod
    def assemble(n: int, assignments: dict) -> BitVector:
        value = 0
        for q, b in assignments.items():
            if b:
                value |= 1 << q
        return BitVector(n, value)
