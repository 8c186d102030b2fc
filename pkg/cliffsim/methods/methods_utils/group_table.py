"""Vectorized table of a surviving Pauli group restricted to one component.

Each row is one element s of <G_j>, carrying Tr(rho s) * sign(C(s)) and the
single-qubit symbols of C(s) over the component's qubits (0 I, 1 X, 2 Z, 3 Y).
"""
import numpy as np

from ...exceptions import ToleranceError

PROB_TOL = 1e-9

# symbol code -> Bloch axis column, with a leading 1 for the identity
_AXIS_ORDER = (0, 2, 1)


def _product_phase(x1, z1, x2, z2):
    x3, z3 = x1 ^ x2, z1 ^ z2
    count = np.count_nonzero
    return (count(x1 & z1, axis=-1) + count(x2 & z2, axis=-1)
            + 2 * count(z1 & x2, axis=-1) - count(x3 & z3, axis=-1))


def _with_identity(vectors: np.ndarray) -> np.ndarray:
    """(m, 3) Bloch data -> (m, 4) lookup indexed by symbol code."""
    out = np.ones((vectors.shape[0], 4))
    out[:, 1:] = vectors[:, _AXIS_ORDER]
    return out


def clamp_probability(p: float) -> float:
    if p < -PROB_TOL or p > 1 + PROB_TOL:
        raise ToleranceError("probability {!r} outside [0, 1] beyond tolerance".format(p))
    return min(1.0, max(0.0, p))


class GroupTable(object):

    def __init__(self, coef: np.ndarray, codes: np.ndarray):
        self.coef = coef
        self.codes = codes

    def __len__(self):
        return self.coef.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.codes.shape[1]

    @classmethod
    def build(cls, in_x, in_z, out_x, out_z, out_phase, bloch) -> "GroupTable":
        """Enumerate <s_1..s_r> by doubling, one row-XOR per new element.

        ``in_*`` are the phase-0 generators, ``out_*`` with ``out_phase`` give
        C(s_k) = i**out_phase P(out_x, out_z). All bit arrays are (r, m) bool.
        """
        r, m = in_x.shape
        sx = np.zeros((1, m), dtype=bool)
        sz = np.zeros((1, m), dtype=bool)
        cx = np.zeros((1, m), dtype=bool)
        cz = np.zeros((1, m), dtype=bool)
        sa = np.zeros(1, dtype=np.int64)
        cb = np.zeros(1, dtype=np.int64)
        for k in range(r):
            sa = np.concatenate([sa, sa + _product_phase(sx, sz, in_x[k], in_z[k])])
            cb = np.concatenate([cb, cb + int(out_phase[k]) + _product_phase(cx, cz, out_x[k], out_z[k])])
            sx = np.concatenate([sx, sx ^ in_x[k]])
            sz = np.concatenate([sz, sz ^ in_z[k]])
            cx = np.concatenate([cx, cx ^ out_x[k]])
            cz = np.concatenate([cz, cz ^ out_z[k]])
        rel = (cb - sa) & 3
        if np.any(rel & 1):
            raise ToleranceError("imaginary sign on a conjugated group element")
        sign = 1.0 - rel
        in_codes = sx.astype(np.uint8) | (sz.astype(np.uint8) << 1)
        lookup = _with_identity(np.asarray(bloch, dtype=float))
        trace = np.prod(lookup[np.arange(m), in_codes], axis=1)
        codes = cx.astype(np.uint8) | (cz.astype(np.uint8) << 1)
        return cls(trace * sign, codes)

    def _mu(self, axes):
        mu0 = _with_identity(np.asarray(axes, dtype=float))
        mu1 = mu0.copy()
        mu1[:, 1:] *= -1
        return mu0, mu1

    def marginal_probability(self, axes, assignment) -> float:
        """p(z_A) for ``assignment`` mapping local qubit -> bit."""
        m = self.n_qubits
        a_mask = np.zeros(m, dtype=bool)
        a_mask[list(assignment)] = True
        keep = ~np.any(self.codes[:, ~a_mask] != 0, axis=1)
        mu = self._mu(axes)
        vals = self.coef[keep].copy()
        for q, z in assignment.items():
            vals *= mu[z][q, self.codes[keep, q]]
        return clamp_probability(float(vals.sum()) / 2 ** len(assignment))

    def distribution(self, axes) -> np.ndarray:
        """Full 2^m outcome distribution, local qubit 0 as the least significant bit."""
        mu0, mu1 = self._mu(axes)
        vals = self.coef[:, None]
        for q in range(self.n_qubits):
            col = self.codes[:, q]
            vals = np.concatenate([vals * mu0[q, col][:, None], vals * mu1[q, col][:, None]], axis=1)
        p = vals.sum(axis=0) / 2 ** self.n_qubits
        return np.array([clamp_probability(v) for v in p])

    def sample(self, axes, rng: np.random.Generator) -> np.ndarray:
        """Draw local bits in ascending order from exact conditionals."""
        m = self.n_qubits
        mu = self._mu(axes)
        nonzero = self.codes != 0
        last = np.where(nonzero.any(axis=1), m - 1 - np.argmax(nonzero[:, ::-1], axis=1), -1)
        order = np.argsort(last, kind="stable")
        coef, codes, last = self.coef[order], self.codes[order], last[order]
        ends = np.searchsorted(last, np.arange(m), side="right")
        running = np.ones(len(coef))
        bits = np.zeros(m, dtype=np.uint8)
        for k in range(m):
            end = ends[k]
            col = codes[:end, k]
            base = coef[:end] * running[:end]
            scale = 2.0 ** -(k + 1)
            p0 = clamp_probability(float(base @ mu[0][k, col]) * scale)
            p1 = clamp_probability(float(base @ mu[1][k, col]) * scale)
            total = p0 + p1
            if total <= 0:
                raise ToleranceError("sampled prefix has zero probability")
            bits[k] = rng.random() >= p0 / total
            running *= mu[bits[k]][k, codes[:, k]]
        return bits
