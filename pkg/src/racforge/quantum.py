"""Dense qubit linear algebra, Pauli strings and QRAC constructions.

Conventions: a Pauli string ``"XZ"`` is read left to right, leftmost letter
on the most significant tensor factor.  Message bit ``j`` (integer bit ``j``
of the basis index, ``j = 0`` least significant) lives on tensor factor
``k - 1 - j``; :func:`qubit_op` places single-qubit operators by bit index.
"""

from __future__ import annotations

import itertools
import json
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .codes import ClassicalCode, InvariantError

MAX_QUBITS = 7
HERM_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
CLIP_TOL = 1e-9

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    letters: str
    phase: complex = 1

    def __post_init__(self):
        if set(self.letters) - set("IXYZ"):
            raise ValueError(f"bad Pauli letters {self.letters!r}")
        if self.phase not in (1, -1, 1j, -1j):
            raise ValueError(f"phase must be a fourth root of unity, got {self.phase}")

    @property
    def k(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return set(self.letters) <= {"I"}

    def __str__(self) -> str:
        prefix = {1: "", -1: "-", 1j: "i", -1j: "-i"}[self.phase]
        return prefix + self.letters


def pauli_matrix(p: PauliString | str) -> np.ndarray:
    if isinstance(p, str):
        p = PauliString(p)
    if p.k > MAX_QUBITS:
        raise ValueError(f"at most {MAX_QUBITS} qubits supported, got {p.k}")
    if p.k == 0:
        return np.array([[p.phase]], dtype=complex)
    return p.phase * reduce(np.kron, (_SINGLE[c] for c in p.letters))


def qubit_op(k: int, ops: dict[int, str]) -> np.ndarray:
    """Tensor product with ``ops[j]`` on the qubit carrying message bit j."""
    letters = ["I"] * k
    for j, c in ops.items():
        if not 0 <= j < k:
            raise ValueError(f"qubit {j} out of range for k = {k}")
        letters[k - 1 - j] = c
    return pauli_matrix("".join(letters))


def _check_hermitian(M: np.ndarray, tol: float) -> None:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(M))))
    if np.max(np.abs(M - M.conj().T)) > tol * scale:
        raise ValueError("matrix is not Hermitian")


def jacobi_eigh(M: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100):
    """Cyclic complex Jacobi: (eigenvalues ascending, eigenvectors as columns)."""
    A = np.array(M, dtype=complex)
    _check_hermitian(A, 1e-8)
    A = 0.5 * (A + A.conj().T)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(A)))
    for _ in range(max_sweeps):
        off = A - np.diag(np.diag(A))
        if np.linalg.norm(off) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                phase = apq / r
                tau = (A[q, q].real - A[p, p].real) / (2 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1 + tau * tau))
                c = 1 / math.sqrt(1 + t * t)
                s = t * c
                # V2 = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                V2 = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ V2
                A[idx, :] = V2.conj().T @ A[idx, :]
                A[q, p] = A[p, q] = 0
                V[:, idx] = V[:, idx] @ V2
    w = np.diag(A).real.copy()
    order = np.argsort(w)
    return w[order], V[:, order]


def hermitian_eigenvalues(M: np.ndarray, method: str = "jacobi") -> list[float]:
    """Sorted real spectrum of a Hermitian matrix.

    ``method="lapack"`` defers to ``numpy.linalg.eigvalsh``; the invariant
    checks use it because Jacobi sweeps in Python are slow at 128 x 128.
    """
    if method == "jacobi":
        return [float(v) for v in jacobi_eigh(M)[0]]
    if method == "lapack":
        _check_hermitian(M, 1e-8)
        return [float(v) for v in np.linalg.eigvalsh(0.5 * (M + np.conj(M).T))]
    raise ValueError(f"unknown method {method!r}")


@dataclass
class QuantumCode:
    """States ``rho(b)`` indexed by integer b and POVM pairs ``(E_i^0, E_i^1)``."""

    L: int
    k: int
    states: np.ndarray  # (2^L, 2^k, 2^k)
    povms: np.ndarray  # (L, 2, 2^k, 2^k)
    family: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.states = np.asarray(self.states, dtype=complex)
        self.povms = np.asarray(self.povms, dtype=complex)
        self.validate()

    @property
    def dim(self) -> int:
        return 1 << self.k

    def validate(self) -> None:
        d = self.dim
        if self.k > MAX_QUBITS:
            raise InvariantError(f"k = {self.k} exceeds {MAX_QUBITS} qubits")
        if self.states.shape != (1 << self.L, d, d):
            raise InvariantError(f"states have shape {self.states.shape}, expected {(1 << self.L, d, d)}")
        if self.povms.shape != (self.L, 2, d, d):
            raise InvariantError(f"povms have shape {self.povms.shape}, expected {(self.L, 2, d, d)}")
        eye = np.eye(d)
        for b, rho in enumerate(self.states):
            if np.max(np.abs(rho - rho.conj().T)) > HERM_TOL:
                raise InvariantError(f"state for b={b} is not Hermitian")
            if abs(np.trace(rho) - 1) > TRACE_TOL:
                raise InvariantError(f"state for b={b} has trace {np.trace(rho).real:.12g}")
            if min(hermitian_eigenvalues(rho, "lapack")) < -PSD_TOL:
                raise InvariantError(f"state for b={b} is not positive semidefinite")
        for i, (E0, E1) in enumerate(self.povms):
            for x, E in ((0, E0), (1, E1)):
                if np.max(np.abs(E - E.conj().T)) > HERM_TOL:
                    raise InvariantError(f"POVM element E_{i}^{x} is not Hermitian")
                if min(hermitian_eigenvalues(E, "lapack")) < -PSD_TOL:
                    raise InvariantError(f"POVM element E_{i}^{x} is not positive semidefinite")
            if np.max(np.abs(E0 + E1 - eye)) > HERM_TOL:
                raise InvariantError(f"POVM for bit {i} does not sum to the identity")

    def to_dict(self) -> dict:
        def enc(M):
            return [[[float(z.real), float(z.imag)] for z in row] for row in M]

        return {
            "type": "quantum-rac",
            "L": self.L,
            "k": self.k,
            "family": self.family,
            "bit_order": "state index = integer value of b, b_0 least significant; "
                         "message bit j on tensor factor k-1-j",
            "states": [enc(r) for r in self.states],
            "povms": [[enc(E0), enc(E1)] for E0, E1 in self.povms],
            "metadata": self.metadata,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> QuantumCode:
        if d.get("type") != "quantum-rac":
            raise InvariantError(f"not a quantum code file (type={d.get('type')!r})")

        def dec(M):
            a = np.asarray(M, dtype=float)
            if a.ndim != 3 or a.shape[-1] != 2:
                raise InvariantError("matrix entries must be [re, im] pairs")
            return a[..., 0] + 1j * a[..., 1]

        states = np.array([dec(r) for r in d["states"]])
        povms = np.array([[dec(E0), dec(E1)] for E0, E1 in d["povms"]])
        return cls(int(d["L"]), int(d["k"]), states, povms, d.get("family", ""), d.get("metadata", {}))

    @classmethod
    def from_json(cls, text: str) -> QuantumCode:
        return cls.from_dict(json.loads(text))


def qrac_success_table(code: QuantumCode) -> np.ndarray:
    """(2^L, L) array of tr(E_i^{b_i} rho(b))."""
    # probs[b, i, x] = tr(E_i^x rho(b))
    probs = np.einsum("ixjk,bkj->bix", code.povms, code.states)
    if np.max(np.abs(probs.imag)) > CLIP_TOL:
        raise InvariantError("measurement probabilities have an imaginary part")
    probs = probs.real
    bits = (np.arange(1 << code.L)[:, None] >> np.arange(code.L)) & 1
    table = np.take_along_axis(probs, bits[:, :, None], axis=2)[:, :, 0]
    bad = np.argwhere((table < -CLIP_TOL) | (table > 1 + CLIP_TOL))
    if len(bad):
        b, i = bad[0]
        raise InvariantError(f"probability {table[b, i]} outside [0, 1] at b={b}, i={i}")
    return np.clip(table, 0.0, 1.0)


def qrac_success(code: QuantumCode) -> tuple[float, float]:
    table = qrac_success_table(code)
    return float(np.mean(table)), float(np.min(table))


def pauli_alphabet(k: int, mode: str) -> list[str]:
    """Non-identity strings in lexicographic order (I < X < Y < Z)."""
    letters = {"classical": "IZ", "quantum": "IXYZ"}.get(mode)
    if letters is None:
        raise ValueError(f"mode must be 'classical' or 'quantum', got {mode!r}")
    return ["".join(t) for t in itertools.product(letters, repeat=k) if set(t) != {"I"}]


def liabotro_qrac(L: int, k: int, mode: str = "quantum", paulis: Sequence[str] | None = None) -> QuantumCode:
    """rho(b) = I/2^k + sum_i (-1)^{b_i} xi_i / (2^k sqrt((2^k - 1) L)),
    E_i^x = (I + (-1)^x xi_i) / 2."""
    if k < 1 or L < 1:
        raise ValueError("need L, k >= 1")
    alphabet = pauli_alphabet(k, mode)
    if paulis is None:
        if L > len(alphabet):
            raise ValueError(f"L = {L} exceeds the {len(alphabet)} non-identity {mode} Pauli strings on {k} qubits")
        paulis = alphabet[:L]
    paulis = list(paulis)
    if len(paulis) != L:
        raise ValueError(f"need {L} Pauli strings, got {len(paulis)}")
    if len(set(paulis)) != L:
        raise ValueError("Pauli strings must be distinct")
    for p in paulis:
        if p not in alphabet:
            raise ValueError(f"{p!r} is not a non-identity {mode} Pauli string on {k} qubits")
    d = 1 << k
    xis = np.array([pauli_matrix(p) for p in paulis])
    coef = 1 / (d * math.sqrt((d - 1) * L))
    signs = 1 - 2 * ((np.arange(1 << L)[:, None] >> np.arange(L)) & 1)  # (-1)^{b_i}
    states = np.eye(d) / d + coef * np.einsum("bi,ijk->bjk", signs, xis)
    eye = np.eye(d)
    povms = np.array([[(eye + xi) / 2, (eye - xi) / 2] for xi in xis])
    return QuantumCode(L, k, states, povms, f"liabotro-{mode}", {"paulis": paulis})


def llm1_unitary(L: int, include_endpoint: bool = True) -> np.ndarray:
    """(I + sum_{j<L-1} X_j Z_0 ... Z_j) / sqrt(L) on k = L-1 qubits.

    ``include_endpoint=False`` drops Z_j from the product (the alternative
    reading of the Z-string).
    """
    k = L - 1
    d = 1 << k
    U = np.eye(d, dtype=complex)
    for j in range(k):
        Zs = np.eye(d, dtype=complex)
        for l in range(j + 1 if include_endpoint else j):
            Zs = Zs @ qubit_op(k, {l: "Z"})
        U = U + qubit_op(k, {j: "X"}) @ Zs
    return U / math.sqrt(L)


def _llm1_code(L: int, U: np.ndarray) -> QuantumCode:
    k = L - 1
    d = 1 << k
    low = d - 1
    states = np.zeros((1 << L, d, d), dtype=complex)
    for b in range(1 << L):
        psi = np.zeros(d, dtype=complex)
        psi[b & low] = 1
        if bin(b).count("1") & 1:
            psi = U @ psi
        states[b] = np.outer(psi, psi.conj())
    scale = 0.5 * math.sqrt(L / (L - 1))
    Ud = U.conj().T
    eye = np.eye(d)
    povms = []
    for i in range(L):
        if i < L - 1:
            Zi = qubit_op(k, {i: "Z"})
            xi = scale * (Zi + U @ Zi @ Ud)
        else:
            Zall = pauli_matrix("Z" * k)
            xi = scale * (Zall - U @ Zall @ Ud)
        povms.append([(eye + xi) / 2, (eye - xi) / 2])
    return QuantumCode(L, k, states, np.array(povms), "llm1-qrac")


def llm1_qrac(L: int) -> QuantumCode:
    """(L, L-1)-QRAC built on the parity RAC: odd-parity inputs are rotated by U.

    The Z-string of U is read literally (Z_j included).  If that reading ever
    failed the unitarity or success-value checks, the other one is tried.
    """
    if not 2 <= L <= MAX_QUBITS + 1:
        raise ValueError(f"need 2 <= L <= {MAX_QUBITS + 1}, got {L}")
    target = 0.5 + 0.5 * math.sqrt((L - 1) / L)
    for include in (True, False):
        U = llm1_unitary(L, include)
        if np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) > 1e-9:
            continue
        try:
            code = _llm1_code(L, U)
        except InvariantError:
            continue
        table = qrac_success_table(code)
        if np.max(np.abs(table - target)) <= 1e-9:
            code.metadata["z_string_includes_endpoint"] = include
            return code
    raise InvariantError(f"no reading of the (L, L-1) unitary reproduces the success value at L = {L}")


def classical_as_quantum(code: ClassicalCode) -> QuantumCode:
    """Embed a RAC as diagonal states and diagonal POVMs."""
    P_E = code.encoder.matrix()
    P1 = code.decoder.matrix()
    d = 1 << code.k
    states = np.zeros((1 << code.L, d, d), dtype=complex)
    idx = np.arange(d)
    states[:, idx, idx] = P_E
    povms = np.zeros((code.L, 2, d, d), dtype=complex)
    povms[:, 1, idx, idx] = P1.T
    povms[:, 0, idx, idx] = 1 - P1.T
    return QuantumCode(code.L, code.k, states, povms, f"classical:{code.label}")


def tensor_compose(parts: Sequence[tuple[QuantumCode, int]]) -> QuantumCode:
    """rho(b) = rho_1(b|block 1) x rho_2(b|block 2) x ...

    The first part carries the most significant bits of b and sits on the
    leftmost tensor factor.
    """
    if not parts:
        raise ValueError("need at least one part")
    for code, nbits in parts:
        if code.L != nbits:
            raise ValueError(f"part of family {code.family!r} has L = {code.L}, declared {nbits} bits")
    L = sum(n for _, n in parts)
    k = sum(c.k for c, _ in parts)
    if k > MAX_QUBITS:
        raise ValueError(f"composition needs {k} qubits, more than {MAX_QUBITS}")
    # bit offset (from b_0) of each block: last part holds the lowest bits
    offsets = []
    off = 0
    for code, n in reversed(parts):
        offsets.append(off)
        off += n
    offsets.reverse()
    d = 1 << k
    states = np.empty((1 << L, d, d), dtype=complex)
    for b in range(1 << L):
        factors = [code.states[(b >> o) & ((1 << code.L) - 1)] for (code, _), o in zip(parts, offsets)]
        states[b] = reduce(np.kron, factors)
    povms = np.empty((L, 2, d, d), dtype=complex)
    for j, ((code, n), o) in enumerate(zip(parts, offsets)):
        left = 1 << sum(c.k for c, _ in parts[:j])
        right = 1 << sum(c.k for c, _ in parts[j + 1:])
        for i in range(n):
            for x in (0, 1):
                povms[o + i, x] = np.kron(np.kron(np.eye(left), code.povms[i, x]), np.eye(right))
    family = " x ".join(f"({c.L},{c.k}){c.family}" for c, _ in parts)
    return QuantumCode(L, k, states, povms, f"tensor[{family}]")
