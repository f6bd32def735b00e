"""
Gabidulin codes over GF(2^m).

The parity-check matrix is the Moore matrix ``H[s][i] = h_i^[s]`` of a basis vector ``h`` of
``n`` GF(2)-independent elements. Decoding follows the syndrome pipeline: syndromes, key
equation (:func:`ribma` or :func:`ibma`), root space of the error span polynomial,
:func:`gabidulin_solve` for the error locators, :func:`locate` and error word
reconstruction.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

from rankmetric.field import FieldSpec, GaloisField, get_field, xor_rank
from rankmetric.linearized import LinearizedPoly
from rankmetric.matrix import SpanBasis, root_space

log = logging.getLogger("rankLogger")


class CodeError(ValueError):
    """Invalid code parameters or words of the wrong length."""


class FailureKind(str, Enum):
    ROOT_SPACE_DEFICIENT = "root_space_deficient"
    SINGULAR_SYSTEM = "singular_system"
    LOCATOR_INCONSISTENT = "locator_inconsistent"
    BUDGET_EXCEEDED = "budget_exceeded"
    RESIDUAL_SYNDROME = "residual_syndrome"


class DecodeFailure(Exception):
    """A decoding stage could not produce a consistent result."""

    def __init__(self, kind: FailureKind, message: str = "") -> None:
        self.kind = FailureKind(kind)
        self.message = message
        super().__init__(f"{self.kind.value}: {message}" if message else self.kind.value)


#: Named codes: (field spec, n, k, h)
PRESETS: Dict[str, Tuple[FieldSpec, int, int, Tuple[int, ...]]] = {
    "g8": (FieldSpec(8, 0x1A9), 8, 4, (2, 4, 16, 169, 24, 233, 205, 130)),
    "g16": (FieldSpec(16, 0x1100B), 16, 8, tuple(1 << i for i in range(16))),
    "g4": (FieldSpec(4, 0x13), 4, 2, (1, 2, 4, 8)),
}

#: Default prime polynomials when a code is built from (n, k, m, h) alone
DEFAULT_PRIME_POLYS = {4: 0x13, 8: 0x1A9, 16: 0x1100B}


def _field_rre(field: GaloisField, rows: List[List[int]]) -> Tuple[List[List[int]], List[int]]:
    """Reduced row echelon form over GF(2^m), pivots normalised to one."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    n_cols = len(rows[0]) if rows else 0
    for col in range(n_cols):
        found = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if found is None:
            continue
        rows[r], rows[found] = rows[found], rows[r]
        inv = field.inv(rows[r][col])
        rows[r] = [field.mul(inv, v) for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a ^ field.mul(f, b) for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


@dataclass(frozen=True)
class GabidulinCode:
    """
    Immutable (n, k) Gabidulin code over GF(2^m).

    Args:
        field (GaloisField): symbol field
        n (int): length, at most m
        k (int): dimension, 0 < k < n
        h (tuple): n GF(2)-independent elements defining the parity-check matrix

    The generator matrix ``G`` is systematic in the last ``k`` positions and spans the null
    space of ``H``.
    """

    field: GaloisField
    n: int
    k: int
    h: Tuple[int, ...]
    H: Tuple[Tuple[int, ...], ...] = dc_field(init=False, repr=False)
    G: Tuple[Tuple[int, ...], ...] = dc_field(init=False, repr=False)

    def __post_init__(self):
        f = self.field
        object.__setattr__(self, "h", tuple(f.check(x) for x in self.h))
        if len(self.h) != self.n:
            raise CodeError(f"Expected {self.n} elements in h, got {len(self.h)}")
        if self.n > f.m:
            raise CodeError(f"Code length {self.n} exceeds extension degree {f.m}")
        if not 0 < self.k < self.n:
            raise CodeError(f"Dimension k={self.k} must satisfy 0 < k < n={self.n}")
        if xor_rank(self.h) != self.n:
            raise CodeError(f"Elements of h are linearly dependent over GF(2): {self.h}")

        H = tuple(tuple(f.frobenius(x, s) for x in self.h) for s in range(self.n - self.k))
        object.__setattr__(self, "H", H)

        red = self.n - self.k
        reduced, pivots = _field_rre(f, [list(row) for row in H])
        if pivots != list(range(red)):
            raise CodeError("Parity-check matrix is not of full rank on its leading columns")
        one = f.one()
        G = []
        for j in range(self.k):
            row = [reduced[i][red + j] for i in range(red)] + [0] * self.k
            row[red + j] = one
            G.append(tuple(row))
        object.__setattr__(self, "G", tuple(G))
        if any(any(syndrome(self, row)) for row in self.G):
            raise CodeError("Generator matrix has a nonzero syndrome")

    @property
    def m(self) -> int:
        return self.field.m

    @property
    def d(self) -> int:
        return self.n - self.k + 1

    @property
    def t(self) -> int:
        return (self.d - 1) // 2

    @classmethod
    def from_preset(cls, name: str) -> "GabidulinCode":
        try:
            spec, n, k, h = PRESETS[name]
        except KeyError:
            raise CodeError(f"Unknown preset '{name}', choose from {sorted(PRESETS)}")
        return cls(get_field(spec), n, k, h)

    def message_of(self, codeword: Sequence[int]) -> List[int]:
        """Message symbols of a codeword (systematic positions)."""
        self._check_length(codeword, self.n)
        return list(codeword[self.n - self.k :])

    def is_codeword(self, word: Sequence[int]) -> bool:
        return not any(syndrome(self, word))

    def _check_length(self, word: Sequence[int], length: int) -> None:
        if len(word) != length:
            raise CodeError(f"Expected {length} symbols, got {len(word)}")
        for x in word:
            self.field.check(x)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "field": self.field.spec.as_dict(),
            "h": list(self.h),
        }

    @classmethod
    def from_dict(cls, record: dict) -> "GabidulinCode":
        """Builds a code from ``as_dict`` output; a ``preset`` key takes precedence."""
        if "preset" in record:
            return cls.from_preset(record["preset"])
        if "field" in record:
            spec = FieldSpec.from_dict(record["field"])
        else:
            m = int(record["m"])
            poly = record.get("prime_poly", DEFAULT_PRIME_POLYS.get(m))
            if poly is None:
                raise CodeError(f"No prime polynomial given for m={m}")
            spec = FieldSpec.from_dict({"m": m, "prime_poly": poly})
        return cls(get_field(spec), int(record["n"]), int(record["k"]), tuple(record["h"]))


def make_code(
    n: int,
    k: int,
    m: int,
    h: Sequence[int],
    field: Union[FieldSpec, GaloisField, None] = None,
) -> GabidulinCode:
    """
    Constructs an (n, k) Gabidulin code over GF(2^m).

    Args:
        n: code length
        k: code dimension
        m: extension degree
        h: n elements, independent over GF(2)
        field: field spec or field; defaults to a polynomial basis with a default prime
            polynomial for ``m``

    Raises:
        CodeError: on dependent ``h`` or bad dimensions
    """
    if field is None:
        if m not in DEFAULT_PRIME_POLYS:
            raise CodeError(f"No default prime polynomial for m={m}, pass a field")
        field = FieldSpec(m, DEFAULT_PRIME_POLYS[m])
    if isinstance(field, FieldSpec):
        field = get_field(field)
    if field.m != m:
        raise CodeError(f"Field has m={field.m}, code asks for m={m}")
    return GabidulinCode(field, n, k, tuple(h))


def encode(code: GabidulinCode, message: Sequence[int]) -> List[int]:
    """Codeword ``message · G``."""
    code._check_length(message, code.k)
    f = code.field
    out = [0] * code.n
    for mj, row in zip(message, code.G):
        if not mj:
            continue
        for i, g in enumerate(row):
            if g:
                out[i] ^= f.mul(mj, g)
    return out


def syndrome(code: GabidulinCode, r: Sequence[int]) -> List[int]:
    """S_s = sum_i h_i^[s] r_i for s = 0..d-2."""
    code._check_length(r, code.n)
    f = code.field
    out = []
    for row in code.H:
        s = 0
        for hs, ri in zip(row, r):
            if ri:
                s ^= f.mul(hs, ri)
        out.append(s)
    return out


@dataclass
class KeyEquationState:
    """
    Working registers of the combined-array key-equation solver.

    Attributes:
        delta_combined: discrepancy register holding the running products with the
            syndromes followed by the error span polynomial
        theta_combined: auxiliary register of the same length
        gamma: scaling element
        b: signed length counter
    """

    delta_combined: List[int]
    theta_combined: List[int]
    gamma: int
    b: int = 0

    def step(self, field: GaloisField) -> None:
        d_reg, t_reg = self.delta_combined, self.theta_combined
        delta0 = d_reg[0]
        gamma_sq = field.square(self.gamma)
        size = len(d_reg)
        new = [0] * size
        for i in range(size):
            nxt = d_reg[i + 1] if i + 1 < size else 0
            value = field.mul(gamma_sq, nxt) if nxt else 0
            if delta0 and t_reg[i]:
                value ^= field.mul(delta0, field.square(t_reg[i]))
            new[i] = value
        if delta0 and self.b >= 0:
            self.theta_combined = d_reg[1:] + [0]
            self.gamma = delta0
            self.b = -self.b - 1
        else:
            self.theta_combined = [field.square(x) for x in t_reg]
            self.gamma = gamma_sq
            self.b += 1
        self.delta_combined = new


def _initial_state(field: GaloisField, window: Sequence[int], pad: int) -> KeyEquationState:
    register = list(window) + [0] * pad + [field.one()]
    return KeyEquationState(list(register), list(register), field.one(), 0)


def ibma(S: LinearizedPoly, t: int) -> LinearizedPoly:
    """
    Inversionless Berlekamp-Massey iteration for the error span polynomial.

    Args:
        S: syndrome polynomial, coefficient ``s`` holds ``S_s``
        t: error correction capability; ``2t`` syndromes are consumed

    Returns:
        Λ(x), a nonzero scalar multiple of the error span polynomial.
    """
    f = S.field
    one = f.one()
    lam = [one]
    b = [one]
    gamma = one
    length = 0
    for r in range(2 * t):
        delta = 0
        for j, lj in enumerate(lam):
            if j > r:
                break
            sv = S[r - j]
            if lj and sv:
                delta ^= f.mul(lj, f.frobenius(sv, j))
        shifted = [0] + [f.square(x) for x in b]
        gamma_sq = f.square(gamma)
        size = max(len(lam), len(shifted))
        new = []
        for i in range(size):
            li = lam[i] if i < len(lam) else 0
            bi = shifted[i] if i < len(shifted) else 0
            new.append(f.mul(gamma_sq, li) ^ f.mul(delta, bi))
        if delta and 2 * length <= r:
            length = r + 1 - length
            b = lam
            gamma = delta
        else:
            b = shifted
            gamma = gamma_sq
        lam = new
    return LinearizedPoly(f, lam)


def ribma(
    S: LinearizedPoly, t: int, return_state: bool = False
) -> Union[LinearizedPoly, Tuple[LinearizedPoly, KeyEquationState]]:
    """
    Combined-array form of :func:`ibma`.

    Discrepancies and the error span polynomial share one register of length 3t+1, so the
    discrepancy of each iteration is read from cell 0 instead of being recomputed. After
    2t iterations cells t..2t hold Λ(x).
    """
    f = S.field
    state = _initial_state(f, [S[i] for i in range(2 * t)], t)
    for _ in range(2 * t):
        state.step(f)
    lam = LinearizedPoly(f, state.delta_combined[t : 2 * t + 1])
    return (lam, state) if return_state else lam


def gribma(S: LinearizedPoly, theta: int, d: int) -> LinearizedPoly:
    """
    Key equation with ``theta`` known erasure and deviation terms.

    Only the syndromes ``S_theta .. S_{theta+2t'-1}`` with ``t' = (d-1-theta) // 2`` take part;
    with ``theta = 0`` this is exactly :func:`ribma`.

    Raises:
        DecodeFailure: BUDGET_EXCEEDED if ``theta > d - 1``
    """
    if theta > d - 1:
        raise DecodeFailure(
            FailureKind.BUDGET_EXCEEDED, f"theta={theta} exceeds the bound d-1={d - 1}"
        )
    f = S.field
    t = (d - 1) // 2
    t_prime = (d - 1 - theta) // 2
    state = _initial_state(f, [S[theta + i] for i in range(2 * t_prime)], t)
    for _ in range(2 * t_prime):
        state.step(f)
    return LinearizedPoly(f, state.delta_combined[t : t + t_prime + 1])


def gabidulin_solve(
    field: GaloisField,
    s_window: Sequence[int],
    known: Sequence[int],
    inversionless: bool = True,
    return_state: bool = False,
):
    """
    Solves the Moore system ``S_l = sum_j X_j^[l] · E_j`` (l = 0..tau-1) for X given E.

    The system is triangularised with the recurrences
    ``A_{i,j} = A_{i-1,j} - (p · A_{i-1,j})^[-1]`` and
    ``Q_{i,j} = Q_{i-1,j} - (p · Q_{i-1,j+1})^[-1]`` with ``p = A_{i-1,i-1}``, keeping the Q
    values in a single working vector, followed by back substitution.

    Args:
        field: symbol field
        s_window: at least tau right-hand sides
        known: the tau known elements E_j
        inversionless: use the inversionless updates; otherwise divide by the pivot first.
            Both yield identical A and Q.
        return_state: also return the triangular matrix A and the Q vector snapshots

    Raises:
        DecodeFailure: SINGULAR_SYSTEM on a zero pivot
    """
    tau = len(known)
    if tau == 0:
        return ([], [], []) if return_state else []
    if len(s_window) < tau:
        raise ValueError(f"Need {tau} right-hand sides, got {len(s_window)}")

    a_rows = [[field.check(e) for e in known]]
    q = [field.check(s) for s in s_window[:tau]]
    q_states = [list(q)]
    for i in range(1, tau):
        prev = a_rows[-1]
        p = prev[i - 1]
        if not p:
            raise DecodeFailure(FailureKind.SINGULAR_SYSTEM, f"Zero pivot at row {i - 1}")
        if inversionless:
            update = lambda v: field.frobenius(field.mul(p, v), -1)  # noqa: E731
        else:
            update = lambda v: field.mul(p, field.frobenius(field.div(v, p), -1))  # noqa: E731
        a_rows.append([0] * i + [prev[j] ^ update(prev[j]) for j in range(i, tau)])
        for j in range(tau - 1 - i, -1, -1):
            q[i + j] = q[i - 1 + j] ^ update(q[i + j])
        q_states.append(q[i:])

    x = [0] * tau
    for i in range(tau - 1, -1, -1):
        pivot = a_rows[i][i]
        if not pivot:
            raise DecodeFailure(FailureKind.SINGULAR_SYSTEM, f"Zero pivot at row {i}")
        acc = q[i]
        for j in range(i + 1, tau):
            acc ^= field.mul(a_rows[i][j], x[j])
        x[i] = field.div(acc, pivot)
    if return_state:
        return x, a_rows, q_states
    return x


def locate(code: GabidulinCode, X: Sequence[int]) -> List[int]:
    """
    Expands each locator over the basis ``h``.

    Returns:
        One n-bit integer per locator, bit ``i`` multiplying ``h_i``.

    Raises:
        DecodeFailure: LOCATOR_INCONSISTENT if a locator lies outside span(h)
    """
    basis = SpanBasis()
    for i, hi in enumerate(code.h):
        basis.add(hi, 1 << i)
    out = []
    for xj in X:
        combination = basis.express(xj)
        if combination is None:
            raise DecodeFailure(
                FailureKind.LOCATOR_INCONSISTENT, f"Locator {xj} is outside the span of h"
            )
        out.append(combination)
    return out


def error_word(n: int, L: Sequence[int], E: Sequence[int]) -> List[int]:
    """e_i = sum_j L_{j,i} E_j"""
    out = [0] * n
    for lj, ej in zip(L, E):
        for i in range(n):
            if lj >> i & 1:
                out[i] ^= ej
    return out


@dataclass(frozen=True)
class ErrorDescriptor:
    """
    Rank error ``e = sum_j L_j E_j``.

    Attributes:
        tau: number of error terms
        X: locators, ``X_j = sum_i L_{j,i} h_i``
        E: error values
        L: locations as n-bit integers
    """

    tau: int
    X: Tuple[int, ...]
    E: Tuple[int, ...]
    L: Tuple[int, ...]

    def word(self, n: int) -> List[int]:
        return error_word(n, self.L, self.E)

    def as_dict(self) -> dict:
        return {"tau": self.tau, "X": list(self.X), "E": list(self.E), "L": list(self.L)}


@dataclass(frozen=True)
class DecodeOutcome:
    codeword: Optional[Tuple[int, ...]] = None
    error: Optional[ErrorDescriptor] = None
    failure: Optional[FailureKind] = None
    message: str = ""

    @property
    def success(self) -> bool:
        return self.failure is None

    def as_dict(self) -> dict:
        return {
            "success": self.success,
            "codeword": None if self.codeword is None else list(self.codeword),
            "error": None if self.error is None else self.error.as_dict(),
            "failure": None if self.failure is None else self.failure.value,
            "message": self.message,
        }


KEY_SOLVERS = {"ribma": ribma, "ibma": ibma}


def _decode(code: GabidulinCode, r: Sequence[int], key_solver: str) -> DecodeOutcome:
    S = syndrome(code, r)
    if not any(S):
        return DecodeOutcome(codeword=tuple(r), error=ErrorDescriptor(0, (), (), ()))

    f = code.field
    lam = KEY_SOLVERS[key_solver](LinearizedPoly(f, S), code.t)
    tau = lam.qdeg
    if tau < 1 or tau > code.d - 1:
        raise DecodeFailure(
            FailureKind.ROOT_SPACE_DEFICIENT, f"Error span polynomial has q-degree {tau}"
        )
    E = root_space(lam)
    if len(E) < tau:
        raise DecodeFailure(
            FailureKind.ROOT_SPACE_DEFICIENT,
            f"Root space of dimension {len(E)} for q-degree {tau}",
        )
    X = gabidulin_solve(f, S[:tau], E)
    L = locate(code, X)
    descriptor = ErrorDescriptor(tau, tuple(X), tuple(E), tuple(L))
    codeword = [ri ^ ei for ri, ei in zip(r, descriptor.word(code.n))]
    if not code.is_codeword(codeword):
        raise DecodeFailure(FailureKind.RESIDUAL_SYNDROME, "Corrected word is not a codeword")
    log.debug(f"Gabidulin decode corrected an error of rank {tau}")
    return DecodeOutcome(codeword=tuple(codeword), error=descriptor)


def decode(code: GabidulinCode, r: Sequence[int], key_solver: str = "ribma") -> DecodeOutcome:
    """
    Decodes a received word.

    Args:
        code: the code
        r: n received symbols
        key_solver: ``"ribma"`` or ``"ibma"``

    Returns:
        The corrected codeword with its error descriptor, or the failure kind. Decoding
        failures are returned, never raised.

    Raises:
        CodeError: if ``r`` has the wrong length
    """
    if key_solver not in KEY_SOLVERS:
        raise ValueError(f"Unknown key solver '{key_solver}', choose from {sorted(KEY_SOLVERS)}")
    code._check_length(r, code.n)
    try:
        return _decode(code, r, key_solver)
    except DecodeFailure as failure:
        log.debug(f"Gabidulin decode failed: {failure}")
        return DecodeOutcome(failure=failure.kind, message=failure.message)
