"""
Constant-dimension subspace codes obtained by lifting Gabidulin codes.

A codeword ``x`` is transmitted as the row space of ``[I_n | x]``. The receiver reduces the
received matrix to n-RRE form and runs the generalised rank decoder, which corrects
``epsilon`` errors, ``mu`` erasures and ``delta`` deviations whenever
``2·epsilon + mu + delta <= d - 1``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from typing import List, Optional, Sequence, Tuple, Union

from rankmetric.gabidulin import (
    CodeError,
    DecodeFailure,
    FailureKind,
    GabidulinCode,
    error_word,
    gabidulin_solve,
    gribma,
    locate,
    syndrome,
)
from rankmetric.infrastructure.engine import Task, TaskGraph
from rankmetric.linearized import LinearizedPoly, minimal_polynomial
from rankmetric.matrix import (
    BitMatrix,
    MatrixError,
    Reduction,
    SpanBasis,
    n_rre_reduce,
    root_space,
)
from rankmetric.utils.helpers import SplitMix64

log = logging.getLogger("rankLogger")


@dataclass(frozen=True)
class KKCode:
    """
    Lifted Gabidulin code.

    Args:
        inner (GabidulinCode): the rank-metric code
        packet_limit (int): if set, received matrices with more rows are cut down to this
            many linearly independent rows chosen at random before decoding
        selection_seed (int): seed of the row selection
    """

    inner: GabidulinCode
    packet_limit: Optional[int] = None
    selection_seed: int = 0

    @property
    def n(self) -> int:
        return self.inner.n

    @property
    def m(self) -> int:
        return self.inner.m

    @property
    def d(self) -> int:
        return self.inner.d

    @property
    def packet_width(self) -> int:
        return self.n + self.m

    @classmethod
    def from_preset(cls, name: str, **kwargs) -> "KKCode":
        return cls(GabidulinCode.from_preset(name), **kwargs)


def _inner(code: Union[KKCode, GabidulinCode]) -> GabidulinCode:
    return code.inner if isinstance(code, KKCode) else code


def lift(code: Union[KKCode, GabidulinCode], x: Sequence[int], validate: bool = True) -> BitMatrix:
    """
    Lifting ``[I_n | x]`` of a codeword, one row per symbol.

    Raises:
        CodeError: if ``validate`` and ``x`` is not a codeword
    """
    inner = _inner(code)
    if validate and not inner.is_codeword(x):
        raise CodeError("Only codewords can be lifted")
    return BitMatrix.identity(inner.n).hstack(BitMatrix.from_ints(x, inner.m))


@dataclass
class StageTrace:
    """
    Collects the intermediate values of one KK decode, labelled by decoding step.

    Steps: 1(a) syndromes, 1(b) erasure locators, 1(c)-(e) erasure and deviation
    polynomials, 2(a)-(e) error span polynomial, 3 root space, 4(a)-(d) error
    reconstruction.
    """

    entries: List[Tuple[str, str, object]] = dc_field(default_factory=list)

    def record(self, step: str, name: str, value) -> None:
        self.entries.append((step, name, value))

    def __getitem__(self, name: str):
        for _, key, value in self.entries:
            if key == name:
                return value
        raise KeyError(name)

    @staticmethod
    def render(value) -> str:
        if isinstance(value, LinearizedPoly):
            return str(value)
        if isinstance(value, BitMatrix):
            return "[" + "; ".join("".join(str(int(b)) for b in row) for row in value.data) + "]"
        if isinstance(value, (list, tuple)):
            return "(" + ",".join(str(v) for v in value) + ")"
        return str(value)

    def lines(self) -> List[str]:
        return [f"{step:<5} {name} = {self.render(value)}" for step, name, value in self.entries]

    def to_text(self) -> str:
        return "\n".join(self.lines()) + "\n"


@dataclass(frozen=True)
class KKDecodeReport:
    """
    Result of a KK decode.

    Attributes:
        codeword: recovered x̂, or None on failure
        error_word: reconstructed ê
        epsilon: inferred number of errors, q-degree of the error part
        mu: erasures read from the reduction
        delta: deviations read from the reduction
        failure: failure kind, None on success
    """

    codeword: Optional[Tuple[int, ...]] = None
    error_word: Optional[Tuple[int, ...]] = None
    epsilon: int = 0
    mu: int = 0
    delta: int = 0
    failure: Optional[FailureKind] = None
    message: str = ""
    u_set: Tuple[int, ...] = ()
    d: int = 0

    @property
    def success(self) -> bool:
        return self.failure is None

    @property
    def tau(self) -> int:
        return self.epsilon + self.mu + self.delta

    @property
    def within_bound(self) -> bool:
        """Whether the inferred budget satisfies 2·epsilon + mu + delta <= d - 1."""
        return 2 * self.epsilon + self.mu + self.delta <= self.d - 1

    def as_dict(self) -> dict:
        return {
            "success": self.success,
            "codeword": None if self.codeword is None else list(self.codeword),
            "error_word": None if self.error_word is None else list(self.error_word),
            "epsilon": self.epsilon,
            "mu": self.mu,
            "delta": self.delta,
            "tau": self.tau,
            "within_bound": self.within_bound,
            "erasures": list(self.u_set),
            "failure": None if self.failure is None else self.failure.value,
            "message": self.message,
        }


def select_packets(received: BitMatrix, limit: int, seed: int) -> BitMatrix:
    """Keeps ``limit`` linearly independent rows picked in a seeded random order."""
    order = SplitMix64(seed).shuffle(list(range(received.rows)))
    basis = SpanBasis()
    keep = []
    for i in order:
        if basis.add(BitMatrix(received.data[i : i + 1]).to_ints()[0]):
            keep.append(i)
            if len(keep) == limit:
                break
    log.debug(f"Selected {len(keep)} of {received.rows} packets")
    return received.select_rows(sorted(keep))


def erasure_locators(code: GabidulinCode, reduction: Reduction) -> List[int]:
    """X̂_j = sum_i L̂_{i,j} h_i, one per erased position."""
    out = []
    for j in range(reduction.mu):
        value = 0
        for i in range(code.n):
            if reduction.L_hat.data[i, j]:
                value ^= code.h[i]
        out.append(value)
    return out


class ReductionDecoder:
    """
    Generalised rank decoder of one reduction.

    Erasure locators and their minimal polynomial may be handed in, so that decoders of the
    blocks of a Cartesian product code share them.
    """

    def __init__(
        self,
        code: GabidulinCode,
        locators: Optional[List[int]] = None,
        lambda_u: Optional[LinearizedPoly] = None,
        name: str = "kk_decoder",
    ) -> None:
        self.code = code
        self.locators = locators
        self.lambda_u = lambda_u
        self.name = name

    def prepare(self, reduction: Reduction) -> LinearizedPoly:
        """Computes and keeps the erasure locators of ``reduction`` and λ_U."""
        self.locators = erasure_locators(self.code, reduction)
        self.lambda_u = minimal_polynomial(self.code.field, self.locators)
        return self.lambda_u

    def decode(self, reduction: Reduction, trace: Optional[StageTrace] = None) -> KKDecodeReport:
        base = dict(mu=reduction.mu, delta=reduction.delta, u_set=reduction.u_set, d=self.code.d)
        try:
            return self._decode(reduction, trace, base)
        except DecodeFailure as failure:
            log.debug(f"KK decode failed: {failure}")
            return KKDecodeReport(failure=failure.kind, message=failure.message, **base)

    def _decode(self, reduction: Reduction, trace: Optional[StageTrace], base: dict):
        code = self.code
        f = code.field
        d = code.d
        mu, delta = reduction.mu, reduction.delta
        trace = trace if trace is not None else StageTrace()

        if mu + delta > d - 1:
            raise DecodeFailure(
                FailureKind.BUDGET_EXCEEDED, f"mu + delta = {mu + delta} exceeds d-1 = {d - 1}"
            )
        r = reduction.r_prime.to_ints()
        S = syndrome(code, r)
        trace.record("1(a)", "S", S)

        locators = self.locators
        if locators is None:
            locators = erasure_locators(code, reduction)
        trace.record("1(b)", "X_hat", locators)
        lambda_u = self.lambda_u
        if lambda_u is None:
            lambda_u = minimal_polynomial(f, locators)
        trace.record("1(c)", "lambda_U", lambda_u)

        deviations = reduction.E_hat.to_ints()
        sigma_d = minimal_polynomial(f, deviations)
        trace.record("1(d)", "sigma_D", sigma_d)
        zeta_u = lambda_u.qreverse(mu)
        trace.record("1(e)", "zeta_U", zeta_u)
        s_poly = LinearizedPoly(f, S)
        s_du = sigma_d @ s_poly @ zeta_u
        trace.record("1(e)", "S_DU", s_du)

        sigma_f = gribma(s_du, mu + delta, d)
        trace.record("2(a)", "sigma_F", sigma_f)
        s_fd = sigma_f @ sigma_d @ s_poly
        trace.record("2(b)", "S_FD", s_fd)

        top = d - 2
        window = [f.frobenius(s_fd[top - s], s - top) for s in range(mu)]
        beta = [f.frobenius(z, top) for z in gabidulin_solve(f, window, locators)]
        trace.record("2(c)", "beta", beta)
        sigma_u = minimal_polynomial(f, beta)
        trace.record("2(d)", "sigma_U", sigma_u)
        sigma = sigma_u @ sigma_f @ sigma_d
        trace.record("2(e)", "sigma", sigma)

        tau = sigma.qdeg
        if tau > d - 1:
            raise DecodeFailure(
                FailureKind.ROOT_SPACE_DEFICIENT, f"Error span polynomial has q-degree {tau}"
            )
        E = root_space(sigma)
        trace.record("3", "E", E)
        if len(E) < tau:
            raise DecodeFailure(
                FailureKind.ROOT_SPACE_DEFICIENT,
                f"Root space of dimension {len(E)} for q-degree {tau}",
            )
        X = gabidulin_solve(f, S[:tau], E)
        trace.record("4(a)", "X", X)
        L = locate(code, X)
        trace.record("4(b)", "L", L)
        e = error_word(code.n, L, E)
        trace.record("4(c)", "e", e)
        x_hat = [ri ^ ei for ri, ei in zip(r, e)]
        trace.record("4(d)", "x_hat", x_hat)

        if not code.is_codeword(x_hat):
            raise DecodeFailure(FailureKind.RESIDUAL_SYNDROME, "Decoded word is not a codeword")
        epsilon = sigma_f.qdeg
        log.debug(f"KK decode: epsilon={epsilon}, mu={mu}, delta={delta}")
        return KKDecodeReport(
            codeword=tuple(x_hat), error_word=tuple(e), epsilon=epsilon, **base
        )


def _prepare(code: KKCode, received: BitMatrix, width: int) -> Reduction:
    if received.cols != code.n + width:
        raise MatrixError(
            f"Received matrix has {received.cols} columns, expected {code.n + width}"
        )
    if code.packet_limit is not None and received.rows > code.packet_limit:
        received = select_packets(received, code.packet_limit, code.selection_seed)
    return n_rre_reduce(received, code.n)


def kk_decode(
    code: Union[KKCode, GabidulinCode], received: BitMatrix, trace: Optional[StageTrace] = None
) -> KKDecodeReport:
    """
    Decodes a received matrix of ``n + m`` columns.

    Args:
        code: the KK code (a bare Gabidulin code is lifted implicitly)
        received: full row rank received matrix
        trace: optional collector of the intermediate values

    Returns:
        The report; decoding failures are reported, never raised.

    Raises:
        MatrixError: on a wrong width or a rank-deficient matrix
    """
    if isinstance(code, GabidulinCode):
        code = KKCode(code)
    reduction = _prepare(code, received, code.m)
    return ReductionDecoder(code.inner).decode(reduction, trace)


def cartesian_decode(
    code: Union[KKCode, GabidulinCode],
    received: BitMatrix,
    l: int,
    workers: Optional[int] = None,
) -> List[KKDecodeReport]:
    """
    Decodes a Cartesian product of ``l`` KK codes sharing one identity block.

    The received matrix ``[A | y_0 | ... | y_{l-1}]`` is reduced once. Erasure locators and
    their minimal polynomial are computed by one task, on which the ``l`` block decoders
    depend; the block decoders then run concurrently.

    Args:
        code: the KK code of one block
        received: full row rank matrix of ``n + l·m`` columns
        l: number of blocks
        workers: thread count for the block decoders
    """
    if isinstance(code, GabidulinCode):
        code = KKCode(code)
    if l < 1:
        raise ValueError(f"Number of blocks must be positive, got {l}")
    reduction = _prepare(code, received, l * code.m)
    blocks = reduction.split(code.m)

    shared = ReductionDecoder(code.inner, name="cartesian_decoder")
    graph = TaskGraph(workers=workers)
    graph.add(Task(shared, "prepare", reduction=reduction))
    for block in blocks:
        task = Task(shared, "decode", reduction=block)
        graph.add(task)
        graph.add_dependency(task, dep_inst=shared, dep_meth="prepare", dkw=reduction)
    reports = graph.run()[1:]
    log.debug(
        f"Cartesian decode of {l} blocks: {sum(r.success for r in reports)} succeeded"
    )
    return reports


#: Received matrix of the worked decoding example for the ``g8`` preset, one integer per
#: row (bit j is column j): six rows of the identity block carrying corrupted symbols and
#: two deviation rows.
WORKED_EXAMPLE_ROWS = (0xDB01, 0xE302, 0x3704, 0xC708, 0x1B10, 0x2F20, 0xFF00, 0xFE00)
WORKED_EXAMPLE_CODEWORD = (36, 28, 200, 56, 228, 208, 5, 98)
#: A second basis of the worked example error span.
WORKED_EXAMPLE_BASIS = (254, 157, 4, 251)


def worked_example() -> Tuple[KKCode, BitMatrix, Tuple[int, ...]]:
    """The ``g8`` code, the worked example received matrix and the transmitted codeword."""
    code = KKCode.from_preset("g8")
    received = BitMatrix.from_ints(WORKED_EXAMPLE_ROWS, code.packet_width)
    return code, received, WORKED_EXAMPLE_CODEWORD


def trace_on_basis(
    code: Union[KKCode, GabidulinCode], trace: StageTrace, E: Sequence[int]
) -> List[int]:
    """
    Redoes the error reconstruction of a recorded decode on another basis ``E`` of the
    same error span. X and L depend on the basis; the error word does not.

    Returns:
        The error word rebuilt from ``E``.
    """
    code = _inner(code)
    E = list(E)
    X = gabidulin_solve(code.field, trace["S"][: len(E)], E)
    L = locate(code, X)
    e = error_word(code.n, L, E)
    trace.record("3'", "E'", E)
    trace.record("4(a)'", "X'", X)
    trace.record("4(b)'", "L'", L)
    trace.record("4(c)'", "e'", e)
    return e
