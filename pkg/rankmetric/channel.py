"""
Seeded corruption of Gabidulin codewords and lifted KK codewords with known ground truth.

All randomness comes from :class:`rankmetric.utils.helpers.SplitMix64`, so an instance is
fully determined by the code, the codeword, the requested ranks and the seed.
"""

from __future__ import annotations

import functools
import logging
import operator
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from rankmetric.field import xor_rank
from rankmetric.gabidulin import ErrorDescriptor, GabidulinCode, encode, error_word
from rankmetric.kk import KKCode, lift
from rankmetric.matrix import BitMatrix, SpanBasis, rank
from rankmetric.utils.helpers import SplitMix64

log = logging.getLogger("rankLogger")


class ChannelError(ValueError):
    """Requested corruption cannot be realised for the code."""


@dataclass(frozen=True)
class ChannelSpec:
    """
    Corruption request.

    Attributes:
        seed: 64-bit seed
        epsilon: errors (KK)
        mu: erasures (KK)
        delta: deviations (KK)
        tau: rank of the additive error (Gabidulin); when set, the KK fields are ignored
    """

    seed: int = 0
    epsilon: int = 0
    mu: int = 0
    delta: int = 0
    tau: Optional[int] = None

    @property
    def is_kk(self) -> bool:
        return self.tau is None

    def as_dict(self) -> dict:
        if self.is_kk:
            return dict(seed=self.seed, epsilon=self.epsilon, mu=self.mu, delta=self.delta)
        return dict(seed=self.seed, tau=self.tau)


def _independent(rng: SplitMix64, count: int, width: int, mask: int = None) -> List[int]:
    """``count`` random nonzero GF(2)-independent ``width``-bit vectors within ``mask``."""
    basis = SpanBasis()
    out = []
    while len(out) < count:
        v = rng.bits(width)
        if mask is not None:
            v &= mask
        if v and basis.add(v):
            out.append(v)
    return out


def random_codeword(code: GabidulinCode, rng: SplitMix64) -> List[int]:
    return encode(code, [rng.bits(code.m) for _ in range(code.k)])


def inject_rank_error(
    code: GabidulinCode, c: Sequence[int], tau: int, seed: int
) -> Tuple[List[int], ErrorDescriptor]:
    """
    Adds an error ``e = sum_j L_j E_j`` of rank exactly ``tau``.

    Returns:
        The received word ``c + e`` and the planted error.

    Raises:
        ChannelError: if ``tau`` is negative or exceeds n
    """
    if not 0 <= tau <= code.n:
        raise ChannelError(f"Error rank {tau} outside [0, {code.n}]")
    rng = SplitMix64(seed)
    E = _independent(rng, tau, code.m)
    L = _independent(rng, tau, code.n)
    X = [
        functools.reduce(operator.xor, (h for i, h in enumerate(code.h) if lj >> i & 1), 0)
        for lj in L
    ]
    e = error_word(code.n, L, E)
    if xor_rank(e) != tau:
        raise ChannelError(f"Planted error has rank {xor_rank(e)}, requested {tau}")
    received = [ci ^ ei for ci, ei in zip(c, e)]
    return received, ErrorDescriptor(tau, tuple(X), tuple(E), tuple(L))


@dataclass(frozen=True)
class KKInstance:
    """
    Received matrix together with its ground truth.

    Attributes:
        received: the N × (n + m) received matrix
        x: transmitted codeword
        epsilon, mu, delta: planted ranks
        seed: generator seed
        erasures: deleted positions
        L: error locations (n-bit integers, supported outside the erasures)
        E: error values
        D: deviation values
    """

    received: BitMatrix
    x: Tuple[int, ...]
    epsilon: int
    mu: int
    delta: int
    seed: int
    erasures: Tuple[int, ...]
    L: Tuple[int, ...]
    E: Tuple[int, ...]
    D: Tuple[int, ...]

    def as_dict(self) -> dict:
        """JSON sidecar of the instance."""
        return {
            "x": list(self.x),
            "epsilon": self.epsilon,
            "mu": self.mu,
            "delta": self.delta,
            "seed": self.seed,
            "erasures": list(self.erasures),
            "L": list(self.L),
            "E": list(self.E),
            "D": list(self.D),
        }


def _random_invertible(rng: SplitMix64, size: int) -> BitMatrix:
    while True:
        rows = [rng.bits(size) for _ in range(size)]
        if xor_rank(rows) == size:
            return BitMatrix.from_ints(rows, size)


def make_kk_received(
    code: Union[KKCode, GabidulinCode],
    x: Sequence[int],
    epsilon: int,
    mu: int,
    delta: int,
    seed: int,
) -> Tuple[BitMatrix, KKInstance]:
    """
    Builds a received matrix whose n-RRE reduction shows exactly ``mu`` erasures and
    ``delta`` deviations, and whose remaining error has rank ``epsilon``.

    The rows of ``lift(x)`` at ``mu`` random positions are deleted, an error of rank
    ``epsilon`` is added to the surviving rows, ``delta`` rows ``[0 | D_j]`` are appended and
    the ``n - mu + delta`` rows are mixed by a random invertible matrix. Error values and
    deviations are jointly independent.

    Raises:
        ChannelError: if the ranks cannot be realised
    """
    inner = code.inner if isinstance(code, KKCode) else code
    n, m = inner.n, inner.m
    if min(epsilon, mu, delta) < 0:
        raise ChannelError("Ranks must be non-negative")
    if mu > n:
        raise ChannelError(f"mu={mu} exceeds n={n}")
    if epsilon > n - mu:
        raise ChannelError(f"epsilon={epsilon} exceeds the {n - mu} surviving rows")
    if epsilon + delta > m:
        raise ChannelError(f"epsilon + delta = {epsilon + delta} exceeds m={m}")
    if n - mu + delta == 0:
        raise ChannelError("No rows would be received")

    rng = SplitMix64(seed)
    erasures = tuple(sorted(rng.sample(range(n), mu)))
    kept = [i for i in range(n) if i not in erasures]
    support = 0
    for i in kept:
        support |= 1 << i

    values = _independent(rng, epsilon + delta, m)
    E, D = values[:epsilon], values[epsilon:]
    L = _independent(rng, epsilon, n, mask=support)
    err = error_word(n, L, E)
    if xor_rank(err) != epsilon:
        raise ChannelError(f"Planted error has rank {xor_rank(err)}, requested {epsilon}")

    rows = lift(inner, x).select_rows(kept)
    rows.data[:, n:] ^= BitMatrix.from_ints([err[i] for i in kept], m).data
    deviations = BitMatrix.zeros(delta, n).hstack(BitMatrix.from_ints(D, m))
    stacked = rows.vstack(deviations)

    size = stacked.rows
    received = _random_invertible(rng, size) @ stacked

    if rank(received) != size or rank(received.columns(0, n)) != n - mu:
        raise ChannelError("Received matrix does not carry the requested erasures")
    log.debug(f"KK instance: epsilon={epsilon}, mu={mu}, delta={delta}, rows={size}")
    instance = KKInstance(
        received=received,
        x=tuple(x),
        epsilon=epsilon,
        mu=mu,
        delta=delta,
        seed=seed,
        erasures=erasures,
        L=tuple(L),
        E=tuple(E),
        D=tuple(D),
    )
    return received, instance


def corrupt(
    code: Union[KKCode, GabidulinCode], x: Sequence[int], spec: ChannelSpec
) -> Union[Tuple[List[int], ErrorDescriptor], Tuple[BitMatrix, KKInstance]]:
    """Applies the corruption described by ``spec``."""
    inner = code.inner if isinstance(code, KKCode) else code
    if spec.is_kk:
        return make_kk_received(inner, x, spec.epsilon, spec.mu, spec.delta, spec.seed)
    return inject_rank_error(inner, x, spec.tau, spec.seed)
