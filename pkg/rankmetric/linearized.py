"""
Linearized polynomials over GF(2^m).

A :class:`LinearizedPoly` ``f`` with coefficients ``(f_0, ..., f_p)`` represents
``f(x) = sum_i f_i x^[i]`` where ``x^[i] = x^(2^i)``. Multiplication of the algebra is the
symbolic product (composition) ``a ⊗ b = a(b(x))``, available as ``a @ b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from rankmetric.field import GaloisField


def _strip(coeffs: Iterable[int]) -> Tuple[int, ...]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class LinearizedPoly:
    """
    Immutable linearized polynomial.

    Args:
        field (GaloisField): coefficient field
        coeffs (tuple): dense coefficients, index ``i`` multiplies ``x^[i]``. Trailing zeros
            are dropped, so the zero polynomial has no coefficients and ``qdeg`` -1.
    """

    field: GaloisField
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(self.field.check(c) for c in self.coeffs))

    @classmethod
    def identity(cls, field: GaloisField) -> "LinearizedPoly":
        """x^[0]"""
        return cls(field, (field.one(),))

    @classmethod
    def monomial(cls, field: GaloisField, degree: int, coeff: int = None) -> "LinearizedPoly":
        coeff = field.one() if coeff is None else coeff
        return cls(field, (0,) * degree + (coeff,))

    @classmethod
    def zero(cls, field: GaloisField) -> "LinearizedPoly":
        return cls(field, ())

    @property
    def qdeg(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one()

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def evaluate(self, x: int) -> int:
        """sum_i f_i · x^(2^i)"""
        field = self.field
        result = 0
        power = x
        for i, c in enumerate(self.coeffs):
            if i:
                power = field.square(power)
            if c:
                result ^= field.mul(c, power)
        return result

    __call__ = evaluate

    def compose(self, other: "LinearizedPoly", truncate: Optional[int] = None) -> "LinearizedPoly":
        """
        Symbolic product ``self ⊗ other``.

        Coefficient ``i + j`` accumulates ``a_i · b_j^[i]``.

        Args:
            other: right operand
            truncate: if given, only terms of q-degree below ``truncate`` are computed.
        """
        field = self.field
        size = len(self.coeffs) + len(other.coeffs) - 1
        if size <= 0:
            return LinearizedPoly.zero(field)
        if truncate is not None:
            size = min(size, truncate)
        out = [0] * max(size, 0)
        for i, a in enumerate(self.coeffs):
            if not a or i >= size:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= size:
                    break
                if b:
                    out[i + j] ^= field.mul(a, field.frobenius(b, i))
        return LinearizedPoly(field, out)

    def __matmul__(self, other: "LinearizedPoly") -> "LinearizedPoly":
        return self.compose(other)

    def __add__(self, other: "LinearizedPoly") -> "LinearizedPoly":
        size = max(len(self.coeffs), len(other.coeffs))
        return LinearizedPoly(self.field, [self[i] ^ other[i] for i in range(size)])

    def scale(self, c: int) -> "LinearizedPoly":
        """Left scalar multiple ``c · f``."""
        return LinearizedPoly(self.field, [self.field.mul(c, f) for f in self.coeffs])

    def shift(self) -> "LinearizedPoly":
        """``x^[1] ⊗ f``: coefficients move up one index and are squared."""
        return LinearizedPoly(self.field, (0,) + tuple(self.field.square(f) for f in self.coeffs))

    def qreverse(self, p: int) -> "LinearizedPoly":
        """
        q-reverse with respect to ``p >= qdeg``: ``g_i = f_{p-i}^[i-p]``.
        """
        if p < self.qdeg:
            raise ValueError(f"q-reverse order {p} is below the q-degree {self.qdeg}")
        return LinearizedPoly(
            self.field, [self.field.frobenius(self[p - i], i - p) for i in range(p + 1)]
        )

    def to_list(self) -> List[int]:
        return list(self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        one = self.field.one()
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            terms.append(f"x^[{i}]" if c == one else f"{c}x^[{i}]")
        return " + ".join(terms)


def minimal_polynomial(field: GaloisField, roots: Sequence[int]) -> LinearizedPoly:
    """
    Monic minimal linearized polynomial of the GF(2)-span of ``roots``.

    The polynomial is grown one root at a time as F <- (x^[1] + γ x^[0]) ⊗ F, where
    γ = F(w_i); the values F(w_j) of the pending roots are tracked alongside
    (γ_j <- γ_j^2 + γ γ_j) so that no polynomial evaluation is needed. A root whose
    tracked value is zero lies in the span of the previous ones and is skipped.
    """
    gammas = [field.check(w) for w in roots]
    f = [field.one()]
    for i, gamma in enumerate(gammas):
        if gamma == 0:
            continue
        f = [
            (field.square(f[k - 1]) if k else 0) ^ (field.mul(gamma, f[k]) if k < len(f) else 0)
            for k in range(len(f) + 1)
        ]
        for j in range(i + 1, len(gammas)):
            g = gammas[j]
            if g:
                gammas[j] = field.square(g) ^ field.mul(gamma, g)
    return LinearizedPoly(field, f)


def minimal_polynomial_packed(field: GaloisField, roots: Sequence[int]) -> LinearizedPoly:
    """
    Register-packed construction of the minimal linearized polynomial.

    A single register of ``p + 1`` cells holds the pending root values at the bottom and
    the polynomial coefficients at the top, highest coefficient pinned in the last cell.
    Consuming a root shifts the pending roots down one cell and extends the polynomial by
    one cell downwards; a dependent root only shifts, leaving a zero cell between both
    parts. The final alignment shifts the register down until cell 0 is nonzero, which
    places F_0 there.
    """
    p = len(roots)
    reg = [field.check(w) for w in roots] + [field.one()]
    pending = p
    degree = 0
    while pending:
        gamma = reg[0]
        new = [0] * (p + 1)
        for j in range(pending - 1):
            g = reg[j + 1]
            new[j] = field.square(g) ^ field.mul(gamma, g) if gamma and g else g
        low = p - degree
        if gamma:
            new[low - 1] = field.mul(gamma, reg[low])
            for idx in range(low, p):
                new[idx] = field.square(reg[idx]) ^ field.mul(gamma, reg[idx + 1])
            new[p] = field.square(reg[p])
            degree += 1
        else:
            new[low:] = reg[low:]
        reg = new
        pending -= 1
    while reg[0] == 0:
        reg = reg[1:] + [0]
    return LinearizedPoly(field, reg[: degree + 1])
