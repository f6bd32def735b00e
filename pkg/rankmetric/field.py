"""
Arithmetic in GF(2^m).

Elements are bit-packed integers: bit ``i`` is the coefficient of the i-th basis element,
read least significant bit first (value ``2`` is ``x`` in a polynomial basis). A field is
described by an immutable :class:`FieldSpec` and operated through a :class:`GaloisField`,
which works on plain integers. :class:`Element` wraps an integer together with its field
for callers that want operator syntax and field-mismatch checks.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Optional, Sequence, Tuple, Union

log = logging.getLogger("rankLogger")


class FieldError(ValueError):
    """Invalid field configuration or element outside the field."""


class FieldMismatchError(FieldError):
    """Operands belong to different fields."""


class BasisKind(str, Enum):
    POLYNOMIAL = "polynomial"
    NORMAL = "normal"


def poly_degree(poly: int) -> int:
    return poly.bit_length() - 1


def poly_mod(a: int, mod: int) -> int:
    """Remainder of ``a`` divided by ``mod`` in GF(2)[x]."""
    deg = poly_degree(mod)
    while a and poly_degree(a) >= deg:
        a ^= mod << (poly_degree(a) - deg)
    return a


def poly_mulmod(a: int, b: int, mod: int) -> int:
    """Shift-and-XOR product of ``a`` and ``b`` reduced modulo ``mod``."""
    deg = poly_degree(mod)
    top = 1 << deg
    result = 0
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= mod
    return result


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def is_irreducible(poly: int) -> bool:
    """
    Irreducibility test over GF(2).

    ``poly`` has no factor of degree ``i`` iff gcd(x^(2^i) - x, poly) = 1, checked for every
    ``i`` up to half the degree (Ben-Or).
    """
    m = poly_degree(poly)
    if m < 1:
        return False
    if m == 1:
        return True
    x_pow = 2
    for _ in range(m // 2):
        x_pow = poly_mulmod(x_pow, x_pow, poly)
        if poly_gcd(poly, x_pow ^ 2) != 1:
            return False
    return True


def xor_rank(vectors: Sequence[int]) -> int:
    """Rank over GF(2) of bit-packed vectors."""
    pivots = {}
    rank = 0
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                rank += 1
                break
            v ^= pivots[top]
    return rank


def _invert_images(images: Sequence[int], m: int) -> List[int]:
    """
    Inverts the GF(2)-linear map sending unit vector ``i`` to ``images[i]``.

    Returns ``inv`` such that ``inv[j]`` is the preimage of unit vector ``j``.

    Raises:
        FieldError: if the images are linearly dependent.
    """
    rows = [(images[i], 1 << i) for i in range(m)]
    inverse = [0] * m
    for col in range(m):
        bit = 1 << col
        pivot = next((r for r in range(col, m) if rows[r][0] & bit), None)
        if pivot is None:
            raise FieldError("Vectors do not form a basis")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        for r in range(m):
            if r != col and rows[r][0] & bit:
                rows[r] = (rows[r][0] ^ rows[col][0], rows[r][1] ^ rows[col][1])
    for col in range(m):
        inverse[col] = rows[col][1]
    return inverse


def conjugates(value: int, prime_poly: int) -> List[int]:
    """The m conjugates value^(2^i), i = 0..m-1, in polynomial basis."""
    m = poly_degree(prime_poly)
    out = [value]
    for _ in range(m - 1):
        out.append(poly_mulmod(out[-1], out[-1], prime_poly))
    return out


def find_normal_element(m: int, prime_poly: int) -> int:
    """Smallest element (polynomial basis encoding) whose conjugates are independent."""
    for candidate in range(1, 1 << m):
        if xor_rank(conjugates(candidate, prime_poly)) == m:
            return candidate
    raise FieldError(f"No normal element found for prime polynomial {prime_poly:#x}")


@dataclass(frozen=True)
class FieldSpec:
    """
    Immutable description of GF(2^m).

    Args:
        m (int): extension degree, 2 <= m <= 64
        prime_poly (int): irreducible polynomial, coefficient of x^i at bit i
        basis_kind (BasisKind): representation basis of the elements
        normal_generator (int): normal element (polynomial basis encoding) whose conjugates
            form the basis. Required iff ``basis_kind`` is normal.
    """

    m: int
    prime_poly: int
    basis_kind: BasisKind = BasisKind.POLYNOMIAL
    normal_generator: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "basis_kind", BasisKind(self.basis_kind))
        if not 2 <= self.m <= 64:
            raise FieldError(f"Extension degree {self.m} outside [2, 64]")
        if poly_degree(self.prime_poly) != self.m or not self.prime_poly & 1:
            raise FieldError(
                f"Prime polynomial {self.prime_poly:#x} must have bits 0 and {self.m} set"
            )
        if not is_irreducible(self.prime_poly):
            raise FieldError(f"Polynomial {self.prime_poly:#x} is reducible over GF(2)")
        if self.basis_kind is BasisKind.NORMAL:
            if self.normal_generator is None:
                raise FieldError("A normal basis requires a normal generator")
            if xor_rank(conjugates(self.normal_generator, self.prime_poly)) != self.m:
                raise FieldError(f"Generator {self.normal_generator:#x} is not normal")
        elif self.normal_generator is not None:
            raise FieldError("A normal generator is only valid for a normal basis")

    @classmethod
    def polynomial(cls, m: int, prime_poly: int) -> "FieldSpec":
        return cls(m, prime_poly)

    @classmethod
    def normal(cls, m: int, prime_poly: int, generator: int = None) -> "FieldSpec":
        """Normal-basis field; the smallest normal element is used if none is given."""
        if generator is None:
            generator = find_normal_element(m, prime_poly)
        return cls(m, prime_poly, BasisKind.NORMAL, generator)

    def as_dict(self) -> dict:
        out = {
            "m": self.m,
            "prime_poly": f"{self.prime_poly:#x}",
            "basis": self.basis_kind.value,
        }
        if self.normal_generator is not None:
            out["normal_generator"] = f"{self.normal_generator:#x}"
        return out

    @classmethod
    def from_dict(cls, record: dict) -> "FieldSpec":
        def _int(value):
            return int(value, 16) if isinstance(value, str) else int(value)

        generator = record.get("normal_generator")
        return cls(
            m=int(record["m"]),
            prime_poly=_int(record["prime_poly"]),
            basis_kind=BasisKind(record.get("basis", BasisKind.POLYNOMIAL.value)),
            normal_generator=None if generator is None else _int(generator),
        )

    def to_text(self) -> str:
        """Single-line record: ``m prime_poly basis [normal_generator]``."""
        fields = [str(self.m), f"{self.prime_poly:#x}", self.basis_kind.value]
        if self.normal_generator is not None:
            fields.append(f"{self.normal_generator:#x}")
        return " ".join(fields)

    @classmethod
    def from_text(cls, text: str) -> "FieldSpec":
        tokens = text.split()
        if len(tokens) not in (3, 4):
            raise FieldError(f"Field record '{text.strip()}' needs 3 or 4 fields")
        try:
            return cls(
                m=int(tokens[0]),
                prime_poly=int(tokens[1], 16),
                basis_kind=BasisKind(tokens[2].lower()),
                normal_generator=int(tokens[3], 16) if len(tokens) == 4 else None,
            )
        except ValueError as e:
            if isinstance(e, FieldError):
                raise
            raise FieldError(f"Malformed field record '{text.strip()}': {e}") from e


@dataclass(frozen=True)
class MOStructure:
    """
    Bit-product structure of a normal basis multiplier.

    ``mult_matrices[k][i]`` is row ``i`` of the symmetric matrix M_k packed as an integer
    (bit ``j`` set iff the product of basis elements ``i`` and ``j`` has coordinate ``k``).
    ``cn`` counts the nonzero entries of M_0, i.e. the product terms in one output bit.
    """

    m: int
    mult_matrices: Tuple[Tuple[int, ...], ...]
    cn: int

    def multiply(self, a: int, b: int) -> int:
        result = 0
        for k, matrix in enumerate(self.mult_matrices):
            acc = 0
            bits = a
            i = 0
            while bits:
                if bits & 1:
                    acc ^= matrix[i] & b
                bits >>= 1
                i += 1
            if bin(acc).count("1") & 1:
                result |= 1 << k
        return result


def build_mo_structure(spec: FieldSpec) -> MOStructure:
    """
    Builds the Massey-Omura product structure of a normal-basis field.

    Raises:
        FieldError: if ``spec`` has no normal generator or it is not normal.
    """
    if spec.normal_generator is None:
        raise FieldError("Massey-Omura structure requires a normal generator")
    m, poly = spec.m, spec.prime_poly
    basis = conjugates(spec.normal_generator, poly)
    if xor_rank(basis) != m:
        raise FieldError(f"Generator {spec.normal_generator:#x} is not normal")
    from_poly = _invert_images(basis, m)

    def to_normal(value: int) -> int:
        out = 0
        j = 0
        while value:
            if value & 1:
                out ^= from_poly[j]
            value >>= 1
            j += 1
        return out

    products = [[to_normal(poly_mulmod(basis[i], basis[j], poly)) for j in range(m)]
                for i in range(m)]
    matrices = []
    for k in range(m):
        rows = []
        for i in range(m):
            row = 0
            for j in range(m):
                if products[i][j] >> k & 1:
                    row |= 1 << j
            rows.append(row)
        matrices.append(tuple(rows))
    cn = sum(bin(row).count("1") for row in matrices[0])
    log.debug(f"Massey-Omura structure for GF(2^{m}): C_N = {cn}")
    return MOStructure(m=m, mult_matrices=tuple(matrices), cn=cn)


class GaloisField:
    """
    Arithmetic engine for a :class:`FieldSpec`, operating on bit-packed integers.

    Polynomial-basis products use shift-and-XOR with modular reduction; normal-basis
    products use the Massey-Omura structure. Frobenius powers are GF(2)-linear and are
    applied through precomputed images of the basis (a cyclic rotation for a normal basis).
    Instances are immutable after construction; obtain them through :func:`get_field`.
    """

    def __init__(self, spec: FieldSpec) -> None:
        self.spec = spec
        self.m = spec.m
        self.order = 1 << spec.m
        self.mask = self.order - 1
        self.mo: Optional[MOStructure] = None

        if spec.basis_kind is BasisKind.NORMAL:
            self._basis = conjugates(spec.normal_generator, spec.prime_poly)
            self._from_poly = _invert_images(self._basis, self.m)
            self.mo = build_mo_structure(spec)
            self._frob_images = None
        else:
            self._basis = [1 << i for i in range(self.m)]
            self._from_poly = list(self._basis)
            images = []
            current = list(self._basis)
            for _ in range(self.m):
                images.append(tuple(current))
                current = [poly_mulmod(v, v, spec.prime_poly) for v in current]
            self._frob_images = tuple(images)

    def __repr__(self) -> str:
        return f"GaloisField({self.spec.to_text()})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GaloisField) and self.spec == other.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    @property
    def is_normal(self) -> bool:
        return self.mo is not None

    def __call__(self, value: int) -> "Element":
        return Element(self.check(value), self)

    def check(self, value: int) -> int:
        if not 0 <= int(value) < self.order:
            raise FieldError(f"{value} is not an element of GF(2^{self.m})")
        return int(value)

    def elements(self) -> Iterator[int]:
        return iter(range(self.order))

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    sub = add

    def mul(self, a: int, b: int) -> int:
        if self.mo is not None:
            return self.mo.multiply(a, b)
        return poly_mulmod(a, b, self.spec.prime_poly)

    def square(self, a: int) -> int:
        return self.frobenius(a, 1)

    def frobenius(self, a: int, i: int) -> int:
        """a^(2^i); ``i`` may be negative and is taken modulo m."""
        i %= self.m
        if i == 0 or a == 0:
            return a
        if self._frob_images is None:
            return ((a << i) | (a >> (self.m - i))) & self.mask
        images = self._frob_images[i]
        out = 0
        j = 0
        while a:
            if a & 1:
                out ^= images[j]
            a >>= 1
            j += 1
        return out

    def inv(self, a: int) -> int:
        """
        Inverse through a^(2^m - 2) = a^2 · a^4 · ... · a^(2^(m-1)).

        Raises:
            ZeroDivisionError: for ``a = 0``.
        """
        if a == 0:
            raise ZeroDivisionError("Zero has no inverse in a field")
        result = self.one()
        power = a
        for _ in range(self.m - 1):
            power = self.square(power)
            result = self.mul(result, power)
        return result

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def one(self) -> int:
        """The multiplicative identity in this representation."""
        if self.mo is None:
            return 1
        return self.mask

    def to_polynomial(self, a: int) -> int:
        """Polynomial-basis encoding of ``a``."""
        if self.mo is None:
            return a
        out = 0
        j = 0
        while a:
            if a & 1:
                out ^= self._basis[j]
            a >>= 1
            j += 1
        return out

    def from_polynomial(self, a: int) -> int:
        if self.mo is None:
            return a
        out = 0
        j = 0
        while a:
            if a & 1:
                out ^= self._from_poly[j]
            a >>= 1
            j += 1
        return out

    def basis_elements(self) -> List[int]:
        """Unit vectors of the representation basis."""
        return [1 << i for i in range(self.m)]


@functools.lru_cache(maxsize=None)
def get_field(spec: FieldSpec) -> GaloisField:
    """Shared :class:`GaloisField` instance for ``spec``."""
    return GaloisField(spec)


def convert_basis(a: int, source: GaloisField, target: GaloisField) -> int:
    """
    Re-encodes ``a`` from the basis of ``source`` into the basis of ``target``.

    Raises:
        FieldError: if the fields are not the same GF(2^m) modulo the same polynomial.
    """
    if (source.m, source.spec.prime_poly) != (target.m, target.spec.prime_poly):
        raise FieldError(f"Cannot convert between {source} and {target}")
    source.check(a)
    return target.from_polynomial(source.to_polynomial(a))


@dataclass(frozen=True)
class Element:
    """An element of a specific field, with operator support."""

    value: int
    field: GaloisField

    def _other(self, other: Union["Element", int]) -> int:
        if isinstance(other, Element):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} and {other.field} differ")
            return other.value
        return self.field.check(other)

    def __add__(self, other):
        return Element(self.value ^ self._other(other), self.field)

    __sub__ = __add__
    __radd__ = __add__

    def __mul__(self, other):
        return Element(self.field.mul(self.value, self._other(other)), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Element(self.field.div(self.value, self._other(other)), self.field)

    def inverse(self) -> "Element":
        return Element(self.field.inv(self.value), self.field)

    def frobenius(self, i: int) -> "Element":
        return Element(self.field.frobenius(self.value, i), self.field)

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"{self.value}"
