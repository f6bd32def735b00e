# python libraries
import logging
from typing import List, Mapping, Sequence, Tuple, TypeVar

# third-party libraries
import numpy
import yaml

log = logging.getLogger("rankLogger")

MASK64 = (1 << 64) - 1
T = TypeVar("T")


class SplitMix64:
    """
    64-bit splitmix generator.

    A fixed, portable algorithm so that channel instances are reproducible across
    implementations. For seed 0 the first outputs are 0xE220A8397B1DCDAF,
    0x6E789E6AA1B965F4 and 0x06C45D188009454F.
    """

    GOLDEN = 0x9E3779B97F4A7C15

    def __init__(self, seed: int) -> None:
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + self.GOLDEN) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def bits(self, width: int) -> int:
        """Uniform integer of ``width`` bits, width <= 64."""
        return self.next_u64() >> (64 - width) if width else 0

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound)."""
        if bound <= 0:
            raise ValueError(f"Bound must be positive, got {bound}")
        limit = (1 << 64) - (1 << 64) % bound
        while True:
            value = self.next_u64()
            if value < limit:
                return value % bound

    def shuffle(self, items: List[T]) -> List[T]:
        """In-place Fisher-Yates shuffle; returns ``items``."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items

    def sample(self, population: Sequence[T], k: int) -> List[T]:
        return self.shuffle(list(population))[:k]


def derive_seed(seed: int, *indices: int) -> int:
    """Seed of an independent stream, e.g. per (budget cell, trial)."""
    for index in indices:
        seed = SplitMix64((seed ^ SplitMix64(index).next_u64()) & MASK64).next_u64()
    return seed


def correctable_budgets(d: int, mode: str) -> List[Tuple[int, ...]]:
    """
    Every error budget within the decoding radius of a code of minimum distance ``d``.

    Args:
        d: minimum distance
        mode: ``"gabidulin"`` gives ``(tau,)`` for tau <= (d-1)//2, ``"kk"`` gives every
            ``(epsilon, mu, delta)`` with 2·epsilon + mu + delta <= d-1
    """
    if mode == "gabidulin":
        return [(tau,) for tau in range((d - 1) // 2 + 1)]
    if mode == "kk":
        return [
            (e, u, v)
            for e in range((d - 1) // 2 + 1)
            for u in range(d - 2 * e)
            for v in range(d - 2 * e - u)
        ]
    raise ValueError(f"Unknown mode '{mode}'")


def parse_nested_dicts(nested_dict: dict) -> dict:
    """
    Parses nested dictionaries to return appropriate parsing on each element
    """

    def _get_value(x):
        if hasattr(x, "as_dict"):
            o = x.as_dict()
        elif hasattr(x, "value") and hasattr(x, "name") and not isinstance(x, str):
            # enums
            o = x.value
        elif isinstance(x, numpy.ndarray):
            o = x.tolist()
        elif isinstance(x, numpy.integer):
            o = int(x)
        else:
            o = x
        return o

    def iter_attr(val):
        # recursive iter through nested dicts/lists
        if isinstance(val, Mapping):
            return {item: iter_attr(val_) for item, val_ in val.items()}
        elif isinstance(val, Sequence) and not isinstance(val, str):
            return [iter_attr(i) for i in val]
        else:
            return _get_value(val)

    return iter_attr(nested_dict)


class NoAliasLoader(yaml.Loader):
    @staticmethod
    def ignore_aliases(self):
        return True
