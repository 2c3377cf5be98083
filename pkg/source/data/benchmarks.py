import numpy as np

from typing import Dict, Optional

from source.misc.errors import CapExceeded, DomainError
from source.model.permutation import DEFAULT_MAX_LINES, Parity, Permutation, parity


# published quantum costs of the hidden weighted bit family, for context only
PUBLISHED_HWB_COSTS: Dict[int, int] = {
    7: 2727,
    8: 6535,
    9: 15462,
    10: 34224,
    11: 86942,
}


def _check_lines(n: int, cap: Optional[int]):
    if n < 1:
        raise DomainError(f'A benchmark needs at least one line, got n={n}')
    if cap is not None and n > cap:
        raise CapExceeded(n, cap)


def popcount(values: np.ndarray, n: int) -> np.ndarray:
    """ Number of set bits among the low n bits of each value. """
    counts = np.zeros_like(values)
    for b in range(n):
        counts += (values >> b) & 1
    return counts


def gen_hwb(n: int, cap: Optional[int] = DEFAULT_MAX_LINES) -> Permutation:
    """ Hidden weighted bit function: rotate the n input bits left by their weight.

    Rotation keeps the weight, so rotating right by it inverts the map.

    Raises:
        CapExceeded: n is above the cap.
    """
    _check_lines(n, cap)
    x = np.arange(1 << n, dtype=np.int64)
    shift = popcount(x, n) % n
    mask = (1 << n) - 1
    images = ((x << shift) | (x >> (n - shift))) & mask
    return Permutation(n, images)


def gen_random_even(n: int, seed: int = 0, cap: Optional[int] = DEFAULT_MAX_LINES) -> Permutation:
    """ Uniformly random even permutation, reproducible per seed.

    A uniform permutation is drawn and, when odd, composed with the
    transposition of its first two images.

    Raises:
        CapExceeded: n is above the cap.
    """
    _check_lines(n, cap)
    rng = np.random.default_rng(seed)
    images = rng.permutation(1 << n).astype(np.int64)
    if parity(Permutation(n, images)) is Parity.ODD:
        images[[0, 1]] = images[[1, 0]]
    return Permutation(n, images)
