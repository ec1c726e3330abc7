"""Helper utility functions: bit-set kernels and configuration access"""

import logging
import os
from typing import Iterable, Iterator, List, Optional

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

DEFAULT_CAPS = {
    'mim': 12,
    'sim': 12,
    'rank': 16,
    'mm': 16,
    'eta': 21,
    'tw': 16,
    'tree_alpha': 12,
}

# Per-oracle environment overrides; WIDTHFORGE_CAP wins over all of them
CAP_ENV_KEYS = {
    'mim': 'WIDTHFORGE_CAP_MIM',
    'sim': 'WIDTHFORGE_CAP_MIM',
    'rank': 'WIDTHFORGE_CAP_RANK',
    'mm': 'WIDTHFORGE_CAP_RANK',
    'eta': 'WIDTHFORGE_CAP_ETA',
    'tw': 'WIDTHFORGE_CAP_TW',
    'tree_alpha': 'WIDTHFORGE_CAP_TREE_ALPHA',
}


def _int_from_env(key: str) -> Optional[int]:
    raw = os.getenv(key)
    if raw is None or not raw.strip():
        return None
    try:
        return int(raw)
    except ValueError:
        logging.getLogger(__name__).warning(f"Ignoring non-integer {key}={raw!r}")
        return None


def get_size_cap(kind: str) -> int:
    """
    Size cap of an exact oracle

    Args:
        kind: 'mim', 'sim', 'rank', 'mm', 'eta', 'tw' or 'tree_alpha'

    Returns:
        Largest accepted ground set (or vertex count)
    """
    override = _int_from_env('WIDTHFORGE_CAP')
    if override is not None:
        return override
    specific = _int_from_env(CAP_ENV_KEYS.get(kind, ''))
    if specific is not None:
        return specific
    return DEFAULT_CAPS[kind]


def get_log_level() -> int:
    """Logging level named by WIDTHFORGE_LOG_LEVEL (default INFO)"""
    name = os.getenv('WIDTHFORGE_LOG_LEVEL', 'INFO').strip().upper()
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else logging.INFO


def get_default_seed() -> int:
    """Corpus seed named by WIDTHFORGE_SEED (default 2024)"""
    seed = _int_from_env('WIDTHFORGE_SEED')
    return 2024 if seed is None else seed


def popcount(mask: int) -> int:
    return bin(mask).count('1')


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of mask in increasing order"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_to_list(mask: int) -> List[int]:
    return list(iter_bits(mask))


def to_mask(items: Iterable[int]) -> int:
    mask = 0
    for item in items:
        mask |= 1 << item
    return mask


def lowest_bit(mask: int) -> int:
    """Index of the lowest set bit; mask must be non-zero"""
    return (mask & -mask).bit_length() - 1


def iter_submasks(mask: int) -> Iterator[int]:
    """Yield every non-empty submask of mask, largest first"""
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)
