"""
Keyed random streams.

Every random quantity is drawn from a Philox (counter-based) generator whose
SeedSequence is keyed by where it is used, so results never depend on the
order in which paths or continuations are executed.
"""
from typing import NamedTuple

import numpy as np

MAX_SEED = 2 ** 64 - 1

# derivation keys
PATH_KEY = 0
CONTINUATION_KEY = 1

# per-path roles
BARRIER_ROLE = 0
SELECTION_ROLE = 1
BLACK_ROLE = 2
RED_ROLE = 3


class PathStreams(NamedTuple):
    barriers: np.random.Generator
    selection: np.random.Generator
    black: np.random.Generator
    red: np.random.Generator


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f'Seed {seed} is not an unsigned 64-bit integer')

    return seed


def derive_seed(seed: int, *key: int) -> int:
    """
    Derives a child 64-bit seed from `seed` and an integer key path
    Args:
        seed: parent seed
        *key: non-negative integers, e.g. (PATH_KEY, path_index)

    Returns: child seed as a python int
    """
    sequence = np.random.SeedSequence(check_seed(seed), spawn_key=tuple(int(k) for k in key))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def path_seed(master_seed: int, path_index: int) -> int:
    return derive_seed(master_seed, PATH_KEY, path_index)


def continuation_seed(prefix_seed: int, continuation_index: int) -> int:
    return derive_seed(prefix_seed, CONTINUATION_KEY, continuation_index)


def generator(seed: int, role: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(check_seed(seed), spawn_key=(role,))))


def path_streams(seed: int) -> PathStreams:
    return PathStreams(barriers=generator(seed, BARRIER_ROLE),
                       selection=generator(seed, SELECTION_ROLE),
                       black=generator(seed, BLACK_ROLE),
                       red=generator(seed, RED_ROLE))
