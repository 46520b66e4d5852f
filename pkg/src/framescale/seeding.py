"""Order-independent 64-bit seed derivation.

``mix_seed(master, *keys)`` folds each key into the state with the SplitMix64
finalizer::

    h = splitmix64(master)
    for k in keys:
        h = splitmix64(h ^ k)

All arithmetic is modulo 2**64, keys are taken modulo 2**64, and the
SplitMix64 step is::

    z = (x + 0x9E3779B97F4A7C15)
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

Every Monte Carlo trial derives its own seed from (master, N, M, trial), so
results do not depend on the order in which trials run.
"""

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix_seed(master: int, *keys: int) -> int:
    h = splitmix64(master & MASK64)
    for k in keys:
        h = splitmix64(h ^ (k & MASK64))
    return h


def trial_seed(master: int, n: int, m: int, trial: int) -> int:
    return mix_seed(master, n, m, trial)
