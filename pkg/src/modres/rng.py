"""Counter-based 64-bit generator (splitmix64).

Every stream is a pure function of ``(seed, index)`` so that per-trial and
per-pair randomness can be derived independently of scheduling order.
"""

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z):
    """splitmix64 finalizer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def word(seed, index):
    """The ``index``-th output of the splitmix64 stream started at ``seed``."""
    return mix64((seed + (index + 1) * GOLDEN) & MASK64)


def derive_seed(master, index):
    """Seed for trial ``index`` of an experiment with master seed ``master``."""
    return mix64(word(master, index) ^ 0xD1B54A32D192ED03)


def bits(seed, count):
    """``count`` pseudo-random bits packed little-endian into a Python int."""
    out = 0
    nwords = (count + 63) // 64
    for i in range(nwords):
        out |= word(seed, i) << (64 * i)
    if count % 64:
        out &= (1 << count) - 1
    return out


class SplitMix64:
    """Sequential view of the stream; used by the local-search drivers."""

    def __init__(self, seed):
        self.seed = seed & MASK64
        self.counter = 0

    def next64(self):
        w = word(self.seed, self.counter)
        self.counter += 1
        return w

    def below(self, bound):
        """Uniform integer in ``[0, bound)`` (Lemire's multiply-shift, rejection)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        threshold = (1 << 64) % bound
        while True:
            x = self.next64()
            m = x * bound
            if (m & MASK64) >= threshold:
                return m >> 64

    def shuffle(self, items):
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items
