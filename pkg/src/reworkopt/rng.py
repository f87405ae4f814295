"""Counter-based random streams with hierarchical substream derivation.

Every stochastic entity in a simulation (a machine's environment, a
job's input quality, a suspension-check projection) draws from its own
stream, derived from the run's root stream by a path of integer ids.
Two runs that share a root key replay identical draws entity by entity,
which is what makes paired candidate comparisons and replication
extension stable: adding replication 7 never perturbs replications 0-6.
"""

from __future__ import annotations

from . import _kernel

_M64 = (1 << 64) - 1
_SEED_SALT = 0x5851F42D4C957F2D

# substream namespaces (first id on the derivation path)
NS_ENV = 1        # machine environment wear
NS_JOB = 2        # per-entity input quality / noise / induced wear
NS_PILOT = 3      # idle-space pilot run
NS_PROP2 = 4      # maintenance-suspension projections
NS_LABEL = 5      # static labeling replications
NS_ONLINE = 6     # online execution runs
NS_RESCHED = 7    # rescheduling candidate evaluations
NS_SEARCH = 8     # evolutionary operator randomness
NS_INIT = 9       # population / instance initialisation


class RngStream:
    """A (key, counter) pair over the kernel hash. Cheap to fork."""

    __slots__ = ("key", "ctr")

    def __init__(self, key: int, ctr: int = 0):
        self.key = key & _M64
        self.ctr = ctr

    @classmethod
    def from_seed(cls, seed: int) -> "RngStream":
        return cls(_kernel.mix64((seed ^ _SEED_SALT) & _M64))

    def substream(self, *ids: int) -> "RngStream":
        """Derive an independent stream from a path of integer ids.

        Derivation is order-sensitive: substream(1, 2) != substream(2, 1).
        """
        k = self.key
        for i in ids:
            k = _kernel.mix64((k ^ _kernel.mix64((i + 1) * 0x9E3779B97F4A7C15 & _M64)) & _M64)
        return RngStream(k)

    def clone(self) -> "RngStream":
        return RngStream(self.key, self.ctr)

    # -- draws ---------------------------------------------------------

    def uniform(self) -> float:
        u = _kernel.u01(self.key, self.ctr)
        self.ctr += 1
        return u

    def normal(self, mu: float, sigma: float) -> float:
        x, self.ctr = _kernel.normal(self.key, self.ctr, mu, sigma)
        return x

    def clamped_normal(self, mu: float, sigma: float) -> float:
        x, self.ctr = _kernel.clamped_normal(self.key, self.ctr, mu, sigma)
        return x

    def gamma(self, shape: float, scale: float) -> float:
        x, self.ctr = _kernel.gamma(self.key, self.ctr, shape, scale)
        return x

    def truncated_normal(self, mu: float, sigma: float, lo: float, hi: float) -> float:
        x, self.ctr = _kernel.truncated_normal(self.key, self.ctr, mu, sigma, lo, hi)
        return x

    # -- integer / sequence helpers -----------------------------------

    def randrange(self, n: int) -> int:
        """Integer in [0, n). n must be positive."""
        i = int(self.uniform() * n)
        return n - 1 if i >= n else i

    def randint(self, lo: int, hi: int) -> int:
        """Integer in [lo, hi] inclusive."""
        return lo + self.randrange(hi - lo + 1)

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def shuffle(self, seq: list) -> None:
        for i in range(len(seq) - 1, 0, -1):
            j = self.randrange(i + 1)
            seq[i], seq[j] = seq[j], seq[i]
