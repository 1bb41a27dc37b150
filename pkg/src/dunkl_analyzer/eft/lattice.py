import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ..errors import InvalidWeightDirectionError, SequenceConstructionError

logger = logging.getLogger(__name__)

MAX_DIMENSION = 4
MAX_DIRECTIONS = 6
MAX_WINDOW = 200
# the weight condition only needs |⟨b, ρ⟩| >= 1/2
AVOIDANCE_MARGIN = 0.5


@dataclass
class AvoidanceSequence:
    """
    Integer sequence ρ^(n) of triangular form on the window |n_i| <= N

    Every coordinate ρ_i depends on n_1..n_i only and increases in n_i.
    nodes and rho are (points, d) arrays in the same order.
    """

    nodes: np.ndarray
    rho: np.ndarray
    b_vectors: np.ndarray
    N: int
    bound: int

    @property
    def d(self) -> int:
        return self.nodes.shape[1]

    @property
    def size(self) -> int:
        return self.nodes.shape[0]


def _check_directions(b_vectors: np.ndarray):
    for b in b_vectors:
        if not np.any(b):
            raise InvalidWeightDirectionError("Direction vectors must be nonzero")
        nonzero = b[b != 0.0]
        if np.any(np.abs(nonzero) < 1.0):
            raise InvalidWeightDirectionError(
                f"Direction {b.tolist()} has entries with 0 < |b_i| < 1; rescale it so nonzero entries are >= 1"
            )


def _active_sets(b_vectors: np.ndarray, d: int) -> List[np.ndarray]:
    """J_i: directions whose last nonzero entry sits at coordinate i"""
    last = [int(np.nonzero(b)[0][-1]) for b in b_vectors]
    return [np.array([j for j, l in enumerate(last) if l == i], dtype=int) for i in range(d)]


def _renumber(n: np.ndarray, excluded: np.ndarray) -> np.ndarray:
    """
    Increasing bijection ℤ → ℤ \\ E evaluated at n

    Nonnegative n go to the (n+1)-th admissible integer >= 0, negative n to
    the |n|-th admissible integer < 0, counted downwards. Each value is the
    fixpoint of k = n ± #{e in E between 0 and k}, so |ρ(n) − n| <= |E|.

    Args:
        n: (W,) window indices
        excluded: (P, J) excluded integers per prefix, NaN for unused slots

    Returns:
        (P, W) renumbered values
    """
    k = np.broadcast_to(n.astype(float), (excluded.shape[0], n.size)).copy()
    e = excluded[:, :, None]
    positive = k >= 0
    for _ in range(excluded.shape[1] + 2):
        up = np.sum((e >= 0) & (e <= k[:, None, :]), axis=1)
        down = np.sum((e < 0) & (e >= k[:, None, :]), axis=1)
        updated = np.where(positive, n + up, n - down)
        if np.array_equal(updated, k):
            break
        k = updated
    return k.astype(int)


def _excluded_for(prefix: np.ndarray, b_vectors: np.ndarray, active: np.ndarray, i: int) -> np.ndarray:
    """Nearest integers l_j to the roots t_j of ⟨b^j, (prefix, t)⟩ = 0, duplicates masked"""
    if active.size == 0:
        return np.full((prefix.shape[0], 0), np.nan)
    coeffs = b_vectors[active]
    partial = prefix @ coeffs[:, :i].T if i else np.zeros((prefix.shape[0], active.size))
    roots = np.rint(-partial / coeffs[:, i])
    roots = np.sort(roots, axis=1)
    duplicate = np.zeros_like(roots, dtype=bool)
    duplicate[:, 1:] = roots[:, 1:] == roots[:, :-1]
    return np.where(duplicate, np.nan, roots)


def verify_sequence(seq: AvoidanceSequence) -> None:
    """
    Exhaustive check of |ρ_i − n_i| <= bound, |⟨b^j, ρ⟩| >= 1/2 and monotonicity in n_i

    Raises:
        SequenceConstructionError: A window node violates a postcondition
    """
    deviation = np.abs(seq.rho - seq.nodes)
    if np.any(deviation > seq.bound):
        worst = int(np.argmax(deviation.max(axis=1)))
        raise SequenceConstructionError(f"|ρ − n| exceeds {seq.bound} at n={seq.nodes[worst].tolist()}")
    if seq.b_vectors.size:
        products = np.abs(seq.rho @ seq.b_vectors.T)
        if np.any(products < AVOIDANCE_MARGIN):
            worst = int(np.argmin(products.min(axis=1)))
            raise SequenceConstructionError(f"|⟨b, ρ⟩| < 1/2 at n={seq.nodes[worst].tolist()}")
    W = 2 * seq.N + 1
    if seq.size == W ** seq.d:
        grid = seq.rho.reshape((W,) * seq.d + (seq.d,))
        for i in range(seq.d):
            if np.any(np.diff(grid[..., i], axis=i) <= 0):
                raise SequenceConstructionError(f"ρ_{i + 1} is not increasing in n_{i + 1}")


def build_sequence(b_vectors: Sequence[Sequence[float]], d: int, N: int) -> AvoidanceSequence:
    """
    Integer sequence avoiding the hyperplanes ⟨b^j, x⟩ = 0 by at least 1/2

    Coordinate by coordinate, the directions whose last nonzero entry is
    at coordinate i remove the integer nearest to the root of the partial
    linear equation, and the remaining integers are renumbered increasingly.
    Without directions the sequence is ℤ^d \\ {0} indexed by itself.

    Args:
        b_vectors: Directions with every entry 0 or of modulus >= 1
        d: Dimension, <= 4
        N: Window half-width, <= 200

    Returns:
        AvoidanceSequence, verified on every window node

    Raises:
        InvalidWeightDirectionError: A direction violates the magnitude condition
    """
    b = np.asarray(b_vectors, dtype=float).reshape(-1, d) if len(b_vectors) else np.zeros((0, d))
    m = b.shape[0]
    if not 1 <= d <= MAX_DIMENSION:
        raise ValueError(f"Dimension must be in [1, {MAX_DIMENSION}], got {d}")
    if m > MAX_DIRECTIONS:
        raise ValueError(f"At most {MAX_DIRECTIONS} directions are supported, got {m}")
    if not 1 <= N <= MAX_WINDOW:
        raise ValueError(f"Window must be in [1, {MAX_WINDOW}], got {N}")
    _check_directions(b)

    window = np.arange(-N, N + 1)
    W = window.size
    nodes = np.stack(np.meshgrid(*([window] * d), indexing="ij"), axis=-1).reshape(-1, d)

    if m == 0:
        keep = np.any(nodes != 0, axis=1)
        seq = AvoidanceSequence(nodes[keep], nodes[keep].copy(), b, N, 0)
        verify_sequence(seq)
        return seq

    active = _active_sets(b, d)
    # rho_prefix holds ρ_1..ρ_i for every prefix (n_1..n_i) in lexicographic order
    rho_prefix = np.zeros((1, 0))
    for i in range(d):
        excluded = _excluded_for(rho_prefix, b, active[i], i)
        values = _renumber(window, excluded)
        rho_prefix = np.concatenate([np.repeat(rho_prefix, W, axis=0), values.reshape(-1, 1)], axis=1)

    seq = AvoidanceSequence(nodes, rho_prefix.astype(int), b, N, m)
    verify_sequence(seq)
    logger.debug(f"built avoidance sequence d={d}, m={m}, N={N}: {seq.size} nodes verified")
    return seq


@dataclass
class LatticeSequence:
    """
    Near-lattice λ^(n) = (π ρ_1/a_1, ..., π ρ_d/a_d) with its achieved constants

    delta: min of the coordinate separation and the distance to every
    weight zero set (|x| and |⟨α^j, x⟩|) over the window
    L: max |λ_i(n) − π n_i/a_i| over the window
    """

    a: np.ndarray
    alphas: np.ndarray
    k0: float
    N: int
    nodes: np.ndarray
    points: np.ndarray
    delta: float
    L: float
    separation: float
    avoidance: float

    @property
    def d(self) -> int:
        return self.nodes.shape[1]

    @property
    def size(self) -> int:
        return self.nodes.shape[0]

    def outer_radius(self) -> np.ndarray:
        """|λ_i| of every point outside the window exceeds this per coordinate"""
        return np.pi * (self.N + 1) / self.a - self.L

    def to_dict(self) -> dict:
        return {
            "a": self.a.tolist(),
            "alphas": self.alphas.tolist(),
            "k0": self.k0,
            "N": self.N,
            "delta": self.delta,
            "L": self.L,
            "separation": self.separation,
            "avoidance": self.avoidance,
            "nodes": self.nodes.tolist(),
            "points": self.points.tolist(),
        }


def _separation(nodes: np.ndarray, points: np.ndarray, N: int) -> float:
    """Smallest gap between consecutive i-th coordinates along n_i"""
    d = nodes.shape[1]
    W = 2 * N + 1
    if nodes.shape[0] != W ** d:
        # window with the origin removed: put it back as NaN so gaps across it are skipped
        full = np.full((W ** d, d), np.nan)
        index = np.ravel_multi_index(tuple((nodes + N).T), (W,) * d)
        full[index] = points
        points = full
    grid = points.reshape((W,) * d + (d,))
    gaps = [np.nanmin(np.diff(grid[..., i], axis=i)) for i in range(d)]
    return float(min(gaps))


def lattice_constants(a: np.ndarray, alphas: np.ndarray, nodes: np.ndarray, points: np.ndarray,
                      N: int) -> dict:
    """Achieved separation, close-lattice bound and distance to the weight zero sets"""
    separation = _separation(nodes, points, N)
    L = float(np.max(np.abs(points - np.pi * nodes / a)))
    xi = [np.linalg.norm(points, axis=1)]
    xi += [np.abs(points @ alpha) for alpha in alphas]
    avoidance = float(min(x.min() for x in xi))
    return {"separation": separation, "L": L, "avoidance": avoidance, "delta": min(separation, avoidance)}


def make_lattice(a: Sequence[float], alpha_list: Sequence[Sequence[float]] = (), k0: float = 0.0,
                 N: int = 50) -> LatticeSequence:
    """
    Near-lattice for a > 0 whose points stay away from the zero set of the weight

    Each direction α^j becomes b^j_i = c_j α^j_i / a_i with c_j chosen so the
    smallest nonzero entry has modulus 1; the avoidance sequence for these
    b^j keeps |⟨α^j, λ⟩| >= π/(2 c_j).

    Args:
        a: Lattice parameters, componentwise positive
        alpha_list: Weight directions
        k0: Exponent of |x| in the weight
        N: Window half-width

    Returns:
        LatticeSequence with the achieved (δ, L)
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if np.any(a <= 0):
        raise ValueError(f"Lattice parameters must be positive, got {a.tolist()}")
    d = a.size
    alphas = np.asarray(alpha_list, dtype=float).reshape(-1, d) if len(alpha_list) else np.zeros((0, d))
    b_vectors = []
    for alpha in alphas:
        if not np.any(alpha):
            raise InvalidWeightDirectionError("Weight directions must be nonzero")
        scaled = alpha / a
        b_vectors.append(scaled / np.min(np.abs(scaled[scaled != 0.0])))
    seq = build_sequence(b_vectors, d, N)
    points = np.pi * seq.rho / a
    constants = lattice_constants(a, alphas, seq.nodes, points, N)
    logger.info(f"lattice a={a.tolist()}: δ={constants['delta']:.4g}, L={constants['L']:.4g}, {seq.size} points")
    return LatticeSequence(a, alphas, float(k0), N, seq.nodes, points, constants["delta"], constants["L"],
                           constants["separation"], constants["avoidance"])


def perturb_lattice(seq: LatticeSequence, amplitude: float,
                    rng: Optional[np.random.Generator] = None) -> LatticeSequence:
    """
    Random admissible perturbation of a near-lattice

    The shift of λ_i depends on (n_1..n_i) only, so the triangular form
    survives. amplitude must stay below δ/2 so separation and avoidance
    stay positive; the achieved constants are measured again.
    """
    if amplitude < 0:
        raise ValueError(f"Perturbation amplitude must be >= 0, got {amplitude}")
    if amplitude >= seq.delta / 2.0:
        raise ValueError(f"Perturbation {amplitude} would break separation δ={seq.delta:.4g}")
    rng = rng or np.random.default_rng()
    W = 2 * seq.N + 1
    index = seq.nodes + seq.N
    shifts = np.empty_like(seq.points)
    for i in range(seq.d):
        # one shift per prefix (n_1..n_i)
        table = rng.uniform(-amplitude, amplitude, size=(W,) * (i + 1))
        shifts[:, i] = table[tuple(index[:, :i + 1].T)]
    points = seq.points + shifts
    constants = lattice_constants(seq.a, seq.alphas, seq.nodes, points, seq.N)
    if constants["delta"] <= 0:
        raise ValueError("Perturbation pushed a point onto the weight zero set; lower the amplitude")
    return LatticeSequence(seq.a, seq.alphas, seq.k0, seq.N, seq.nodes, points, constants["delta"],
                           constants["L"], constants["separation"], constants["avoidance"])
