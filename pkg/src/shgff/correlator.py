"""Truncated k-point correlation functions by shifted-contour quadrature.

The r-truncated correlator is a sum over composition vectors n = (n_ba) of
multidimensional rapidity integrals: each block (b, a) carries n_ba variables
integrated along R + i eta^(ba), with the ladder of imaginary shifts
eta^(kk-1) > ... > eta^(k1) > eta^(k-1,k-2) > ... > eta^(21) > 0 keeping all
kinematic poles at a safe distance so no regulators are needed.
"""
from __future__ import annotations

import dataclasses
import itertools
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_legendre

from .combin import CompositionVector, blocks, enumerate_compositions, omega_ba, omega_ba_t
from .formfactor import OperatorSpec
from .specfun import ModelParams, minkowski_dot, momentum, s_matrix


@dataclasses.dataclass(frozen=True)
class SpacetimePoint:
    x0: float
    x1: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x0, self.x1], dtype=float)


def check_region(points: Sequence[SpacetimePoint]) -> bool:
    """True iff all pair separations are space-like and the spatial
    coordinates strictly decrease along the operator list (x_a;1 > x_b;1 for
    a < b)."""
    for a in range(len(points)):
        for b in range(a + 1, len(points)):
            d0 = points[a].x0 - points[b].x0
            d1 = points[a].x1 - points[b].x1
            if d0 * d0 - d1 * d1 >= 0.0:
                return False
            if points[a].x1 <= points[b].x1:
                return False
    return True


def eta_max(params: ModelParams) -> float:
    """Safe overall scale for contour shifts: a quarter of the distance from
    the real axis to the nearest S-matrix/form-factor singularity."""
    cands = [np.pi / 2.0]
    if params.b > 0.0:
        cands.append(2.0 * np.pi * params.b)
        cands.append(np.pi * (1.0 - 2.0 * params.b))
    return min(cands) / 4.0


@dataclasses.dataclass(frozen=True)
class ContourLadder:
    """Imaginary shifts eta^(ba) per block, strictly increasing in the
    canonical block order (2,1) < (3,1) < (3,2) < (4,1) < ... on the blocks
    that carry variables."""

    k: int
    eta: dict

    def validate(self, comp: CompositionVector) -> None:
        occupied = [blk for blk, cnt in comp.as_dict().items() if cnt > 0]
        occupied.sort()
        prev = 0.0
        for blk in occupied:
            e = self.eta[blk]
            if not (e > prev):
                raise ValueError(
                    f"ladder violation at block {blk}: eta={e} must exceed {prev}")
            prev = e

    def shift(self, blk) -> float:
        return self.eta[blk]


def default_ladder(comp: CompositionVector, params: ModelParams) -> ContourLadder:
    """Equally spaced admissible ladder: occupied blocks get
    eta_max * rank / (P + 1) in canonical order."""
    occupied = sorted(blk for blk, cnt in comp.as_dict().items() if cnt > 0)
    P = len(occupied)
    em = eta_max(params)
    eta = {blk: em * (i + 1) / (P + 1) for i, blk in enumerate(occupied)}
    # unoccupied blocks carry no variables; park them consistently below
    for blk in blocks(comp.k):
        eta.setdefault(blk, 0.0)
    return ContourLadder(comp.k, eta)


@dataclasses.dataclass
class CorrelatorRequest:
    params: ModelParams
    operators: Sequence[OperatorSpec]     # O_1 ... O_k
    points: Sequence[SpacetimePoint]
    r: Sequence[int]                      # truncation ranks r_1..r_{k-1}
    ladder: ContourLadder | None = None
    nodes: int = 96
    L: float = 8.0
    max_nodes: int = 3072
    tol: float = 1e-9

    @property
    def k(self) -> int:
        return len(self.operators)


@dataclasses.dataclass(frozen=True)
class RapidityBlockAssignment:
    """Flattened layout of the integration variables of one composition:
    variable i belongs to block block_of[i] with in-block index idx_of[i]."""

    comp: CompositionVector
    block_of: tuple
    idx_of: tuple

    @classmethod
    def build(cls, comp: CompositionVector) -> "RapidityBlockAssignment":
        border, idxs = [], []
        for blk, cnt in comp.as_dict().items():
            for j in range(cnt):
                border.append(blk)
                idxs.append(j)
        return cls(comp, tuple(border), tuple(idxs))

    @property
    def dim(self) -> int:
        return len(self.block_of)


def _scattering_pairs(k: int, mixed_t: int | None = None) -> list[tuple]:
    """Block pairs whose variables pick up two-body S-factors.

    Standard case: S(gamma^(vu) - gamma^(ps)) for every interleaved pair of
    blocks s < u < p < v. For the t-distinguished representation the extra
    factors couple gamma^(vu) (v > t, u < t) with gamma^(ts) (s < t) as
    S(gamma^(ts) - gamma^(vu)) and with gamma^(st) (s > t) as
    S(gamma^(vu) - gamma^(st)).
    Returns (first_block, second_block) meaning prod S(gamma_first - gamma_second).
    """
    pairs = []
    for v in range(4, k + 1):
        for p in range(3, v):
            for u in range(2, p):
                for s in range(1, u):
                    pairs.append(((v, u), (p, s)))
    if mixed_t is not None:
        t = mixed_t
        for v in range(t + 1, k + 1):
            for u in range(1, t):
                for s in range(1, t):
                    pairs.append(((t, s), (v, u)))
                for s in range(t + 1, k + 1):
                    pairs.append(((v, u), (s, t)))
    return pairs


def _form_factor_value(request: CorrelatorRequest, gamma: dict, mixed_t: int | None
                       ) -> complex:
    """Product over operators of F^(O_p) evaluated on its incoming/outgoing
    rapidity word; gamma maps block -> array of contour points (vectorized
    over the last axis)."""
    k = request.k
    out = 1.0 + 0.0j
    for p in range(1, k + 1):
        left = []   # rapidities shifted by +i pi (operators to the left)
        for a in range(p - 1, 0, -1):
            left.extend(reversed(gamma[(p, a)]))
        right = []  # plain rapidities toward operators to the right
        for b in range(k, p, -1):
            right.extend(gamma[(b, p)])
        if mixed_t is not None and p == mixed_t:
            args = list(right) + [v - 1j * np.pi for v in left]
        else:
            args = [v + 1j * np.pi for v in left] + list(right)
        if args:
            out = out * request.operators[p - 1].provider.evaluate(args)
        else:
            out = out * request.operators[p - 1].provider.vacuum()
    return out


def integrand(request: CorrelatorRequest, comp: CompositionVector, gamma: dict,
              mixed_t: int | None = None):
    """S-factors x plane waves x form-factor product at the given contour
    points (each gamma[blk] a list of complex arrays, broadcastable)."""
    params = request.params
    k = request.k
    val = 1.0 + 0.0j
    for (blk1, blk2) in _scattering_pairs(k, mixed_t):
        for u in gamma.get(blk1, ()):  # noqa: B007
            for v in gamma.get(blk2, ()):
                val = val * s_matrix(u - v, params)
    # plane waves exp(i pbar(gamma^(ba)) . x_ba)
    xs = [pt.as_array() for pt in request.points]
    for (b, a), vs in gamma.items():
        if not len(vs):
            continue
        xba = xs[b - 1] - xs[a - 1]
        for v in vs:
            pv = momentum(v, params)
            val = val * np.exp(1j * minkowski_dot(pv, xba))
    val = val * _form_factor_value(request, gamma, mixed_t)
    return val


def _composition_phase(comp: CompositionVector, operators, mixed_t: int | None) -> complex:
    omegas = [op.omega for op in operators]
    ph = 0.0
    for (b, a), cnt in comp.as_dict().items():
        if cnt == 0:
            continue
        w = omega_ba(b, a, omegas) if mixed_t is None else omega_ba_t(b, a, mixed_t, omegas)
        ph += cnt * w
    return np.exp(-2j * np.pi * ph)


def compute_I_n(request: CorrelatorRequest, comp: CompositionVector,
                mixed_t: int | None = None, nodes: int | None = None,
                ladder: ContourLadder | None = None) -> tuple[complex, float]:
    """The multidimensional contour integral of one composition, with an error
    estimate from node-count doubling. Deterministic reduction order
    (variables in canonical block order, nodes in Gauss-Legendre order)."""
    ladder = ladder or request.ladder or default_ladder(comp, request.params)
    ladder.validate(comp)
    nodes = nodes or request.nodes
    v1 = _quad_tensor(request, comp, ladder, nodes, mixed_t)
    v2 = _quad_tensor(request, comp, ladder, 2 * nodes, mixed_t)
    err = abs(v2 - v1)
    while err > request.tol and 4 * nodes <= request.max_nodes:
        nodes *= 2
        v1, v2 = v2, _quad_tensor(request, comp, ladder, 2 * nodes, mixed_t)
        err = abs(v2 - v1)
    return v2, err


def _quad_tensor(request, comp, ladder, nodes, mixed_t) -> complex:
    assign = RapidityBlockAssignment.build(comp)
    d = assign.dim
    if d == 0:
        gamma = {blk: [] for blk in blocks(comp.k)}
        return complex(integrand(request, comp, gamma, mixed_t))
    L = request.L
    xg, wg = roots_legendre(nodes)
    axes, weights = [], []
    for i in range(d):
        blk = assign.block_of[i]
        axes.append(L * xg + 1j * ladder.shift(blk))
        weights.append(L * wg)
    grids = np.meshgrid(*axes, indexing="ij")
    gamma = {blk: [] for blk in blocks(comp.k)}
    for i in range(d):
        gamma[assign.block_of[i]].append(grids[i])
    vals = integrand(request, comp, gamma, mixed_t)
    wtot = weights[0]
    for w in weights[1:]:
        wtot = np.multiply.outer(wtot, w)
    return complex(np.sum(vals * wtot))


@dataclasses.dataclass
class CorrelatorResult:
    value: complex
    error: float
    breakdown: list   # (CompositionVector, I_n, err, phase) per composition

    def describe(self) -> str:
        lines = [f"W = {self.value} (err <= {self.error:.3e})"]
        for comp, val, err, ph in self.breakdown:
            lines.append(f"  n={comp.counts} I_n={val} err={err:.3e} phase={ph}")
        return "\n".join(lines)


def compute_W_r(request: CorrelatorRequest, mixed_t: int | None = None
                ) -> CorrelatorResult:
    """Truncated correlator: sum over compositions of
    phase * I_n / (n! (2 pi)^{|n|})."""
    if not check_region(request.points):
        raise ValueError("points must be space-like separated with decreasing "
                         "spatial coordinates along the operator list")
    if mixed_t is not None and not (1 <= mixed_t <= request.k):
        raise ValueError(f"mixed_t must be in 1..{request.k}")
    comps = enumerate_compositions(request.k, tuple(request.r))
    total = 0.0 + 0.0j
    err_total = 0.0
    breakdown = []
    for comp in comps:
        val, err = compute_I_n(request, comp, mixed_t)
        ph = _composition_phase(comp, request.operators, mixed_t)
        weight = ph / (comp.factorial_weight() * (2.0 * np.pi) ** comp.total)
        total += weight * val
        err_total += abs(weight) * err
        breakdown.append((comp, val, err, ph))
    return CorrelatorResult(total, err_total, breakdown)


def compute_W_r_mixed(request: CorrelatorRequest, t: int) -> CorrelatorResult:
    """The t-distinguished representation of the same truncated correlator:
    operator t takes its conjugate-ordered form-factor word, the scattering
    word acquires the compensating factors, and the locality phases skip t."""
    return compute_W_r(request, mixed_t=t)


# ---------------------------------------------------------------------------
# smeared correlators
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class GaussianSmearing:
    """Separable Gaussian test function per operator:
    g(x) = exp(-(x0-c0)^2/(2 w0^2) - (x1-c1)^2/(2 w1^2))."""

    center: tuple
    width: tuple

    def fourier(self, q0, q1):
        """int d^2x g(x) exp(i q.x) with q.x = q0 x0 - q1 x1."""
        c0, c1 = self.center
        w0, w1 = self.width
        return (2.0 * np.pi * w0 * w1
                * np.exp(1j * q0 * c0 - 1j * q1 * c1
                         - 0.5 * (q0 * q0 * w0 * w0 + q1 * q1 * w1 * w1)))


def smeared_correlator(request: CorrelatorRequest,
                       smearings: Sequence[GaussianSmearing]) -> CorrelatorResult:
    """Truncated correlator paired with separable Gaussians, on real contours.

    The plane-wave block is replaced by the product of Gaussian Fourier
    transforms at momenta q_s = sum_{a<s} pbar(gamma^(sa)) - sum_{b>s}
    pbar(gamma^(bs)). For k = 2 there are no cross-level kinematic poles and
    the real-line limit is exact; for k >= 3 contours are shifted by the
    ladder (admissible since the Gaussians are entire and decay in any
    horizontal strip).
    """
    if len(smearings) != request.k:
        raise ValueError("one smearing per operator required")
    comps = enumerate_compositions(request.k, tuple(request.r))
    total = 0.0 + 0.0j
    err_total = 0.0
    breakdown = []
    for comp in comps:
        val, err = _smeared_I_n(request, comp, smearings)
        ph = _composition_phase(comp, request.operators, None)
        weight = ph / (comp.factorial_weight() * (2.0 * np.pi) ** comp.total)
        total += weight * val
        err_total += abs(weight) * err
        breakdown.append((comp, val, err, ph))
    return CorrelatorResult(total, err_total, breakdown)


def _smeared_I_n(request, comp, smearings) -> tuple[complex, float]:
    params = request.params
    k = request.k
    ladder = default_ladder(comp, params) if k > 2 else \
        ContourLadder(k, {blk: 0.0 for blk in blocks(k)})

    def body(gamma: dict):
        val = 1.0 + 0.0j
        for (blk1, blk2) in _scattering_pairs(k, None):
            for u in gamma.get(blk1, ()):
                for v in gamma.get(blk2, ()):
                    val = val * s_matrix(u - v, params)
        # smearing Fourier factors at the per-operator momentum transfer
        for s in range(1, k + 1):
            q0 = 0.0 + 0.0j
            q1 = 0.0 + 0.0j
            for a in range(1, s):
                for v in gamma[(s, a)]:
                    pv = momentum(v, params)
                    q0 = q0 + pv[..., 0]
                    q1 = q1 + pv[..., 1]
            for b in range(s + 1, k + 1):
                for v in gamma[(b, s)]:
                    pv = momentum(v, params)
                    q0 = q0 - pv[..., 0]
                    q1 = q1 - pv[..., 1]
            val = val * smearings[s - 1].fourier(q0, q1)
        return val * _form_factor_value(request, gamma, None)

    nodes = request.nodes
    v1 = _smeared_quad(request, comp, ladder, nodes, body)
    v2 = _smeared_quad(request, comp, ladder, 2 * nodes, body)
    err = abs(v2 - v1)
    while err > request.tol and 4 * nodes <= request.max_nodes:
        nodes *= 2
        v1, v2 = v2, _smeared_quad(request, comp, ladder, 2 * nodes, body)
        err = abs(v2 - v1)
    return v2, err


def _smeared_quad(request, comp, ladder, nodes, body) -> complex:
    assign = RapidityBlockAssignment.build(comp)
    d = assign.dim
    gamma = {blk: [] for blk in blocks(comp.k)}
    if d == 0:
        return complex(body(gamma))
    xg, wg = roots_legendre(nodes)
    L = request.L
    axes, weights = [], []
    for i in range(d):
        axes.append(L * xg + 1j * ladder.shift(assign.block_of[i]))
        weights.append(L * wg)
    grids = np.meshgrid(*axes, indexing="ij")
    for i in range(d):
        gamma[assign.block_of[i]].append(grids[i])
    vals = body(gamma)
    wtot = weights[0]
    for w in weights[1:]:
        wtot = np.multiply.outer(wtot, w)
    return complex(np.sum(vals * wtot))
