"""Symbolic expansions of the multi-operator convolution kernels M_{n;m}
(direct, dual and mixed partition sums) and their numerical pairing with
test functions.

A kernel term is fully determined by
  * a locality-phase power (multiples of e^{-2 i pi omega}),
  * positional Dirac pairings between left (alpha) and right (beta) slots,
  * target orderings of the alpha and beta words (the scalar S-word factors),
  * the form-factor symbol: a word of slots with +/- i pi shifts and
    boundary-value tags ('-' for the lower side of +i pi arguments, '+' for
    the upper side of -i pi arguments, '0' for real arguments).
"""
from __future__ import annotations

import dataclasses
import itertools
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_legendre

from .combin import Slot, concat, reverse_word, s_product
from .formfactor import OperatorSpec
from .specfun import ModelParams, s_matrix

EPS_SEQUENCE = (1e-2, 5e-3, 2.5e-3)


@dataclasses.dataclass(frozen=True)
class FormalTerm:
    phase_power: int                       # power of e^{-2 i pi omega}
    dirac_pairs: tuple                     # ((alpha_slot, beta_slot), ...)
    alpha_to: tuple                        # target ordering of the alpha word
    beta_to: tuple                         # target ordering of the beta word
    ff_word: tuple                         # Slot word with shift/tag annotations
    sign: int = 1


@dataclasses.dataclass(frozen=True)
class FormalKernelSum:
    flavor: str                            # 'direct' | 'dual' | 'mixed' | 'jump'
    n: int
    m: int
    terms: tuple

    def describe(self) -> str:
        lines = [f"kernel {self.flavor} n={self.n} m={self.m} terms={len(self.terms)}"]
        for t in self.terms:
            pairs = " ".join(f"a{i.index}~b{j.index}" for i, j in t.dirac_pairs)
            ff = " ".join(
                f"{s.family}{s.index}"
                f"{'+ipi' if s.shift > 0 else '-ipi' if s.shift < 0 else ''}{s.tag}"
                for s in t.ff_word)
            sg = "-" if t.sign < 0 else "+"
            lines.append(f"  {sg} phase^{t.phase_power} [{pairs}] F({ff})")
        return "\n".join(lines)


def _alpha_word(n: int) -> tuple:
    return tuple(Slot("a", i) for i in range(n))


def _beta_word(m: int) -> tuple:
    return tuple(Slot("b", j) for j in range(m))


def _select(word: tuple, idx: Sequence[int]) -> tuple:
    return tuple(word[i] for i in idx)


def expand_direct(n: int, m: int) -> FormalKernelSum:
    """Direct partition sum for M_{n;m}.

    Sum over A = A1 u A2 (index-ordered) and B = B1 u1 B2 (B1 unordered,
    B2 index-ordered) with |A1| = |B1|; each term carries the full locality
    phase e^{-2 i pi omega n}, Dirac pairings (A1)_r ~ (B1)_r, exchange words
    to A1 u A2 and B1 u B2, and the boundary-value symbol
    F_{-,0}(<-A2 + i pi e, B2).
    """
    A, B = _alpha_word(n), _beta_word(m)
    terms = []
    for p in range(min(n, m) + 1):
        for a1_idx in itertools.combinations(range(n), p):
            a2_idx = tuple(i for i in range(n) if i not in a1_idx)
            for b1_set in itertools.combinations(range(m), p):
                b2_idx = tuple(j for j in range(m) if j not in b1_set)
                for b1_idx in itertools.permutations(b1_set):
                    A1, A2 = _select(A, a1_idx), _select(A, a2_idx)
                    B1, B2 = _select(B, b1_idx), _select(B, b2_idx)
                    ff = concat(
                        tuple(s.shifted(+1, "-") for s in reverse_word(A2)),
                        tuple(s.shifted(0, "0") for s in B2))
                    terms.append(FormalTerm(
                        phase_power=n,
                        dirac_pairs=tuple(zip(A1, B1)),
                        alpha_to=concat(A1, A2),
                        beta_to=concat(B1, B2),
                        ff_word=ff))
    return FormalKernelSum("direct", n, m, tuple(terms))


def expand_dual(n: int, m: int) -> FormalKernelSum:
    """Dual partition sum for M_{n;m}: no locality phase, exchange words to
    <-A2 u <-A1 and B2 u <-B1, symbol F_{0,+}(B2, A2 - i pi e)."""
    A, B = _alpha_word(n), _beta_word(m)
    terms = []
    for p in range(min(n, m) + 1):
        for a1_idx in itertools.combinations(range(n), p):
            a2_idx = tuple(i for i in range(n) if i not in a1_idx)
            for b1_set in itertools.combinations(range(m), p):
                b2_idx = tuple(j for j in range(m) if j not in b1_set)
                for b1_idx in itertools.permutations(b1_set):
                    A1, A2 = _select(A, a1_idx), _select(A, a2_idx)
                    B1, B2 = _select(B, b1_idx), _select(B, b2_idx)
                    ff = concat(
                        tuple(s.shifted(0, "0") for s in B2),
                        tuple(s.shifted(-1, "+") for s in A2))
                    terms.append(FormalTerm(
                        phase_power=0,
                        dirac_pairs=tuple(zip(A1, B1)),
                        alpha_to=concat(reverse_word(A2), reverse_word(A1)),
                        beta_to=concat(B2, reverse_word(B1)),
                        ff_word=ff))
    return FormalKernelSum("dual", n, m, tuple(terms))


def expand_mixed(n: int, m: int, a1_idx: Sequence[int]) -> FormalKernelSum:
    """Mixed partition sum for M_{n;m} at a fixed split A = A1 u A2.

    a1_idx selects A1 (index-ordered; complement is A2). Sum over
    A1 = C1 u C2, A2 = D1 u D2 (index-ordered) and B = B1 u1 B2 u1 B3
    (B1, B3 unordered, B2 index-ordered) with |C1| = |B1|, |D1| = |B3|.
    Phase power |A1|; pairings C1~B1 and D1~B3; symbol
    F_{-,0,+}(<-C2 + i pi e, B2, <-D2 - i pi e); exchange words to
    C1 u C2 u D2 u D1 and B1 u B2 u B3.
    """
    A, B = _alpha_word(n), _beta_word(m)
    a1_idx = tuple(sorted(a1_idx))
    a2_idx = tuple(i for i in range(n) if i not in a1_idx)
    A1, A2 = _select(A, a1_idx), _select(A, a2_idx)
    terms = []
    for p1 in range(min(len(A1), m) + 1):
        for c1_pos in itertools.combinations(range(len(A1)), p1):
            C1 = _select(A1, c1_pos)
            C2 = tuple(s for s in A1 if s not in C1)
            for p3 in range(min(len(A2), m - p1) + 1):
                for d1_pos in itertools.combinations(range(len(A2)), p3):
                    D1 = _select(A2, d1_pos)
                    D2 = tuple(s for s in A2 if s not in D1)
                    for b1_set in itertools.combinations(range(m), p1):
                        rest = tuple(j for j in range(m) if j not in b1_set)
                        for b3_set in itertools.combinations(rest, p3):
                            b2_idx = tuple(j for j in rest if j not in b3_set)
                            for b1_idx in itertools.permutations(b1_set):
                                for b3_idx in itertools.permutations(b3_set):
                                    B1 = _select(B, b1_idx)
                                    B2 = _select(B, b2_idx)
                                    B3 = _select(B, b3_idx)
                                    ff = concat(
                                        tuple(s.shifted(+1, "-")
                                              for s in reverse_word(C2)),
                                        tuple(s.shifted(0, "0") for s in B2),
                                        tuple(s.shifted(-1, "+")
                                              for s in reverse_word(D2)))
                                    terms.append(FormalTerm(
                                        phase_power=len(A1),
                                        dirac_pairs=tuple(zip(C1 + D1, B1 + B3)),
                                        alpha_to=concat(C1, C2, D2, D1),
                                        beta_to=concat(B1, B2, B3),
                                        ff_word=ff))
    return FormalKernelSum("mixed", n, m, tuple(terms))


def jump_terms(m: int) -> FormalKernelSum:
    """Jump of F(alpha + i pi, beta_1..beta_m) across real alpha:

      F_up - F_down = sum_a 2 pi delta(alpha - beta_a) [
          prod_{k<a} S(beta_k - beta_a)
          - e^{2 i pi omega} prod_{k>a} S(beta_a - beta_k) ] F(beta without a)

    encoded as Dirac terms; phase_power -1 marks the e^{+2 i pi omega} branch.
    """
    A = _alpha_word(1)
    B = _beta_word(m)
    terms = []
    for a in range(m):
        rest = tuple(B[j] for j in range(m) if j != a)
        ff = tuple(s.shifted(0, "0") for s in rest)
        terms.append(FormalTerm(
            phase_power=0,
            dirac_pairs=((A[0], B[a]),),
            alpha_to=A,
            beta_to=concat((B[a],), rest),    # beta_a to the front: S(beta_k - beta_a), k<a
            ff_word=ff))
        terms.append(FormalTerm(
            phase_power=-1,
            dirac_pairs=((A[0], B[a]),),
            alpha_to=A,
            beta_to=concat(rest, (B[a],)),    # beta_a to the back: S(beta_a - beta_k), k>a
            ff_word=ff,
            sign=-1))
    return FormalKernelSum("jump", 1, m, tuple(terms))


# ---------------------------------------------------------------------------
# numerical pairing
# ---------------------------------------------------------------------------

def _gauss_nodes(L: float, nodes: int):
    x, w = roots_legendre(nodes)
    return L * x, L * w


def _eval_points(g: Callable, pts: np.ndarray, vector: bool) -> np.ndarray:
    """Evaluate g on all points, either in one vectorized call or point-wise."""
    if vector:
        return np.asarray(g(pts), dtype=complex)
    return np.array([g(x) for x in pts], dtype=complex)


def _integrate_1d(g: Callable, poles: Sequence[tuple], L: float, nodes: int,
                  vector: bool = False) -> complex:
    """integral over [-L, L] of g, where g has simple poles at z_r = p_r +
    i s_r eps given as (p_r real, z_r complex) pairs.

    Uses exact partial fractions of H(x) = g(x) prod_r (x - z_r) plus
    smooth-part subtraction, so the quadrature only ever sees functions whose
    variation scale is O(1), not O(eps).
    """
    xs, ws = _gauss_nodes(L, nodes)
    if not poles:
        gv = _eval_points(g, xs.astype(complex), vector)
        return complex(np.sum(ws * gv))
    zs = np.array([z for (_, z) in poles], dtype=complex)
    probes = np.array([p for (p, _) in poles], dtype=complex)
    pts = np.concatenate([xs.astype(complex), probes])
    gv = _eval_points(g, pts, vector)
    hv = gv * np.prod(pts[:, None] - zs[None, :], axis=1)
    hvals, hprobes = hv[: len(xs)], hv[len(xs):]
    total = 0.0 + 0.0j
    for r, (pr, zr) in enumerate(poles):
        cpf = 1.0 + 0.0j
        for rp, (_, zrp) in enumerate(poles):
            if rp != r:
                cpf *= zr - zrp
        cpf = 1.0 / cpf
        h_probe = hprobes[r]
        total += cpf * complex(np.sum(ws * (hvals - h_probe) / (xs - zr)))
        total += cpf * h_probe * np.log((L - zr) / (-L - zr))
    return total


_PROBE_DELTA = 1e-3


def _integrate_1d_limit(g: Callable, poles: Sequence[tuple], L: float, nodes: int,
                        delta: float = _PROBE_DELTA, vector: bool = False) -> complex:
    """eps -> 0 limit of the regulated integral, done analytically.

    poles are (p real, side) pairs, side = -1 when the regulated pole sits
    below the real axis (from +i pi shifts: the limit adds -i pi residue) and
    side = +1 when above (from -i pi shifts: +i pi residue). The PV part is
    handled by smooth subtraction of H(x) = g(x) prod_r (x - p_r); H(p_r) is
    recovered by a 4-point symmetric probe (error O(delta^4)).
    """
    xs, ws = _gauss_nodes(L, nodes)
    if not poles:
        gv = _eval_points(g, xs.astype(complex), vector)
        return complex(np.sum(ws * gv))
    ps = np.array([p for (p, _) in poles], dtype=float)
    offs = np.array([delta, -delta, 1j * delta, -1j * delta], dtype=complex)
    probes = (ps[:, None] + offs[None, :]).ravel()
    pts = np.concatenate([xs.astype(complex), probes])
    gv = _eval_points(g, pts, vector)
    hv = gv * np.prod(pts[:, None] - ps[None, :], axis=1)
    hvals = hv[: len(xs)]
    hprobe = hv[len(xs):].reshape(len(poles), 4).mean(axis=1)
    total = 0.0 + 0.0j
    for r, (pr, side) in enumerate(poles):
        cpf = 1.0 + 0.0j
        for rp, (prp, _) in enumerate(poles):
            if rp != r:
                cpf *= pr - prp
        cpf = 1.0 / cpf
        h_at = hprobe[r]
        total += cpf * complex(np.sum(ws * (hvals - h_at) / (xs - pr)))
        pv_log = np.log(abs(L - pr)) - np.log(abs(L + pr))
        total += cpf * h_at * (pv_log + 1j * np.pi * side)
    return total


def _pair_at_eps(kernel: FormalKernelSum, alphas, test, op, params: ModelParams,
                 eps: float, L: float, nodes: int) -> complex:
    n, m = kernel.n, kernel.m
    if len(alphas) != n:
        raise ValueError("alpha count does not match the kernel")
    A, B = _alpha_word(n), _beta_word(m)
    aval = {A[i]: complex(alphas[i]) for i in range(n)}
    phase = np.exp(-2j * np.pi * op.omega)
    sfun = lambda d: s_matrix(d, params)

    total = 0.0 + 0.0j
    for term in kernel.terms:
        fixed = dict(aval)
        for aslot, bslot in term.dirac_pairs:
            fixed[bslot] = aval[aslot]
        free = [s for s in B if s not in fixed]

        def integrand(assign: dict) -> complex:
            vals = {**fixed, **assign}
            sa = s_product(A, term.alpha_to, vals, sfun, side="alpha") if n > 1 else 1.0
            sb = s_product(B, term.beta_to, vals, sfun, side="beta") if m > 1 else 1.0
            args = []
            for s in term.ff_word:
                v = vals[s.base()]
                if s.shift > 0:
                    v = v + 1j * (np.pi - eps)
                elif s.shift < 0:
                    v = v - 1j * (np.pi - eps)
                args.append(v)
            fv = op.provider.evaluate(args)
            tv = test([vals[b] for b in B])
            return sa * sb * fv * tv

        # kinematic poles in each free variable v: F(u + i(pi-eps) - v) is
        # singular at v = u - i eps for every +i pi-shifted slot value u, and
        # F(v - d + i(pi-eps)) at v = d + i eps for every -i pi-shifted value d
        # (the shifted values are Dirac-fixed alpha's). At eps = 0 the limit
        # is taken analytically (PV + i pi delta).
        if op.provider.pole_free:
            poles = []
        elif eps == 0.0:
            poles = ([(fixed[s.base()].real, -1) for s in term.ff_word if s.shift > 0]
                     + [(fixed[s.base()].real, +1) for s in term.ff_word if s.shift < 0])
        else:
            up = [fixed[s.base()].real for s in term.ff_word if s.shift > 0]
            down = [fixed[s.base()].real for s in term.ff_word if s.shift < 0]
            poles = ([(p, p - 1j * eps) for p in up]
                     + [(p, p + 1j * eps) for p in down])

        def rec(k: int, assign: dict) -> complex:
            if k == len(free):
                return integrand(assign)
            v = free[k]
            innermost = k == len(free) - 1

            def g(x):
                # x is an array at the innermost level, a scalar above it
                assign[v] = x if innermost else complex(x)
                out = rec(k + 1, assign)
                del assign[v]
                return out

            # stagger node counts and probe offsets per axis so grids and
            # probe points never coincide across nesting levels
            if eps == 0.0:
                return _integrate_1d_limit(g, poles, L, nodes + 8 * k,
                                           delta=_PROBE_DELTA * (1.0 + 0.618 * k),
                                           vector=innermost)
            return _integrate_1d(g, poles, L, nodes + 8 * k, vector=innermost)

        value = rec(0, {})
        total += term.sign * phase ** term.phase_power * value \
            / (2.0 * np.pi) ** len(free)
    return total


def pair_numeric(kernel: FormalKernelSum, alphas: Sequence[float], test: Callable,
                 op: OperatorSpec, params: ModelParams,
                 eps_seq: Sequence[float] = (0.0,),
                 L: float = 8.0, nodes: int = 48) -> complex:
    """Pair the kernel against a test function:

        P(alpha) = int d^m beta / (2 pi)^m  M_{n;m}(alpha; beta) test(beta).

    Dirac pairings are resolved exactly; remaining beta integrals use
    Gauss-Legendre with analytic pole subtraction. The default eps_seq (0,)
    takes the regulator limit analytically (PV + i pi delta splitting); a
    positive sequence such as EPS_SEQUENCE computes at the given common
    regulators and Richardson-extrapolates to 0 at first order, iterated.
    """
    val, _ = pair_numeric_with_tail(kernel, alphas, test, op, params, eps_seq, L, nodes)
    return val


def pair_numeric_with_tail(kernel, alphas, test, op, params,
                           eps_seq: Sequence[float] = (0.0,),
                           L: float = 8.0, nodes: int = 48):
    """pair_numeric plus the last extrapolation increment as error indicator."""
    vals = [_pair_at_eps(kernel, alphas, test, op, params, e, L, nodes)
            for e in eps_seq]
    if len(vals) == 1:
        return vals[0], float("nan")
    # iterated first-order Richardson (regulators halving)
    level = list(vals)
    tail = abs(level[-1] - level[-2])
    order = 1
    while len(level) > 1:
        fac = 2.0 ** order
        level = [(fac * level[i + 1] - level[i]) / (fac - 1.0)
                 for i in range(len(level) - 1)]
        order += 1
    return level[0], tail


def term_count(flavor: str, n: int, m: int) -> int:
    """Number of terms in the direct/dual expansion: sum_p C(n,p) m!/(m-p)!."""
    import math
    return sum(math.comb(n, p) * math.perm(m, p) for p in range(min(n, m) + 1))
