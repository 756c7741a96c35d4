"""Self-similar factor approximants.

A factor approximant is ``f0(g) * prod_i (1 + A_i u)**n_i`` with ``u = g**q``.
Its parameters come from the moment equations ``sum_i n_i A_i**m = B_m``,
which are solved here by a Prony/Hankel reduction: the nodes ``A_i`` are the
roots of the monic polynomial annihilating the moment sequence, and the
weights ``n_i`` then follow from a Vandermonde system.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ._numeric import ctx, exact, is_complex, mpf, real_if_close
from .errors import BranchError, DegenerateNodes, NoSolution, OrderUnavailable
from .series import (
    AsymptoticSeries,
    MomentVector,
    PowerPrefactor,
    binomial_series,
    compute_moments,
    series_mul,
)

__all__ = [
    "FactorApproximant",
    "WeightedApproximant",
    "factor_count",
    "solve_prony",
    "build_factor",
    "build_factor_constrained",
    "build_factor_interpolating",
    "evaluate_factor",
    "factor_asymptote",
    "combine_weighted",
]

UNIT_NODE = "unit_node"
A1_OVER_A0 = "a1_over_a0"

# |Im| below this (relative to 1 + |Re|) counts as real at working precision
_REAL_TOL = ctx.mpf(10) ** -20
_RESIDUAL_TOL = ctx.mpf(10) ** -20
_EVAL_IMAG_TOL = 1e-8


def factor_count(k: int) -> int:
    """Number of factors for an order-k approximant."""
    return k // 2 if k % 2 == 0 else (k + 1) // 2


def _is_integer(n) -> bool:
    ex = exact(n)
    if ex is not None:
        return ex.denominator == 1
    if is_complex(n):
        return False
    return abs(n - ctx.nint(n)) < ctx.mpf(10) ** -30


@dataclass(frozen=True)
class FactorApproximant:
    prefactor: PowerPrefactor
    factors: tuple  # ((A, n), ...)
    power_step: Fraction = Fraction(1)
    order: int | None = field(default=None, compare=False)

    @property
    def nodes(self) -> tuple:
        return tuple(a for a, _ in self.factors)

    @property
    def weights(self) -> tuple:
        return tuple(n for _, n in self.factors)

    def expand(self, order: int) -> AsymptoticSeries:
        coeffs = [ctx.mpf(1)] + [ctx.mpf(0)] * order
        for node, n in self.factors:
            coeffs = series_mul(coeffs, binomial_series(node, n, order), order)
        coeffs = [_real_part_checked(c) for c in coeffs]
        return AsymptoticSeries(self.prefactor, tuple(coeffs), self.power_step)

    def __call__(self, g) -> float:
        return evaluate_factor(self, g)

    def asymptote(self):
        return factor_asymptote(self)


def _real_part_checked(x):
    x = real_if_close(x, 1e-25)
    if is_complex(x):
        raise BranchError(f"approximant is not real: coefficient {x}")
    return x


# --------------------------------------------------------------------------
# Prony solver
# --------------------------------------------------------------------------


def _companion_roots(coeffs: Sequence) -> list:
    """Roots of x**N + sum_j coeffs[j] x**j via companion eigenvalues plus a Newton polish."""
    N = len(coeffs)
    if N == 1:
        return [-coeffs[0]]
    C = ctx.zeros(N, N)
    for i in range(1, N):
        C[i, i - 1] = 1
    for i in range(N):
        C[i, N - 1] = -coeffs[i]
    eigvals = ctx.eig(C, left=False, right=False)
    poly = [ctx.mpf(1)] + [coeffs[j] for j in reversed(range(N))]
    dpoly = [(N - i) * c for i, c in enumerate(poly[:-1])]
    roots = []
    for r in eigvals:
        for _ in range(3):
            d = ctx.polyval(dpoly, r)
            if d == 0:
                break
            r = r - ctx.polyval(poly, r) / d
        roots.append(r)
    return roots


def _canonical(pairs: list) -> list:
    return sorted(pairs, key=lambda p: (-abs(p[0]), float(ctx.arg(p[0])) if is_complex(p[0]) else 0.0))


def _pair_conjugates(pairs: list) -> list:
    """Snap near-real parameters to real and make complex entries exact conjugate pairs."""
    out = []
    pending = []
    for node, n in pairs:
        node = real_if_close(node)
        if is_complex(node):
            # weights of complex nodes may be tiny; leave them to the pairing below
            pending.append((ctx.mpc(node), ctx.mpc(n)))
        else:
            if is_complex(n):
                n = ctx.mpc(n)
                if abs(n.imag) > ctx.mpf(10) ** -15 * abs(n):
                    raise NoSolution("real node carries a complex weight")
                n = n.real
            out.append((node, n))
    while pending:
        node, n = pending.pop(0)
        if not pending:
            raise NoSolution("complex node without a conjugate partner")
        j = min(range(len(pending)), key=lambda i: abs(pending[i][0] - ctx.conj(node)))
        partner = pending.pop(j)
        scale = 1 + abs(node)
        if abs(partner[0] - ctx.conj(node)) > ctx.mpf(10) ** -15 * scale:
            raise NoSolution("complex node without a conjugate partner")
        node = (node + ctx.conj(partner[0])) / 2
        n = (n + ctx.conj(partner[1])) / 2
        out.append((node, n))
        out.append((ctx.conj(node), ctx.conj(n)))
    return out


def solve_prony(
    moments: MomentVector | dict,
    nodes: int,
    fixed_node=None,
    moment_zero=None,
) -> list:
    """Solve ``sum_i n_i A_i**m = B_m`` for ``nodes`` pairs (A_i, n_i).

    Parameters
    ----------
    moments : MomentVector or dict
        B_1..B_k (a dict may map m -> B_m directly).
    nodes : int
        Number of factors N.
    fixed_node : real, optional
        Pin one node to this value (odd-order convention); needs 2N-1 moments.
    moment_zero : real, optional
        Known total weight B_0 = sum n_i; the recurrence then starts at m = 0.

    Returns
    -------
    list of (A, n)
        Canonically ordered; complex entries come in conjugate pairs.
    """
    if isinstance(moments, MomentVector):
        B = moments.as_dict()
    else:
        B = dict(moments)
    if moment_zero is not None:
        B[0] = moment_zero
    B = {m: mpf(v) for m, v in B.items()}
    N = int(nodes)
    if N < 1:
        raise ValueError("need at least one node")
    start = 0 if 0 in B else 1
    n_rec = N - 1 if fixed_node is not None else N
    needed = range(start, start + n_rec + N)
    missing = [m for m in needed if m not in B]
    if missing:
        raise ValueError(f"not enough moments for {N} nodes: missing B_{missing[0]}")

    rows = [[B[m + j] for j in range(N)] for m in range(start, start + n_rec)]
    rhs = [-B[m + N] for m in range(start, start + n_rec)]
    if fixed_node is not None:
        x0 = mpf(fixed_node)
        rows.append([x0**j for j in range(N)])
        rhs.append(-(x0**N))
    scale = max([abs(v) for v in B.values()] + [ctx.mpf(1)])
    try:
        c = ctx.lu_solve(ctx.matrix(rows), ctx.matrix(rhs))
    except ZeroDivisionError as exc:
        raise NoSolution("singular Hankel system") from exc
    c = [c[j] for j in range(N)]

    roots = _companion_roots(c)
    if fixed_node is not None:
        i = min(range(N), key=lambda i: abs(roots[i] - x0))
        roots[i] = x0
    node_scale = max(abs(r) for r in roots)
    tiny = ctx.mpf(10) ** (-(ctx.dps // 2))
    if node_scale == 0 or any(abs(r) <= tiny * max(node_scale, 1) for r in roots):
        raise DegenerateNodes("node at zero")
    for i in range(N):
        for j in range(i + 1, N):
            if abs(roots[i] - roots[j]) <= tiny * node_scale:
                raise DegenerateNodes("repeated nodes")

    V = ctx.matrix([[r**m for r in roots] for m in range(start, start + N)])
    try:
        w = ctx.lu_solve(V, ctx.matrix([B[m] for m in range(start, start + N)]))
    except ZeroDivisionError as exc:
        raise DegenerateNodes("singular Vandermonde system") from exc
    pairs = [(roots[i], w[i]) for i in range(N)]

    # rounding floor of the cancelling sum; beyond the tolerance it cannot be verified
    eps = ctx.mpf(10) ** (-(ctx.dps - 1))
    for m, target in B.items():
        got = ctx.fsum(n * a**m for a, n in pairs)
        ref = max(abs(target), tiny * scale)
        floor = eps * ctx.fsum(abs(n * a**m) for a, n in pairs)
        if floor > _RESIDUAL_TOL * ref:
            raise NoSolution(f"moment equation m={m} is ill-conditioned at working precision")
        if abs(got - target) > _RESIDUAL_TOL * ref + floor:
            raise NoSolution(f"moment equation m={m} violated")
    pairs = _pair_conjugates(pairs)
    if fixed_node is not None:
        pairs = [(x0 if not is_complex(a) and abs(a - x0) < tiny else a, n) for a, n in pairs]
    return _canonical(pairs)


# --------------------------------------------------------------------------
# builders
# --------------------------------------------------------------------------


def build_factor(series: AsymptoticSeries, odd_convention: str = UNIT_NODE) -> FactorApproximant:
    """Factor approximant reproducing the series through its full order.

    Even orders are fully determined; odd orders pin one node either at 1
    (``unit_node``) or at a1/a0 (``a1_over_a0``).
    """
    k = series.order
    if k < 1:
        raise ValueError("factor approximants need order >= 1")
    N = factor_count(k)
    fixed = None
    if k % 2:
        if odd_convention == UNIT_NODE:
            fixed = 1
        elif odd_convention == A1_OVER_A0:
            fixed = series.coefficients[1]
        else:
            raise ValueError(f"unknown odd-order convention {odd_convention!r}")
    moments = compute_moments(series)
    if all(b == 0 for b in moments.values):
        # the series is the bare prefactor; no factors needed
        return FactorApproximant(series.prefactor, (), series.power_step, k)
    try:
        pairs = solve_prony(moments, N, fixed_node=fixed)
    except NoSolution as exc:
        raise OrderUnavailable(f"order {k}: {exc}") from exc
    return FactorApproximant(series.prefactor, tuple(pairs), series.power_step, k)


def build_factor_constrained(series: AsymptoticSeries) -> FactorApproximant:
    """Factor approximant whose total power cancels the prefactor power.

    The result tends to the constant ``factor_asymptote(...)[0]`` at large g.
    Odd k uses a square Prony system with B_0 = -alpha/q; even k adds one
    factor pinned at A = 1 so that all moments B_0..B_k are kept.
    """
    alpha = series.prefactor.exponent
    if alpha >= 0:
        raise ValueError("power restriction needs a negative prefactor exponent")
    k = series.order
    if k < 1:
        raise ValueError("power restriction needs order >= 1")
    total = -alpha / series.power_step
    moments = compute_moments(series)
    try:
        if k % 2:
            pairs = solve_prony(moments, (k + 1) // 2, moment_zero=total)
        else:
            pairs = solve_prony(moments, k // 2 + 1, fixed_node=1, moment_zero=total)
    except NoSolution as exc:
        raise OrderUnavailable(f"order {k}: {exc}") from exc
    approx = FactorApproximant(series.prefactor, tuple(pairs), series.power_step, k)
    try:
        factor_asymptote(approx)
    except BranchError as exc:
        raise OrderUnavailable(f"order {k}: limit is not real") from exc
    return approx


def _newton(residual, jacobian, z0, tol, maxiter=80):
    """Damped Newton iteration; returns the root or None."""
    z = list(z0)
    F = residual(z)
    norm = ctx.norm(ctx.matrix(F))
    for _ in range(maxiter):
        if norm < tol:
            return z
        J = jacobian(z)
        try:
            step = ctx.lu_solve(ctx.matrix(J), -ctx.matrix(F))
        except ZeroDivisionError:
            return None
        t = ctx.mpf(1)
        while t > ctx.mpf(2) ** -20:
            trial = [z[i] + t * step[i] for i in range(len(z))]
            try:
                Ft = residual(trial)
            except (ZeroDivisionError, ValueError):
                Ft = None
            if Ft is not None:
                nt = ctx.norm(ctx.matrix(Ft))
                if nt < norm:
                    z, F, norm = trial, Ft, nt
                    break
            t /= 2
        else:
            return None
    return z if norm < tol else None


def build_factor_interpolating(series: AsymptoticSeries, asymptote, starts: int = 32) -> FactorApproximant:
    """Order-(k+1) factor approximant that also honours the large-g limit.

    ``asymptote`` is a StrongCouplingExpansion (or a sequence of (b, alpha));
    its leading term (b1, alpha1) fixes the total power and, for odd k+1, the
    amplitude of the approximant at infinity.
    """
    terms = asymptote.terms if hasattr(asymptote, "terms") else tuple(asymptote)
    b1, alpha1 = mpf(terms[0][0]), terms[0][1]
    k = series.order
    if k < 1:
        raise ValueError("interpolation needs order >= 1")
    q = series.power_step
    total_ex = exact(alpha1)
    total = (total_ex - series.prefactor.exponent) / q if total_ex is not None else (
        (mpf(alpha1) - mpf(series.prefactor.exponent)) / mpf(q)
    )
    moments = compute_moments(series)
    K = k + 1
    if K % 2 == 0:
        try:
            pairs = solve_prony(moments, K // 2, moment_zero=total)
        except NoSolution as exc:
            raise OrderUnavailable(f"order {k}+1: {exc}") from exc
        return FactorApproximant(series.prefactor, tuple(pairs), q, K)

    N = (K + 1) // 2
    B = [mpf(b) for b in moments.values]
    log_target = ctx.log(b1 / mpf(series.prefactor.amplitude))
    total = mpf(total)

    def residual(z):
        A, n = z[:N], z[N:]
        r = [ctx.fsum(n[i] * A[i] ** m for i in range(N)) - B[m - 1] for m in range(1, k + 1)]
        r.append(ctx.fsum(n) - total)
        r.append(ctx.fsum(n[i] * ctx.log(A[i]) for i in range(N)) - log_target)
        return r

    def jacobian(z):
        A, n = z[:N], z[N:]
        J = []
        for m in range(1, k + 1):
            J.append([m * n[i] * A[i] ** (m - 1) for i in range(N)] + [A[i] ** m for i in range(N)])
        J.append([0] * N + [1] * N)
        J.append([n[i] / A[i] for i in range(N)] + [ctx.log(A[i]) for i in range(N)])
        return J

    seeds = _interpolation_seeds(series, N, starts)
    tol = ctx.mpf(10) ** -30
    for z0 in seeds:
        z = _newton(residual, jacobian, z0, tol)
        if z is None:
            continue
        try:
            pairs = _pair_conjugates(list(zip(z[:N], z[N:])))
        except NoSolution:
            continue
        approx = FactorApproximant(series.prefactor, tuple(_canonical(pairs)), q, K)
        try:
            amp, _ = factor_asymptote(approx)
        except BranchError:
            continue
        if abs(amp - b1) <= ctx.mpf(10) ** -15 * abs(b1):
            return approx
    raise OrderUnavailable(f"order {k}+1: Newton did not converge from any start")


def _interpolation_seeds(series, N, starts):
    """Deterministic starting points: the unconstrained build plus one extra factor, perturbed."""
    base = []
    k = series.order
    for kk in (k, k - 1):
        if kk < 1:
            continue
        try:
            base = list(build_factor(series.truncate(kk)).factors)
            break
        except OrderUnavailable:
            continue
    base = [(ctx.mpc(a), ctx.mpc(n)) for a, n in base][: N - 1]
    while len(base) < N - 1:
        base.append((ctx.mpc(1 + len(base)), ctx.mpc(0.1)))
    rng = random.Random(20240917)
    extras = [ctx.mpc(x) for x in (0.5, 2, 0.1, 5, 1)]
    seeds = []
    for s in range(starts):
        extra = extras[s % len(extras)]
        pts = base + [(extra, ctx.mpc(0.05))]
        if s >= len(extras):
            pts = [
                (a * (1 + ctx.mpc(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3))),
                 n * (1 + ctx.mpf(rng.uniform(-0.3, 0.3))) + ctx.mpc(0, rng.uniform(-0.2, 0.2)))
                for a, n in pts
            ]
        seeds.append([a for a, _ in pts] + [n for _, n in pts])
    return seeds


# --------------------------------------------------------------------------
# evaluation and asymptotics
# --------------------------------------------------------------------------


def evaluate_factor(approx: FactorApproximant, g) -> float:
    g = mpf(g)
    if g < 0:
        raise ValueError("factor approximants are evaluated for g >= 0")
    u = ctx.power(g, mpf(approx.power_step))
    value = approx.prefactor(g) if g > 0 or approx.prefactor.exponent >= 0 else None
    if value is None:
        raise BranchError(f"prefactor singular at g = {g}")
    value = ctx.mpc(value)
    for node, n in approx.factors:
        base = 1 + node * u
        if not is_complex(node):
            if base == 0 and not (_is_integer(n) and n >= 0):
                raise BranchError(f"pole-or-branch at g = {g}")
            if base < 0 and not _is_integer(n):
                raise BranchError(f"pole-or-branch at g = {g}")
        value *= ctx.power(base, n)
    re, im = value.real, value.imag
    if abs(im) > _EVAL_IMAG_TOL * abs(re):
        raise BranchError(f"approximant leaves the real axis at g = {g}")
    return float(re)


def factor_asymptote(approx: FactorApproximant):
    """(amplitude, exponent) of the large-g power law A * prod A_i**n_i * g**(alpha + q sum n)."""
    amp = mpf(approx.prefactor.amplitude)
    for node, n in approx.factors:
        amp = amp * ctx.power(node, n)
    total = ctx.fsum(n for _, n in approx.factors) if approx.factors else 0
    exponent = mpf(approx.prefactor.exponent) + mpf(approx.power_step) * total
    exponent = real_if_close(exponent, 1e-25)
    amp = real_if_close(amp, _EVAL_IMAG_TOL)
    if is_complex(amp) or is_complex(exponent):
        raise BranchError("asymptotic form is not real")
    return amp, exponent


# --------------------------------------------------------------------------
# weighted factor-root combination
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightedApproximant:
    factor: FactorApproximant
    root: object
    weight: object

    def __call__(self, g) -> float:
        lam = float(self.weight)
        return lam * self.factor(g) + (1 - lam) * self.root(g)

    def expand(self, order: int) -> AsymptoticSeries:
        f = self.factor.expand(order)
        r = self.root.expand(order)
        if f.prefactor != r.prefactor or f.power_step != r.power_step:
            raise ValueError("factor and root expansions have different leading forms")
        lam = mpf(self.weight)
        coeffs = [lam * mpf(a) + (1 - lam) * mpf(b) for a, b in zip(f.coefficients, r.coefficients)]
        return AsymptoticSeries(f.prefactor, tuple(coeffs), f.power_step)


def combine_weighted(factor: FactorApproximant, root, weight="auto", next_coefficient=None) -> WeightedApproximant:
    """Linear blend ``lam * factor + (1 - lam) * root``.

    With ``weight="auto"`` and ``next_coefficient=(k + 1, a)``, lam is fixed by
    matching that coefficient; without it lam defaults to 1/2.
    """
    if weight != "auto":
        return WeightedApproximant(factor, root, mpf(weight))
    if next_coefficient is None:
        return WeightedApproximant(factor, root, ctx.mpf(1) / 2)
    order, target = next_coefficient
    f = mpf(factor.expand(order).coefficients[order])
    r = mpf(root.expand(order).coefficients[order])
    if f == r:
        return WeightedApproximant(factor, root, ctx.mpf(1) / 2)
    return WeightedApproximant(factor, root, (mpf(target) - r) / (f - r))
