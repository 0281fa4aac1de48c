"""Positive point spectrum of the perturbed generator.

The positive eigenvalues of chi*(conv - 1) + v are characterized through the
compact symmetric operator sqrt(w) T_lam sqrt(w) on the support of the
potential, with w = (1+lam) v / (1+lam - v) in intensity-normalized units.
Its largest eigenvalue mu0(lam, R) is simple with a positive eigenfunction
and strictly decreasing in lam, so the principal eigenvalue is the unique
root of mu0(lam, R) = 1, found by bisection after a geometric probe
establishes the bracket.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import (
    InvalidParameterError,
    IterationLimitError,
    ResolutionError,
)
from .grids import Grid1D, gauss_legendre_panels
from .greens import cached_transience, resolvent_profile
from .kernels import JumpKernel, Potential

PROBE_FLOOR_EXP = 20  # smallest probed coupling is 2**-20


@dataclass(frozen=True, eq=False)
class GroundEnergyOperator:
    """Nystrom discretization of sqrt(w) T_lam sqrt(w) on supp v_R.

    ``matrix`` is the symmetrized form sqrt(q_i w_i) T(x_i - x_j)
    sqrt(w_j q_j); it shares its spectrum with the plain Nystrom matrix
    (kernel times quadrature weight), available as ``nystrom_matrix``.
    """

    lam: float
    R: float
    nodes: np.ndarray
    weights: np.ndarray
    matrix: np.ndarray
    w_values: np.ndarray

    @property
    def nystrom_matrix(self) -> np.ndarray:
        s = np.sqrt(self.weights)
        return self.matrix * (s[None, :] / s[:, None])


def _internal_potential(kernel: JumpKernel, potential: Potential) -> Potential:
    """Potential in intensity-normalized units (divided by chi)."""
    chi = kernel.chi
    if potential.sup_bound >= chi:
        raise InvalidParameterError(
            f"potential sup {potential.sup_bound} must stay below the jump "
            f"intensity {chi}"
        )
    if chi == 1.0:
        return potential
    return potential.with_amplitude_factor(1.0 / chi)


def build_bs_operator(
    kernel: JumpKernel,
    potential: Potential,
    lam: float,
    R: float,
    n_nodes: int = 128,
    nodes_per_panel: int = 8,
) -> GroundEnergyOperator:
    """Assemble the ground-energy operator at coupling lam and dilation R."""
    kernel.require_1d("build_bs_operator")
    if lam < 0:
        raise InvalidParameterError("lam must be >= 0")
    if n_nodes < 16:
        raise ResolutionError("need at least 16 quadrature nodes")
    pot = _internal_potential(kernel, potential).with_scale(R)
    S = pot.support
    n_panels = max(2, int(math.ceil(n_nodes / nodes_per_panel)))
    nodes, weights = gauss_legendre_panels(
        np.linspace(-S, S, n_panels + 1), nodes_per_panel
    )
    v = pot(nodes)
    w = (1.0 + lam) * v / (1.0 + lam - v)
    prof = resolvent_profile(kernel, lam, x_max=2.0 * S + 1.0)
    t_mat = prof(nodes[:, None] - nodes[None, :])
    root = np.sqrt(weights * w)
    matrix = root[:, None] * t_mat * root[None, :]
    return GroundEnergyOperator(
        lam=float(lam),
        R=float(R),
        nodes=nodes,
        weights=weights,
        matrix=matrix,
        w_values=w,
    )


def perron_eigenvalue(op: GroundEnergyOperator, tol: float = 1e-12, max_iter: int = 10000):
    """Dominant eigenpair of the nonnegative symmetric matrix by power
    iteration from the constant vector.

    Returns (mu0, psi) with psi entrywise positive and unit 2-norm. The
    spectral gap of a positive kernel makes deflation unnecessary.
    """
    m = op.matrix
    if np.any(m < -1e-14):
        raise InvalidParameterError("operator matrix must be entrywise nonnegative")
    n = m.shape[0]
    x = np.full(n, 1.0 / math.sqrt(n))
    mx = m @ x
    norm = float(np.linalg.norm(mx))
    if norm == 0.0:
        return 0.0, x
    rq_prev = float(x @ mx)
    for it in range(max_iter):
        x = mx / norm
        mx = m @ x
        norm = float(np.linalg.norm(mx))
        if norm == 0.0:
            return 0.0, x
        rq = float(x @ mx)
        if abs(rq - rq_prev) <= tol * max(1.0, abs(rq)):
            psi = np.abs(x)
            return rq, psi / float(np.linalg.norm(psi))
        rq_prev = rq
    raise IterationLimitError(
        f"power iteration did not converge in {max_iter} steps",
        diagnostics={"rayleigh": rq_prev, "last_change": abs(rq - rq_prev)},
    )


def mu0_at(
    kernel: JumpKernel,
    potential: Potential,
    lam: float,
    R: float,
    n_nodes: int = 128,
) -> float:
    op = build_bs_operator(kernel, potential, lam, R, n_nodes)
    mu, _ = perron_eigenvalue(op)
    return mu


@dataclass(frozen=True)
class GroundState:
    """Positive eigenfunction of the full operator on a reporting grid."""

    grid: Grid1D
    values_sup: np.ndarray   # normalized to max = 1
    values_l2: np.ndarray    # normalized to unit L2 norm
    amplitude: float         # sup-norm of the L2-normalized state


@dataclass(frozen=True)
class PrincipalEigenvalue:
    lambda0: float
    mu_curve: List[tuple]
    eigenfunction_nodes: np.ndarray
    nodes: np.ndarray
    ground_state: Optional[GroundState]
    fixed_point_residual: Optional[float]
    R: float
    n_nodes: int
    diagnostics: dict = field(default_factory=dict)

    exists = True


@dataclass(frozen=True)
class NoEigenvalue:
    mu_curve: List[tuple]
    reason: str
    R: float

    exists = False
    lambda0 = None


@dataclass(frozen=True)
class InconclusiveAtProbe:
    """Recurrent kernel whose mu0 stayed <= 1 down to the probe floor.

    Divergence of mu0 as lam -> 0 says an eigenvalue exists, but it is
    below the numerical probe floor; no root is reported.
    """

    mu_curve: List[tuple]
    probe_floor: float
    R: float

    exists = None
    lambda0 = None


def _refine_nodes(kernel, potential, lam_probe, R, start=128, cap=1024):
    """Double the Nystrom rule until mu0 stabilizes to 1e-5."""
    n = start
    mu_prev = mu0_at(kernel, potential, lam_probe, R, n)
    while n < cap:
        mu_next = mu0_at(kernel, potential, lam_probe, R, 2 * n)
        if abs(mu_next - mu_prev) < 1e-5:
            return 2 * n
        n *= 2
        mu_prev = mu_next
    return cap


def principal_eigenvalue(
    kernel: JumpKernel,
    potential: Potential,
    R: float = 1.0,
    tol: float = 1e-6,
    n_nodes: Optional[int] = None,
    ground_state_grid: Optional[Grid1D] = None,
):
    """Largest positive eigenvalue of the perturbed generator at dilation R.

    Probes mu0 along lam = 2^-j; if no probe exceeds 1, a transient kernel
    is settled by the lam = 0 operator norm (NoEigenvalue when <= 1), while
    a recurrent kernel is reported inconclusive-at-probe (its mu0 diverges
    as lam -> 0, so the probe floor, not the theory, gave out).

    Returns PrincipalEigenvalue (in physical units, scaled by chi), or
    NoEigenvalue / InconclusiveAtProbe.
    """
    chi = kernel.chi
    if n_nodes is None:
        n_nodes = _refine_nodes(kernel, potential, 0.25, R)
    curve = []

    lam_hi = None
    lam_lo = None
    prev = 1.0
    for j in range(0, PROBE_FLOOR_EXP + 1):
        lam = 2.0 ** (-j)
        mu = mu0_at(kernel, potential, lam, R, n_nodes)
        curve.append((chi * lam, mu))
        if mu > 1.0:
            lam_lo = lam
            lam_hi = prev
            break
        prev = lam

    if lam_lo is None:
        verdict = cached_transience(kernel)
        if verdict.verdict == "transient":
            mu0_zero = mu0_at(kernel, potential, 0.0, R, n_nodes)
            curve.append((0.0, mu0_zero))
            if mu0_zero <= 1.0:
                return NoEigenvalue(
                    mu_curve=curve,
                    reason=(
                        f"limit operator norm mu0(0) = {mu0_zero:.6f} <= 1; "
                        "no positive eigenvalue exists"
                    ),
                    R=R,
                )
            # root hides below the probe floor
            lam_lo, lam_hi = 0.0, 2.0 ** (-PROBE_FLOOR_EXP)
        else:
            return InconclusiveAtProbe(
                mu_curve=curve,
                probe_floor=2.0 ** (-PROBE_FLOOR_EXP),
                R=R,
            )

    # bisection on the strictly decreasing mu0(., R)
    lo, hi = lam_lo, lam_hi
    while hi - lo > tol * max(1.0, lo):
        mid = 0.5 * (lo + hi)
        mu = mu0_at(kernel, potential, mid, R, n_nodes)
        curve.append((chi * mid, mu))
        if mu > 1.0:
            lo = mid
        else:
            hi = mid
    lam0 = 0.5 * (lo + hi)

    op = build_bs_operator(kernel, potential, lam0, R, n_nodes)
    mu0, psi = perron_eigenvalue(op)
    gs = None
    residual = None
    if ground_state_grid is not None:
        gs, residual = _reconstruct_ground_state(
            kernel, potential, lam0, R, op, psi, ground_state_grid
        )
    curve.sort(key=lambda p: p[0])
    return PrincipalEigenvalue(
        lambda0=chi * lam0,
        mu_curve=curve,
        eigenfunction_nodes=psi,
        nodes=op.nodes,
        ground_state=gs,
        fixed_point_residual=residual,
        R=R,
        n_nodes=n_nodes,
        diagnostics={"mu_at_root": mu0, "bisection_width": hi - lo},
    )


def _reconstruct_ground_state(kernel, potential, lam, R, op, psi, grid):
    """Positive eigenfunction via the resolvent applied to the node data.

    With z = (1 + lam - v)/(1 + lam) * u on the nodes, u solves
    u = [atom + T](v u); the quadrature form below reproduces that fixed
    point exactly at the Nystrom level.
    """
    pot = _internal_potential(kernel, potential).with_scale(R)
    prof = resolvent_profile(kernel, lam, x_max=grid.half_width + pot.support + 1.0)
    # psi_i ~ sqrt(q_i w_i) z(y_i) with z = (1+lam-v)u/(1+lam)
    root = np.sqrt(op.weights * op.w_values)
    z_nodes = np.divide(psi, root, out=np.zeros_like(psi), where=root > 0)
    coeff = op.weights * op.w_values * z_nodes
    v_grid = pot(grid.x)
    t_block = prof(grid.x[:, None] - op.nodes[None, :])
    u = (1.0 + lam) / (1.0 + lam - v_grid) * (t_block @ coeff)
    u = np.maximum(u, 0.0)

    # fixed-point residual: u against atom/(1+lam) v u + T (v u)
    u_nodes = (1.0 + lam) / (1.0 + lam - pot(op.nodes)) * (
        prof(op.nodes[:, None] - op.nodes[None, :]) @ coeff
    )
    g_vu = v_grid * u / (1.0 + lam) + prof(
        grid.x[:, None] - op.nodes[None, :]
    ) @ (op.weights * pot(op.nodes) * u_nodes)
    sup = float(np.max(np.abs(u)))
    residual = float(np.max(np.abs(u - g_vu)) / sup) if sup > 0 else 0.0

    l2 = math.sqrt(grid.quad_mass(u ** 2))
    values_l2 = u / l2
    gs = GroundState(
        grid=grid,
        values_sup=u / sup,
        values_l2=values_l2,
        amplitude=float(np.max(values_l2)),
    )
    return gs, residual


@dataclass(frozen=True)
class ThresholdScan:
    R_values: np.ndarray
    exists: List[object]  # True / False / None (inconclusive)
    lambda0: List[Optional[float]]
    notes: List[str]


def threshold_scan(
    kernel: JumpKernel,
    potential: Potential,
    R_grid,
    tol: float = 1e-6,
    n_nodes: Optional[int] = None,
    jobs: int = 1,
) -> ThresholdScan:
    """Existence map and principal-eigenvalue curve along increasing R."""
    R_values = np.asarray(R_grid, dtype=float)
    if np.any(np.diff(R_values) <= 0):
        raise InvalidParameterError("R_grid must be strictly increasing")

    def solve(R):
        try:
            res = principal_eigenvalue(kernel, potential, R, tol, n_nodes)
        except Exception as exc:  # per-R failures are recorded, not raised
            return None, None, f"error: {exc}"
        if res.exists is True:
            return True, res.lambda0, ""
        if res.exists is False:
            return False, None, res.reason
        return None, None, f"inconclusive at probe floor {res.probe_floor:.2e}"

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(solve, R_values))
    else:
        rows = [solve(R) for R in R_values]
    return ThresholdScan(
        R_values=R_values,
        exists=[r[0] for r in rows],
        lambda0=[r[1] for r in rows],
        notes=[r[2] for r in rows],
    )


def subcritical_mu_report(
    kernel: JumpKernel,
    potential: Potential,
    R: float,
    lam_floor: float = 2.0 ** -PROBE_FLOOR_EXP,
    n_nodes: int = 256,
) -> dict:
    """All discrete eigenvalues mu_j > 1 of the ground-energy operator near
    the small-coupling edge.

    Experimental: only the largest eigenvalue has a certified monotone root;
    the others are reported without root-finding guarantees.
    """
    op = build_bs_operator(kernel, potential, lam_floor, R, n_nodes)
    mus = np.linalg.eigvalsh(op.matrix)[::-1]
    return {
        "lam_floor": lam_floor,
        "mu_above_one": [float(m) for m in mus if m > 1.0],
        "mu_top": float(mus[0]),
        "note": "roots of mu_j = 1 for j >= 1 are not certified monotone",
    }
