"""Energy-space computations on resistance networks.

Finite networks get exact linear-solve machinery (energy form, graph
Laplacian, energy kernel, dipoles) with the quotient by constants
realized by pinning the representative to vanish at the origin.  The
half-line recurrence machinery exhibits the genuine defect vector
``Laplacian psi = -psi`` that no finite matrix section can produce, and
the two-sided model carries nonconstant finite-energy harmonics.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np


class NetworkError(ValueError):
    pass


class FiniteNetwork:
    """Connected weighted graph with a distinguished origin.

    Conductances are symmetric, nonnegative, zero on the diagonal, and
    every vertex has positive net conductance.
    """

    __slots__ = ("vertices", "index", "cond", "origin")

    def __init__(self, vertices, edges, origin):
        vertices = tuple(vertices)
        if origin not in vertices:
            raise NetworkError(f"origin {origin!r} is not a vertex")
        index = {v: i for i, v in enumerate(vertices)}
        if len(index) != len(vertices):
            raise NetworkError("duplicate vertex ids")
        n = len(vertices)
        cond = np.zeros((n, n))
        for x, y, c in edges:
            if x == y:
                raise NetworkError(f"self-loop at {x!r} (c_xx must be 0)")
            if c <= 0:
                raise NetworkError(f"conductance on ({x!r}, {y!r}) must be > 0")
            cond[index[x], index[y]] = c
            cond[index[y], index[x]] = c
        if n > 1 and np.any(cond.sum(axis=1) == 0):
            raise NetworkError("isolated vertex (zero net conductance)")
        # connectivity by breadth-first search
        seen = {0}
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for j in np.flatnonzero(cond[i]):
                if j not in seen:
                    seen.add(int(j))
                    queue.append(int(j))
        if len(seen) != n:
            raise NetworkError("network is not connected")
        cond.setflags(write=False)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "cond", cond)
        object.__setattr__(self, "origin", origin)

    def __setattr__(self, name, value):
        raise AttributeError("FiniteNetwork is immutable")

    def __len__(self):
        return len(self.vertices)

    def net_conductance(self, x) -> float:
        """Total conductance c(x) at a vertex."""
        return float(self.cond[self.index[x]].sum())

    def laplacian_matrix(self) -> np.ndarray:
        return np.diag(self.cond.sum(axis=1)) - self.cond

    def delta(self, x) -> "EnergyVector":
        """Dirac mass at x as an energy-space representative."""
        vals = np.zeros(len(self))
        vals[self.index[x]] = 1.0
        return EnergyVector(self, vals)


@dataclass(frozen=True)
class EnergyVector:
    """Function on the vertices, pinned to vanish at the origin.

    Pinning picks the representative modulo constants; all energy inner
    products are invariant under re-pinning at a different vertex.
    """

    network: FiniteNetwork
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).copy()
        if vals.shape != (len(self.network),):
            raise NetworkError("value vector length mismatch")
        vals -= vals[self.network.index[self.network.origin]]
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __call__(self, x) -> float:
        return float(self.values[self.network.index[x]])

    def __add__(self, other):
        self._same(other)
        return EnergyVector(self.network, self.values + other.values)

    def __sub__(self, other):
        self._same(other)
        return EnergyVector(self.network, self.values - other.values)

    def __rmul__(self, scalar):
        return EnergyVector(self.network, scalar * self.values)

    def _same(self, other):
        if self.network is not other.network:
            raise NetworkError("energy vectors live on different networks")


def energy(u: EnergyVector, v: EnergyVector) -> float:
    """Dirichlet form (1/2) sum c_xy (u(x)-u(y)) (v(x)-v(y))."""
    u._same(v)
    du = u.values[:, None] - u.values[None, :]
    dv = v.values[:, None] - v.values[None, :]
    return float(0.5 * np.sum(u.network.cond * du * dv))


def laplacian(u: EnergyVector) -> np.ndarray:
    """Pointwise (Delta u)(x) = sum_y c_xy (u(x) - u(y)), in vertex order."""
    return u.network.laplacian_matrix() @ u.values


def energy_kernel(net: FiniteNetwork, x) -> EnergyVector:
    """Reproducing element v_x: solves Delta v = delta_x - delta_o, v(o) = 0.

    Satisfies ``<v_x, u>_E = u(x) - u(o)`` for every u; v_o is the zero
    representative.
    """
    o = net.index[net.origin]
    if net.index[x] == o:
        return EnergyVector(net, np.zeros(len(net)))
    L = net.laplacian_matrix()
    rhs = np.zeros(len(net))
    rhs[net.index[x]] = 1.0
    rhs[o] = -1.0
    keep = [i for i in range(len(net)) if i != o]
    try:
        sol = np.linalg.solve(L[np.ix_(keep, keep)], rhs[keep])
    except np.linalg.LinAlgError as exc:
        raise NetworkError(
            "singular pinned Laplacian on a connected network "
            "(internal inconsistency)"
        ) from exc
    vals = np.zeros(len(net))
    vals[keep] = sol
    return EnergyVector(net, vals)


def dipole(net: FiniteNetwork, x, y) -> EnergyVector:
    """Element with pointwise Laplacian delta_x - delta_y."""
    return energy_kernel(net, x) - energy_kernel(net, y)


def pair_K_Delta_check(net: FiniteNetwork, tol: float = 1e-10) -> float:
    """Pairing residual of the Laplacian against the inclusion operator.

    The Laplacian maps the kernel span into square-summable functions;
    the inclusion sends Dirac masses into the energy space.  Returns
    ``max |<Delta u, phi>_2 - <u, K phi>_E|`` over the basis pairs
    u = v_x (x != o), phi = delta_y.
    """
    worst = 0.0
    kernels = [
        energy_kernel(net, x) for x in net.vertices if x != net.origin
    ]
    for u in kernels:
        lap_u = laplacian(u)
        for y in net.vertices:
            lhs = float(lap_u[net.index[y]])
            rhs = energy(u, net.delta(y))
            worst = max(worst, abs(lhs - rhs))
    return worst


# ---------------------------------------------------------------------------
# Conductance sequences and recurrence machinery

HALFLINE = "halfline"
TWOSIDED = "twosided"


@dataclass(frozen=True)
class ConductanceSequence:
    """Closed-form edge conductances on a half-line or two-sided path."""

    kind: str
    rule: str
    param: float

    def __post_init__(self):
        if self.kind not in (HALFLINE, TWOSIDED):
            raise NetworkError(f"unknown kind {self.kind!r}")
        if self.rule not in ("geometric", "constant"):
            raise NetworkError(f"unknown rule {self.rule!r}")

    def c(self, n: int) -> float:
        """Conductance of the edge (n, n+1)."""
        if self.kind == HALFLINE and n < 0:
            raise NetworkError("half-line sequences start at n = 0")
        if self.rule == "constant":
            return self.param
        if self.kind == HALFLINE:
            return self.param**n
        return self.param ** max(n, -n - 1)


def geometric_halfline(r: float) -> ConductanceSequence:
    return ConductanceSequence(HALFLINE, "geometric", r)


def constant_halfline(c: float = 1.0) -> ConductanceSequence:
    return ConductanceSequence(HALFLINE, "constant", c)


def twosided_geometric(r: float = 2.0) -> ConductanceSequence:
    return ConductanceSequence(TWOSIDED, "geometric", r)


CONVERGES = "CONVERGES"
DIVERGES = "DIVERGES"
INCONCLUSIVE = "INCONCLUSIVE"

#: verdict thresholds, reported with every result so inconclusive runs
#: are diagnosable
TAIL_RATIO = 0.9
BLOWUP_FACTOR = 1e6
STAGNATION = 1e-12


@dataclass(frozen=True)
class DefectResult:
    psi: np.ndarray
    residuals: np.ndarray
    rel_residual: float
    energy_partials: np.ndarray
    verdict: str
    overflow: bool
    l2_psi: float
    l2_lap_psi: float
    thresholds: dict


def defect_recurrence(seq: ConductanceSequence, nmax: int,
                      psi0: float = 1.0) -> DefectResult:
    """Solve ``Delta psi = -psi`` on the half-line by forward recurrence.

    Boundary node: psi(1) = psi(0) (1 + 1/c_0).  Interior node n:
    psi(n+1) = psi(n) + (c_{n-1}/c_n)(psi(n) - psi(n-1)) + psi(n)/c_n.

    A finite-energy nonzero solution is a defect vector, witnessing that
    the energy Laplacian paired with the inclusion is not maximal.  The
    convergence verdict applies the module thresholds to the partial
    energy sums; overflow is reported as divergence with a flag.
    """
    if seq.kind != HALFLINE:
        raise NetworkError("defect_recurrence needs a half-line sequence")
    if nmax < 3:
        raise NetworkError("need nmax >= 3")
    psi = np.zeros(nmax + 1)
    psi[0] = psi0
    overflow = False
    with np.errstate(over="raise", invalid="raise"):
        try:
            psi[1] = psi[0] * (1.0 + 1.0 / seq.c(0))
            for n in range(1, nmax):
                cn, cp = seq.c(n), seq.c(n - 1)
                psi[n + 1] = (
                    psi[n] + (cp / cn) * (psi[n] - psi[n - 1]) + psi[n] / cn
                )
        except FloatingPointError:
            overflow = True
    # pointwise residuals of Delta psi + psi at computed interior nodes,
    # plus a backward-error scale: once psi flattens at machine precision
    # the raw residual picks up c(n) times rounding noise, so each node
    # is judged relative to the magnitudes of the terms actually summed
    residuals = np.zeros(nmax + 1)
    scales = np.ones(nmax + 1)
    residuals[0] = seq.c(0) * (psi[0] - psi[1]) + psi[0]
    scales[0] = 1.0 + seq.c(0) * (abs(psi[0]) + abs(psi[1])) + abs(psi[0])
    for n in range(1, nmax):
        cp, cn = seq.c(n - 1), seq.c(n)
        residuals[n] = (
            cp * (psi[n] - psi[n - 1]) + cn * (psi[n] - psi[n + 1]) + psi[n]
        )
        scales[n] = (
            1.0
            + cp * (abs(psi[n]) + abs(psi[n - 1]))
            + cn * (abs(psi[n]) + abs(psi[n + 1]))
            + abs(psi[n])
        )
    if overflow or not np.all(np.isfinite(residuals[:nmax])):
        rel_residual = float("nan")
    else:
        rel_residual = float(
            np.max(np.abs(residuals[:nmax]) / scales[:nmax])
        )
    increments = np.array(
        [seq.c(n) * (psi[n + 1] - psi[n]) ** 2 for n in range(nmax)]
    )
    partials = np.cumsum(increments)
    thresholds = {
        "tail_ratio": TAIL_RATIO,
        "blowup_factor": BLOWUP_FACTOR,
        "stagnation": STAGNATION,
    }
    if overflow or not np.all(np.isfinite(partials)):
        verdict = DIVERGES
        overflow = True
    elif psi0 == 0.0 or partials[-1] == 0.0:
        verdict = CONVERGES
    elif partials[-1] > BLOWUP_FACTOR * partials[2]:
        verdict = DIVERGES
    else:
        quarter = max(nmax // 4, 1)
        tail = increments[-quarter:]
        ratios = [
            tail[i] / tail[i - 1] for i in range(1, len(tail)) if tail[i - 1] > 0
        ]
        ratio_ok = all(r < TAIL_RATIO for r in ratios) if ratios else True
        stagnated = increments[-1] < STAGNATION * partials[-1]
        verdict = CONVERGES if (ratio_ok and stagnated) else INCONCLUSIVE
    # residual(n) = Delta psi(n) + psi(n), so Delta psi = residual - psi
    lap_vals = residuals[:nmax] - psi[:nmax]
    l2_psi = float(np.sqrt(np.sum(psi[:nmax] ** 2)))
    l2_lap = float(np.sqrt(np.sum(lap_vals**2)))
    return DefectResult(
        psi, residuals, rel_residual, partials, verdict, overflow,
        l2_psi, l2_lap, thresholds,
    )


def twosided_window_network(seq: ConductanceSequence, W: int) -> FiniteNetwork:
    """Finite window n in [-W, W] of a two-sided path, origin at 0."""
    if seq.kind != TWOSIDED:
        raise NetworkError("need a two-sided sequence")
    vertices = list(range(-W, W + 1))
    edges = [(n, n + 1, seq.c(n)) for n in range(-W, W)]
    return FiniteNetwork(vertices, edges, 0)


def harmonic_flux(seq: ConductanceSequence, flux: float, W: int):
    """Constant-flux harmonic function on a two-sided window.

    h(0) = 0 and h(n+1) - h(n) = flux / c_n, so the Laplacian vanishes
    at every interior node and the energy is flux^2 * sum 1/c_n over the
    window.  Requires the reciprocal-conductance tail to be summable
    (tail ratio < 1); otherwise only constants are harmonic.
    """
    if seq.kind != TWOSIDED:
        raise NetworkError("harmonic_flux needs a two-sided sequence")
    if W < 2:
        raise NetworkError("need window W >= 2")
    r_pos = (1.0 / seq.c(W - 1)) / (1.0 / seq.c(W - 2))
    r_neg = (1.0 / seq.c(-W + 1)) / (1.0 / seq.c(-W + 2))
    if flux != 0.0 and (r_pos >= 1.0 or r_neg >= 1.0):
        raise NetworkError(
            "sum of reciprocal conductances does not converge: "
            "only constants are harmonic"
        )
    net = twosided_window_network(seq, W)
    vals = np.zeros(len(net))
    for n in range(0, W):
        vals[net.index[n + 1]] = vals[net.index[n]] + flux / seq.c(n)
    for n in range(0, -W, -1):
        vals[net.index[n - 1]] = vals[net.index[n]] - flux / seq.c(n - 1)
    h = EnergyVector(net, vals)
    return h, energy(h, h)


def royden_project(u: EnergyVector, h: EnergyVector | None,
                   tol: float = 1e-12):
    """Split u into its finitely-supported and harmonic parts.

    ``h`` spans the harmonic component (pass None on genuinely finite
    networks, where only constants are harmonic and everything is in the
    finitely-supported closure).  Returns (fin, harm, coefficient).
    """
    if h is None:
        return u, 0.0 * u, 0.0
    u._same(h)
    eh = energy(h, h)
    if eh < tol:
        raise NetworkError("harmonic direction has vanishing energy")
    coeff = energy(h, u) / eh
    harm = coeff * h
    return u - harm, harm, coeff


def lemma_dual_pairing(net: FiniteNetwork, x, h: EnergyVector) -> float:
    """|<Delta_E v_x, h>_E| computed two ways; returns the Laplacian route.

    By the Dirac-pairing identity this equals |Delta h(x) - Delta h(o)|,
    which vanishes identically for harmonic h.
    """
    lap_h = laplacian(h)
    direct = abs(
        lap_h[net.index[x]] - lap_h[net.index[net.origin]]
    )
    # cross-check through the energy form with the dipole image
    img = net.delta(x) - net.delta(net.origin)
    via_energy = abs(energy(img, h))
    if abs(direct - via_energy) > 1e-9 * (1.0 + abs(direct)):
        raise NetworkError("internal inconsistency in dual pairing")
    return float(direct)


#: batch-config name for the dual-pairing check
lemma520_check = lemma_dual_pairing


def parse_graph(text: str) -> FiniteNetwork:
    """Parse the edge-list format: lines ``x y c``, plus ``origin x``.

    Blank lines and ``#`` comments are ignored; the origin defaults to
    the first vertex mentioned.
    """
    edges = []
    origin = None
    order = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "origin":
            if len(parts) != 2:
                raise NetworkError(f"line {lineno}: malformed origin line")
            origin = parts[1]
            continue
        if len(parts) != 3:
            raise NetworkError(f"line {lineno}: expected 'x y c'")
        x, y, c = parts[0], parts[1], float(parts[2])
        edges.append((x, y, c))
        for v in (x, y):
            if v not in order:
                order.append(v)
    if not edges:
        raise NetworkError("no edges in graph input")
    if origin is None:
        origin = order[0]
    return FiniteNetwork(order, edges, origin)
