"""Energy functionals over framelet-decomposed graph signals.

All energies are quadratic (or, for the source term, linear) forms in the
signal, evaluated in n x c matrix form; the equivalent Kronecker/vectorized
forms are reserved for test oracles.  Every functional here has an analytic
gradient in the same module, and the pairing is contract-tested against
central finite differences.

Sign conventions worth stating once:

* the per-band generalized energy is
  0.5 tr((W_b H)^T (W_b H) Omega_b) - 0.5 tr((W_b H)^T Ahat (W_b H) W_b);
* when a source is configured (beta != 0 and mixing matrices present), the
  total energy *subtracts* beta * tr((W_b H)^T H0 Wt_b) per band, so that
  descending its gradient injects the initial state, and the gradient of
  that term is -beta * W_b^T H0 Wt_b (no transpose on the mixing matrix;
  anything else fails the finite-difference check for asymmetric Wt).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import (
    BandMismatchError,
    ConfigError,
    DimensionMismatchError,
    NotSymmetricError,
    OutOfRangeError,
)
from .framelets import Band, FrameletSystem, band_index_set
from .graphs import Graph
from . import spectral

__all__ = [
    "WeightConfig",
    "EnergyBreakdown",
    "dirichlet_energy",
    "framelet_dirichlet_energies",
    "generalized_energy",
    "generalized_energy_gradient",
    "total_framelet_energy",
    "total_framelet_energy_gradient",
    "perturbed_energy",
    "perturbed_energy_gradient",
    "energy_gap",
    "weight_split",
    "particle_decomposition",
    "spectral_energy",
    "spectral_energy_gradient",
    "source_energy_term",
    "source_energy_gradient",
]

WEIGHT_SYMMETRY_TOL = 1e-12


def _require_symmetric(name: str, m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {m.shape}")
    asym = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if asym > WEIGHT_SYMMETRY_TOL:
        raise NotSymmetricError(f"{name} asymmetry {asym:.3e} exceeds {WEIGHT_SYMMETRY_TOL}")
    return m


def _as_columns(signal, n: int):
    """Coerce a signal to (n, c); remember whether it arrived 1-D."""
    x = np.asarray(signal, dtype=float)
    if x.ndim == 1:
        if x.shape[0] != n:
            raise DimensionMismatchError(f"signal has {x.shape[0]} rows, expected {n}")
        return x[:, None], True
    if x.ndim != 2 or x.shape[0] != n:
        raise DimensionMismatchError(f"signal shape {x.shape} incompatible with n={n}")
    return x, False


def _restore(grad: np.ndarray, was_vector: bool):
    return grad[:, 0] if was_vector else grad


@dataclass(frozen=True)
class WeightConfig:
    """Per-band weights plus the scalar knobs of the flow family.

    omega / w map each band to a symmetric c x c matrix (symmetry is
    validated, never silently repaired).  w_tilde holds the source mixing
    matrices; it is not required to be symmetric.  theta maps bands to
    length-n spectral filter coefficients.
    """

    omega: Dict[Band, np.ndarray]
    w: Dict[Band, np.ndarray]
    w_tilde: Optional[Dict[Band, np.ndarray]] = None
    epsilon: float = 0.0
    beta: float = 0.0
    theta: Optional[Dict[Band, np.ndarray]] = None
    tau: float = 1.0

    def __post_init__(self):
        if self.tau < 0.0:
            raise OutOfRangeError(f"step size tau must be nonnegative, got {self.tau}")
        if set(self.omega) != set(self.w):
            raise BandMismatchError("omega and w must cover the same bands")
        omega = {b: _require_symmetric(f"omega{b}", m).copy() for b, m in self.omega.items()}
        w = {b: _require_symmetric(f"w{b}", m).copy() for b, m in self.w.items()}
        for m in list(omega.values()) + list(w.values()):
            m.setflags(write=False)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "w", w)
        if self.w_tilde is not None:
            wt = {b: np.array(m, dtype=float) for b, m in self.w_tilde.items()}
            if set(wt) != set(omega):
                raise BandMismatchError("w_tilde must cover the same bands as omega/w")
            for m in wt.values():
                m.setflags(write=False)
            object.__setattr__(self, "w_tilde", wt)
        if self.theta is not None:
            th = {b: np.array(v, dtype=float).ravel() for b, v in self.theta.items()}
            for v in th.values():
                v.setflags(write=False)
            object.__setattr__(self, "theta", th)

    @staticmethod
    def shared(scales: int, omega: np.ndarray, w: np.ndarray, **kwargs) -> "WeightConfig":
        """Replicate one (omega, w) pair over every band of a J-scale system."""
        bands = band_index_set(scales)
        return WeightConfig(
            omega={b: np.array(omega, dtype=float) for b in bands},
            w={b: np.array(w, dtype=float) for b in bands},
            **kwargs,
        )

    @staticmethod
    def scalar(scales: int, lambda_w: float, channels: int, **kwargs) -> "WeightConfig":
        """Scalar family: W low-pass = I_c, W high-pass = lambda_w * I_c, Omega = I_c."""
        bands = band_index_set(scales)
        eye = np.eye(channels)
        w = {b: (eye if b[0] == 0 else lambda_w * eye) for b in bands}
        return WeightConfig(omega={b: eye for b in bands}, w=w, **kwargs)

    @property
    def has_source(self) -> bool:
        return self.beta != 0.0 and self.w_tilde is not None

    def bands_for(self, sys: FrameletSystem) -> tuple:
        if set(self.omega) != set(sys.bands):
            raise BandMismatchError(
                f"config bands {sorted(self.omega)} != system bands {sorted(sys.bands)}"
            )
        return sys.bands

    def theta_for(self, sys: FrameletSystem) -> Dict[Band, np.ndarray]:
        if self.theta is None or set(self.theta) != set(sys.bands):
            raise BandMismatchError("theta must cover exactly the system's bands")
        for b, v in self.theta.items():
            if v.shape[0] != sys.n:
                raise DimensionMismatchError(
                    f"theta{b} has length {v.shape[0]}, expected {sys.n}"
                )
        return self.theta

    def shared_w(self, sys: FrameletSystem) -> np.ndarray:
        """The single weight matrix required by the spectral-filter family."""
        bands = self.bands_for(sys)
        w0 = self.w[bands[0]]
        for b in bands[1:]:
            if not np.array_equal(self.w[b], w0):
                raise ConfigError("spectral filtering uses one shared w across all bands")
        return w0


@dataclass(frozen=True)
class EnergyBreakdown:
    """Multi-particle reading of one band's energy.

    total = external + attraction - repulsion by construction.
    """

    external: float
    attraction: float
    repulsion: float
    total: float = field(default=0.0)

    @staticmethod
    def of(external: float, attraction: float, repulsion: float) -> "EnergyBreakdown":
        return EnergyBreakdown(external, attraction, repulsion, external + attraction - repulsion)


def _check_operator(name: str, op: np.ndarray, n: int) -> np.ndarray:
    op = np.asarray(op, dtype=float)
    if op.shape != (n, n):
        raise DimensionMismatchError(f"{name} shape {op.shape} incompatible with n={n}")
    return op


def dirichlet_energy(lap: np.ndarray, signal) -> float:
    """Smoothness measure 0.5 tr(H^T Lhat H); zero exactly on ker(Lhat)."""
    x, _ = _as_columns(signal, np.asarray(lap).shape[0])
    lap = _check_operator("laplacian", lap, x.shape[0])
    return 0.5 * float(np.sum(x * (lap @ x)))


def framelet_dirichlet_energies(
    sys: FrameletSystem, lap: np.ndarray, signal
) -> Tuple[Dict[Band, float], float]:
    """Per-band Dirichlet energies of the framelet coefficients and their sum.

    On a tight system the sum reproduces dirichlet_energy(lap, signal); the
    identity has no meaning for non-tight variants, which are rejected.
    """
    sys.require_tight("band-wise Dirichlet energy conservation")
    x, _ = _as_columns(signal, sys.n)
    lap = _check_operator("laplacian", lap, sys.n)
    per_band = {
        b: 0.5 * float(np.sum((sys.transforms[b] @ x) * (lap @ sys.transforms[b] @ x)))
        for b in sys.bands
    }
    return per_band, float(sum(per_band.values()))


def generalized_energy(ahat: np.ndarray, signal, omega: np.ndarray, w: np.ndarray) -> float:
    """0.5 tr(H^T H Omega) - 0.5 tr(H^T Ahat H W); Omega = W = I recovers Dirichlet."""
    x, _ = _as_columns(signal, np.asarray(ahat).shape[0])
    ahat = _check_operator("ahat", ahat, x.shape[0])
    omega = _require_symmetric("omega", omega)
    w = _require_symmetric("w", w)
    if omega.shape[0] != x.shape[1] or w.shape[0] != x.shape[1]:
        raise DimensionMismatchError(
            f"weights are {omega.shape[0]}x..., signal has {x.shape[1]} channels"
        )
    return 0.5 * float(np.sum(x * (x @ omega)) - np.sum(x * (ahat @ x @ w)))


def generalized_energy_gradient(ahat: np.ndarray, signal, omega: np.ndarray, w: np.ndarray):
    """Gradient H Omega - Ahat H W of :func:`generalized_energy`."""
    x, was_vector = _as_columns(signal, np.asarray(ahat).shape[0])
    ahat = _check_operator("ahat", ahat, x.shape[0])
    omega = _require_symmetric("omega", omega)
    w = _require_symmetric("w", w)
    return _restore(x @ omega - ahat @ x @ w, was_vector)


def _band_terms(sys: FrameletSystem, ahat: np.ndarray, x: np.ndarray, cfg: WeightConfig):
    for band in cfg.bands_for(sys):
        coeff = sys.transforms[band] @ x
        omega = cfg.omega[band]
        w = cfg.w[band]
        if omega.shape[0] != x.shape[1] or w.shape[0] != x.shape[1]:
            raise DimensionMismatchError(
                f"weights at {band} are {omega.shape[0]}x{omega.shape[0]} / "
                f"{w.shape[0]}x{w.shape[0]}, signal has {x.shape[1]} channels"
            )
        yield band, coeff, omega, w


def total_framelet_energy(
    sys: FrameletSystem,
    ahat: np.ndarray,
    signal,
    cfg: WeightConfig,
    initial=None,
) -> float:
    """Sum of per-band generalized energies (minus the source term if configured).

    With cfg = shared(Omega, W) on a tight system this collapses to
    generalized_energy(ahat, signal, Omega, W).
    """
    x, _ = _as_columns(signal, sys.n)
    ahat = _check_operator("ahat", ahat, sys.n)
    total = 0.0
    for _, coeff, omega, w in _band_terms(sys, ahat, x, cfg):
        total += 0.5 * float(np.sum(coeff * (coeff @ omega)) - np.sum(coeff * (ahat @ coeff @ w)))
    if cfg.has_source:
        if initial is None:
            raise ConfigError("a source term is configured but no initial state was given")
        total -= source_energy_term(sys, x, initial, cfg)
    return total


def total_framelet_energy_gradient(
    sys: FrameletSystem,
    ahat: np.ndarray,
    signal,
    cfg: WeightConfig,
    initial=None,
):
    """Analytic gradient sum_b (W_b^T W_b H Omega_b - W_b^T Ahat W_b H W_b)
    minus beta * sum_b W_b^T H0 Wt_b when a source is configured."""
    x, was_vector = _as_columns(signal, sys.n)
    ahat = _check_operator("ahat", ahat, sys.n)
    grad = np.zeros_like(x)
    for band, coeff, omega, w in _band_terms(sys, ahat, x, cfg):
        t = sys.transforms[band]
        grad += t.T @ (coeff @ omega) - t.T @ (ahat @ coeff @ w)
    if cfg.has_source:
        if initial is None:
            raise ConfigError("a source term is configured but no initial state was given")
        grad -= _restore_to_matrix(source_energy_gradient(sys, initial, cfg), x.shape)
    return _restore(grad, was_vector)


def _restore_to_matrix(g: np.ndarray, shape) -> np.ndarray:
    return g.reshape(shape) if g.shape != tuple(shape) else g


def source_energy_term(sys: FrameletSystem, signal, initial, cfg: WeightConfig) -> float:
    """beta * sum_b tr((W_b H)^T H0 Wt_b): linear coupling to the initial state.

    The flow's governing energy uses this with a minus sign (the source
    attracts the state toward H0-mixed directions).
    """
    if cfg.w_tilde is None:
        raise ConfigError("source term requested without w_tilde mixing matrices")
    x, _ = _as_columns(signal, sys.n)
    h0, _ = _as_columns(initial, sys.n)
    if h0.shape != x.shape:
        raise DimensionMismatchError(f"initial state shape {h0.shape} != signal shape {x.shape}")
    total = 0.0
    for band in cfg.bands_for(sys):
        coeff = sys.transforms[band] @ x
        total += float(np.sum(coeff * (h0 @ cfg.w_tilde[band])))
    return cfg.beta * total


def source_energy_gradient(sys: FrameletSystem, initial, cfg: WeightConfig) -> np.ndarray:
    """Gradient beta * sum_b W_b^T H0 Wt_b of :func:`source_energy_term`."""
    if cfg.w_tilde is None:
        raise ConfigError("source term requested without w_tilde mixing matrices")
    h0, was_vector = _as_columns(initial, sys.n)
    grad = np.zeros_like(h0)
    for band in cfg.bands_for(sys):
        grad += sys.transforms[band].T @ (h0 @ cfg.w_tilde[band])
    return _restore(cfg.beta * grad, was_vector)


def perturbed_energy(sys: FrameletSystem, lap: np.ndarray, signal, epsilon: float) -> float:
    """Band-shifted Dirichlet energy: (Lhat + eps I) on the low-pass band,
    (Lhat - eps I) on every high-pass band.

    On a tight Haar system this equals the plain Dirichlet energy plus
    (eps/2) * sum_i gap(lam_i) * (spectral mass of the signal at lam_i); the
    gap is nonnegative on [0, 2], so eps > 0 enhances the energy.
    """
    sys.require_tight("the perturbed energy")
    x, _ = _as_columns(signal, sys.n)
    lap = _check_operator("laplacian", lap, sys.n)
    n = sys.n
    total = 0.0
    for band in sys.bands:
        coeff = sys.transforms[band] @ x
        shift = epsilon if band == sys.low_pass else -epsilon
        op = lap + shift * np.eye(n)
        total += 0.5 * float(np.sum(coeff * (op @ coeff)))
    return total


def perturbed_energy_gradient(sys: FrameletSystem, lap: np.ndarray, signal, epsilon: float):
    """Gradient W0^T (Lhat + eps I) W0 H + sum_high W^T (Lhat - eps I) W H."""
    sys.require_tight("the perturbed energy")
    x, was_vector = _as_columns(signal, sys.n)
    lap = _check_operator("laplacian", lap, sys.n)
    grad = np.zeros_like(x)
    for band in sys.bands:
        t = sys.transforms[band]
        shift = epsilon if band == sys.low_pass else -epsilon
        grad += t.T @ ((lap + shift * np.eye(sys.n)) @ (t @ x))
    return _restore(grad, was_vector)


def energy_gap(lam):
    """Per-frequency perturbation rate of the two-scale Haar bank:

        gap(lam) = cos^2(lam/8) cos^2(lam/16)
                   - sin^2(lam/8) cos^2(lam/16) - sin^2(lam/16)

    i.e. low-pass response squared minus the high-pass squares.  Decreasing
    on [0, 2] from gap(0) = 1 down to gap(2) ~ 0.8484, hence nonnegative.
    """
    arr = np.asarray(lam, dtype=float)
    if np.any(arr < -1e-9) or np.any(arr > 2.0 + 1e-9):
        raise OutOfRangeError("energy gap is defined for frequencies in [0, 2]")
    c8, s8 = np.cos(arr / 8.0), np.sin(arr / 8.0)
    c16, s16 = np.cos(arr / 16.0), np.sin(arr / 16.0)
    out = c8**2 * c16**2 - s8**2 * c16**2 - s16**2
    return float(out) if np.isscalar(lam) or np.ndim(lam) == 0 else out


def weight_split(w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Split a symmetric matrix as W = P^T P - M^T M.

    P (resp. M) is diag(sqrt(max(lam, 0))) V^T (resp. negative part) from the
    eigendecomposition of W; P^T P is the positive-semidefinite component and
    M^T M the negative one.
    """
    w = _require_symmetric("w", w)
    spec = spectral.eigh(w)
    lam = spec.eigenvalues
    plus = np.sqrt(np.maximum(lam, 0.0))[:, None] * spec.u
    minus = np.sqrt(np.maximum(-lam, 0.0))[:, None] * spec.u
    return plus, minus


def particle_decomposition(
    sys: FrameletSystem, graph: Graph, signal, cfg: WeightConfig
) -> Dict[Band, EnergyBreakdown]:
    """External/attraction/repulsion reading of each band's energy.

    Per band, with G = W_b H and degree-normalized rows g_i / sqrt(d_i):

    * external  = 0.5 sum_i <g_i, (Omega_b - W_b) g_i>
    * attraction ("smoothing")  = 0.25 sum over ordered adjacent pairs of
      ||P (g_i/sqrt(d_i) - g_j/sqrt(d_j))||^2 with W_b = P^T P - M^T M
    * repulsion ("separating")  = the same sum under M.

    Band totals sum to total_framelet_energy (without source term).
    """
    x, _ = _as_columns(signal, sys.n)
    if graph.n != sys.n:
        raise DimensionMismatchError(f"graph has {graph.n} nodes, system expects {sys.n}")
    adj = graph.adjacency()
    deg = graph.degrees().astype(float)
    rows, cols = np.nonzero(adj)
    out = {}
    for band in cfg.bands_for(sys):
        coeff = sys.transforms[band] @ x
        omega = cfg.omega[band]
        w = cfg.w[band]
        external = 0.5 * float(np.sum(coeff * (coeff @ (omega - w))))
        plus, minus = weight_split(w)
        scaled = coeff / np.sqrt(deg)[:, None]
        diffs = scaled[rows] - scaled[cols]
        attraction = 0.25 * float(np.sum((diffs @ plus.T) ** 2))
        repulsion = 0.25 * float(np.sum((diffs @ minus.T) ** 2))
        out[band] = EnergyBreakdown.of(external, attraction, repulsion)
    return out


def spectral_energy(sys: FrameletSystem, signal, cfg: WeightConfig) -> float:
    """Energy governing the spectral-filter family:

        0.5 sum_b [ tr((W_b H)^T W_b H) - tr((W_b H)^T diag(theta_b) W_b H W) ]

    with one shared symmetric W across bands.
    """
    x, _ = _as_columns(signal, sys.n)
    w = _require_symmetric("w", cfg.shared_w(sys))
    theta = cfg.theta_for(sys)
    total = 0.0
    for band in sys.bands:
        coeff = sys.transforms[band] @ x
        filtered = theta[band][:, None] * coeff
        total += 0.5 * float(np.sum(coeff * coeff) - np.sum(coeff * (filtered @ w)))
    return total


def spectral_energy_gradient(sys: FrameletSystem, signal, cfg: WeightConfig):
    """Gradient sum_b (W_b^T W_b H - W_b^T diag(theta_b) W_b H W)."""
    x, was_vector = _as_columns(signal, sys.n)
    w = _require_symmetric("w", cfg.shared_w(sys))
    theta = cfg.theta_for(sys)
    grad = np.zeros_like(x)
    for band in sys.bands:
        t = sys.transforms[band]
        coeff = t @ x
        grad += t.T @ coeff - t.T @ ((theta[band][:, None] * coeff) @ w)
    return _restore(grad, was_vector)
