"""Haar-type undecimated framelet transforms on a graph spectrum.

A system at scale count J holds one low-pass band (0, J) and high-pass bands
(1, j) for j = 1..J.  Filter responses at frequency lam (in [0, 2]):

* J = 1:  low cos(lam/8), high sin(lam/8)
* J = 2 tight:  low cos(lam/8)cos(lam/16), highs sin(lam/8)cos(lam/16)
  and sin(lam/16)

The squares of the tight responses sum to 1 at every frequency, which is
what makes decomposition/reconstruction lossless.  A second J = 2 variant,
``paper_literal``, replaces the low-pass by cos^2(lam/8)cos(lam/16); its
response squares do NOT sum to 1, so tightness-dependent identities are
unavailable and the residual is reported as a diagnostic instead.  At J = 1
the two variants coincide.

Transform matrices are materialized densely (W = U^T diag(resp) U): they are
reused across thousands of flow steps and desk-scale n keeps them cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .errors import (
    BandMismatchError,
    DimensionMismatchError,
    OutOfRangeError,
    VariantNotTightError,
)
from .spectral import Spectrum

__all__ = [
    "Band",
    "VARIANTS",
    "band_index_set",
    "haar_response",
    "FrameletSystem",
    "FrameletCoeffs",
    "build_framelet_system",
    "decompose",
    "reconstruct",
]

Band = Tuple[int, int]

VARIANTS = ("tight", "paper_literal")
LAMBDA_SLACK = 1e-9
TIGHTNESS_TOL = 1e-10


def band_index_set(scales: int) -> tuple:
    """Band keys for a J-scale system: low-pass (0, J) then (1, 1)..(1, J)."""
    if scales not in (1, 2):
        raise OutOfRangeError(f"scales must be 1 or 2, got {scales}")
    return ((0, scales),) + tuple((1, j) for j in range(1, scales + 1))


def _check_lambda(lam):
    arr = np.asarray(lam, dtype=float)
    if np.any(arr < -LAMBDA_SLACK) or np.any(arr > 2.0 + LAMBDA_SLACK):
        worst = np.ravel(arr)[int(np.argmax(np.abs(np.ravel(arr) - 1.0)))]
        raise OutOfRangeError(f"frequency outside [0, 2]: {worst}")
    return arr


def haar_response(lam, scales: int, variant: str = "tight") -> Dict[Band, np.ndarray]:
    """Filter values of every band at frequency ``lam`` (scalar or array).

    Returns a dict keyed by band.  For the tight variant the squared values
    sum to 1 identically in lam.
    """
    if variant not in VARIANTS:
        raise OutOfRangeError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    arr = _check_lambda(lam)
    if scales == 1:
        return {(0, 1): np.cos(arr / 8.0), (1, 1): np.sin(arr / 8.0)}
    if scales == 2:
        low = np.cos(arr / 8.0) * np.cos(arr / 16.0)
        if variant == "paper_literal":
            low = np.cos(arr / 8.0) ** 2 * np.cos(arr / 16.0)
        return {
            (0, 2): low,
            (1, 1): np.sin(arr / 8.0) * np.cos(arr / 16.0),
            (1, 2): np.sin(arr / 16.0),
        }
    raise OutOfRangeError(f"scales must be 1 or 2, got {scales}")


@dataclass(frozen=True)
class FrameletSystem:
    """Materialized framelet transform for one spectrum.

    Attributes
    ----------
    scales, variant : the filter bank parameters.
    bands : ordered band keys, low-pass first.
    responses : band -> (n,) filter values at each eigenvalue.
    transforms : band -> (n, n) symmetric matrix U^T diag(resp) U.
    spectrum : the underlying eigendecomposition.
    tightness_residual : max_i |sum_b resp_b(lam_i)^2 - 1| (diagnostic; ~0
        for the tight variant, genuinely nonzero for paper_literal at J=2).
    """

    scales: int
    variant: str
    bands: tuple
    responses: Dict[Band, np.ndarray]
    transforms: Dict[Band, np.ndarray]
    spectrum: Spectrum
    tightness_residual: float

    @property
    def n(self) -> int:
        return self.spectrum.n

    @property
    def low_pass(self) -> Band:
        return self.bands[0]

    @property
    def is_tight(self) -> bool:
        return self.tightness_residual <= TIGHTNESS_TOL

    def require_tight(self, what: str) -> None:
        if not self.is_tight:
            raise VariantNotTightError(
                f"{what} needs a tight system; residual {self.tightness_residual:.3e} "
                f"(variant={self.variant!r}, scales={self.scales})"
            )


@dataclass(frozen=True)
class FrameletCoeffs:
    """Per-band coefficient matrices, keyed exactly by the system's bands."""

    bands: Dict[Band, np.ndarray]

    def __getitem__(self, band: Band) -> np.ndarray:
        return self.bands[band]


def build_framelet_system(s: Spectrum, scales: int, variant: str = "tight") -> FrameletSystem:
    """Build responses and dense transform matrices for ``s``.

    Eigenvalues are clipped at 0 from below (solver jitter only) before the
    trig evaluation.
    """
    bands = band_index_set(scales)
    lams = np.maximum(_check_lambda(s.eigenvalues), 0.0)
    responses = haar_response(lams, scales, variant)
    transforms = {}
    for band in bands:
        w = (s.u.T * responses[band]) @ s.u
        w = (w + w.T) / 2.0
        w.setflags(write=False)
        responses[band].setflags(write=False)
        transforms[band] = w
    square_sum = sum(responses[band] ** 2 for band in bands)
    residual = float(np.max(np.abs(square_sum - 1.0)))
    return FrameletSystem(
        scales=scales,
        variant=variant,
        bands=bands,
        responses=responses,
        transforms=transforms,
        spectrum=s,
        tightness_residual=residual,
    )


def _check_signal(sys: FrameletSystem, signal: np.ndarray) -> np.ndarray:
    signal = np.asarray(signal, dtype=float)
    if signal.shape[0] != sys.n:
        raise DimensionMismatchError(
            f"signal has {signal.shape[0]} rows, system expects {sys.n}"
        )
    return signal


def decompose(sys: FrameletSystem, signal: np.ndarray) -> FrameletCoeffs:
    """Framelet analysis: one coefficient matrix W_{r,j} @ signal per band."""
    signal = _check_signal(sys, signal)
    return FrameletCoeffs(bands={b: sys.transforms[b] @ signal for b in sys.bands})


def reconstruct(sys: FrameletSystem, coeffs: FrameletCoeffs) -> np.ndarray:
    """Framelet synthesis: sum_b W_b^T @ coeffs[b].

    Exact inverse of :func:`decompose` on tight systems.
    """
    if set(coeffs.bands) != set(sys.bands):
        raise BandMismatchError(
            f"coefficient bands {sorted(coeffs.bands)} != system bands {sorted(sys.bands)}"
        )
    out = None
    for band in sys.bands:
        term = sys.transforms[band].T @ _check_signal(sys, coeffs.bands[band])
        out = term if out is None else out + term
    return out
