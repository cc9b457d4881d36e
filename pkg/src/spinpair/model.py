"""Two-qubit exchange model: Hamiltonians, blocks, and instantaneous spectra.

Basis conventions (frozen contract):

* uncoupled order: ``|++>, |-->, |+->, |-+>``
* coupled order:   ``|++>, |-->, |s>, |a>`` with
  ``|s> = (|+-> + |-+>)/sqrt(2)`` and ``|a> = (|+-> - |-+>)/sqrt(2)``

The Hamiltonian is block diagonal in both orders; the first block acts
on ``{|++>, |-->}`` (subspace I), the second on the remaining pair
(subspace II).  Derived drive combinations used throughout:

* ``lambda_p = (lambda_x + lambda_y)/4``, ``lambda_m = (lambda_x - lambda_y)/4``
* ``omega_plus = (omega_1 + omega_2)/2``, ``omega_minus = (omega_1 - omega_2)/2``
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import drive
from .drive import Constant, DriveProfile, Scaled, Sinusoid
from .errors import ConfigError, NotStaticError

__all__ = [
    "Subspace",
    "ModelParams",
    "Spectrum",
    "StaticGroundState",
    "hamiltonian_uncoupled",
    "hamiltonian_coupled",
    "block",
    "spectrum",
    "static_ground_state",
    "basis_change_matrix",
    "UNCOUPLED_LABELS",
    "COUPLED_LABELS",
]

UNCOUPLED_LABELS = ("pp", "mm", "pm", "mp")
COUPLED_LABELS = ("pp", "mm", "s", "a")


class Subspace(Enum):
    """The two decoupled 2x2 blocks of the Hamiltonian."""

    ONE = "I"
    TWO = "II"


def _combine(c1: float, p1: DriveProfile, c2: float, p2: DriveProfile) -> DriveProfile:
    """c1*p1 + c2*p2 as a single profile, if the closed algebra allows it."""
    a1, b1, ph1, o1 = drive.single_term(p1)
    a2, b2, ph2, o2 = drive.single_term(p2)
    a1, o1 = c1 * a1, c1 * o1
    a2, o2 = c2 * a2, c2 * o2
    offset = o1 + o2
    terms = [(a, b, ph) for a, b, ph in ((a1, b1, ph1), (a2, b2, ph2)) if a != 0.0]
    if len(terms) == 2:
        if terms[0][1:] == terms[1][1:]:
            terms = [(terms[0][0] + terms[1][0], terms[0][1], terms[0][2])]
            if terms[0][0] == 0.0:
                terms = []
        else:
            raise ConfigError(
                "profile combination mixes incommensurate sinusoids; "
                "specify the primitive profiles directly"
            )
    if not terms:
        return Constant(offset)
    amp, freq, phase = terms[0]
    if offset != 0.0:
        raise ConfigError(
            "profile combination mixes a sinusoid with a constant offset; "
            "specify the primitive profiles directly"
        )
    return Sinusoid(amp, freq, phase)


@dataclass(frozen=True)
class ModelParams:
    """Five primitive drive profiles defining the Hamiltonian."""

    lambda_x: DriveProfile
    lambda_y: DriveProfile
    lambda_z: DriveProfile
    omega_1: DriveProfile
    omega_2: DriveProfile

    @classmethod
    def from_derived(
        cls,
        omega_plus: DriveProfile = Constant(0.0),
        omega_minus: DriveProfile = Constant(0.0),
        lambda_m: DriveProfile = Constant(0.0),
        lambda_p: DriveProfile = Constant(0.0),
        lambda_z: DriveProfile = Constant(0.0),
    ) -> "ModelParams":
        """Build primitives from the derived combinations.

        Raises :class:`ConfigError` when a required sum (for example
        ``lambda_x = 2*lambda_p + 2*lambda_m``) leaves the closed profile
        algebra.
        """
        return cls(
            lambda_x=_combine(2.0, lambda_p, 2.0, lambda_m),
            lambda_y=_combine(2.0, lambda_p, -2.0, lambda_m),
            lambda_z=lambda_z,
            omega_1=_combine(1.0, omega_plus, 1.0, omega_minus),
            omega_2=_combine(1.0, omega_plus, -1.0, omega_minus),
        )

    # -- derived values -------------------------------------------------

    def lambda_p(self, t: float) -> float:
        return 0.25 * (drive.evaluate(self.lambda_x, t) + drive.evaluate(self.lambda_y, t))

    def lambda_m(self, t: float) -> float:
        return 0.25 * (drive.evaluate(self.lambda_x, t) - drive.evaluate(self.lambda_y, t))

    def omega_plus(self, t: float) -> float:
        return 0.5 * (drive.evaluate(self.omega_1, t) + drive.evaluate(self.omega_2, t))

    def omega_minus(self, t: float) -> float:
        return 0.5 * (drive.evaluate(self.omega_1, t) - drive.evaluate(self.omega_2, t))

    def lambda_z_value(self, t: float) -> float:
        return drive.evaluate(self.lambda_z, t)

    # -- derived integrals over [0, t] ----------------------------------

    def lambda_p_integral(self, t: float) -> float:
        return 0.25 * (drive.integral(self.lambda_x, t) + drive.integral(self.lambda_y, t))

    def lambda_m_integral(self, t: float) -> float:
        return 0.25 * (drive.integral(self.lambda_x, t) - drive.integral(self.lambda_y, t))

    def omega_plus_integral(self, t: float) -> float:
        return 0.5 * (drive.integral(self.omega_1, t) + drive.integral(self.omega_2, t))

    def omega_minus_integral(self, t: float) -> float:
        return 0.5 * (drive.integral(self.omega_1, t) - drive.integral(self.omega_2, t))

    def lambda_z_integral(self, t: float) -> float:
        return drive.integral(self.lambda_z, t)

    def is_static(self) -> bool:
        return all(
            drive.is_static(p)
            for p in (self.lambda_x, self.lambda_y, self.lambda_z, self.omega_1, self.omega_2)
        )

    def derived_two_term(self, name: str) -> tuple[float, ...]:
        """Derived profile as (a1, b1, p1, a2, b2, p2, offset) coefficients.

        Exact for every parameter set; used to hand compiled kernels a
        closed description of the drive.
        """
        pair = {
            "omega_plus": (self.omega_1, 0.5, self.omega_2, 0.5),
            "omega_minus": (self.omega_1, 0.5, self.omega_2, -0.5),
            "lambda_m": (self.lambda_x, 0.25, self.lambda_y, -0.25),
            "lambda_p": (self.lambda_x, 0.25, self.lambda_y, 0.25),
            "lambda_z": (self.lambda_z, 1.0, Constant(0.0), 0.0),
        }[name]
        pa, ca, pb, cb = pair
        a1, b1, p1, o1 = drive.single_term(pa)
        a2, b2, p2, o2 = drive.single_term(pb)
        return (ca * a1, b1, p1, cb * a2, b2, p2, ca * o1 + cb * o2)

    def derived_single(self, name: str) -> DriveProfile | None:
        """Derived profile as one closed profile, or None if not reducible."""
        a1, b1, p1, a2, b2, p2, off = self.derived_two_term(name)
        try:
            terms = _combine(
                1.0,
                Constant(0.0) if a1 == 0.0 else Sinusoid(a1, b1, p1),
                1.0,
                Constant(0.0) if a2 == 0.0 else Sinusoid(a2, b2, p2),
            )
            return _combine(1.0, terms, 1.0, Constant(off))
        except ConfigError:
            return None

    def all_frequencies(self) -> list[float]:
        out: list[float] = []
        for p in (self.lambda_x, self.lambda_y, self.lambda_z, self.omega_1, self.omega_2):
            out.extend(drive.frequencies(p))
        return out


def hamiltonian_uncoupled(params: ModelParams, t: float) -> np.ndarray:
    """4x4 Hamiltonian in the uncoupled order; off-block entries exactly zero."""
    lp = params.lambda_p(t)
    lm = params.lambda_m(t)
    lz4 = 0.25 * params.lambda_z_value(t)
    wp = params.omega_plus(t)
    wm = params.omega_minus(t)
    return np.array(
        [
            [wp + lz4, lm, 0.0, 0.0],
            [lm, -wp + lz4, 0.0, 0.0],
            [0.0, 0.0, wm - lz4, lp],
            [0.0, 0.0, lp, -wm - lz4],
        ],
        dtype=complex,
    )


def basis_change_matrix() -> np.ndarray:
    """Coordinate map from uncoupled to coupled order (involutory, orthogonal)."""
    r = 1.0 / math.sqrt(2.0)
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, r, r],
            [0.0, 0.0, r, -r],
        ],
        dtype=complex,
    )


def hamiltonian_coupled(params: ModelParams, t: float) -> np.ndarray:
    """4x4 Hamiltonian in the coupled order (symmetric / antisymmetric pair)."""
    lp = params.lambda_p(t)
    lm = params.lambda_m(t)
    lz4 = 0.25 * params.lambda_z_value(t)
    wp = params.omega_plus(t)
    wm = params.omega_minus(t)
    return np.array(
        [
            [wp + lz4, lm, 0.0, 0.0],
            [lm, -wp + lz4, 0.0, 0.0],
            [0.0, 0.0, lp - lz4, wm],
            [0.0, 0.0, wm, -lp - lz4],
        ],
        dtype=complex,
    )


def block(params: ModelParams, t: float, subspace: Subspace) -> np.ndarray:
    """2x2 Hermitian block of the uncoupled Hamiltonian for one subspace."""
    lz4 = 0.25 * params.lambda_z_value(t)
    if subspace is Subspace.ONE:
        wp = params.omega_plus(t)
        lm = params.lambda_m(t)
        return np.array([[wp + lz4, lm], [lm, -wp + lz4]], dtype=complex)
    wm = params.omega_minus(t)
    lp = params.lambda_p(t)
    return np.array([[wm - lz4, lp], [lp, -wm - lz4]], dtype=complex)


@dataclass(frozen=True)
class Spectrum:
    """Instantaneous eigen-decomposition summary of one 2x2 block.

    ``theta`` is the mixing angle of the instantaneous eigenvectors,
    ``gap`` the nonnegative half-splitting, and ``eps_plus/eps_minus``
    the two eigenvalues (``eps_plus - eps_minus = 2*gap``).  When both
    the field and the coupling vanish the angle is undefined; it is
    reported as 0 with ``degenerate`` set.
    """

    subspace: Subspace
    theta: float
    gap: float
    eps_plus: float
    eps_minus: float
    degenerate: bool


def spectrum(params: ModelParams, t: float, subspace: Subspace) -> Spectrum:
    """Mixing angle and eigenvalues of one block at time t.

    theta = atan2(coupling, field)/2, giving 2*theta in (-pi, pi].
    """
    lz4 = 0.25 * params.lambda_z_value(t)
    if subspace is Subspace.ONE:
        field = params.omega_plus(t)
        coupling = params.lambda_m(t)
        diag = lz4
    else:
        field = params.omega_minus(t)
        coupling = params.lambda_p(t)
        diag = -lz4
    degenerate = field == 0.0 and coupling == 0.0
    theta = 0.0 if degenerate else 0.5 * math.atan2(coupling, field)
    gap = math.hypot(field, coupling)
    return Spectrum(
        subspace=subspace,
        theta=theta,
        gap=gap,
        eps_plus=diag + gap,
        eps_minus=diag - gap,
        degenerate=degenerate,
    )


@dataclass(frozen=True)
class StaticGroundState:
    """Ground-state classification of a time-independent Hamiltonian.

    ``kind`` is one of ``"phi2"``, ``"phi4"``, ``"degenerate_pair"``.
    For the degenerate pair the state is an equal mixture of the two
    lowest eigenstates; the relative phase between them is free and is
    deliberately left unspecified.  ``energy_one``/``energy_two`` are the
    lower eigenvalues of the two subspaces.
    """

    kind: str
    eta: float
    zeta: float
    energy_one: float
    energy_two: float


def static_ground_state(params: ModelParams) -> StaticGroundState:
    """Classify the ground state, comparing eta against lambda_z/4 + zeta."""
    if not params.is_static():
        raise NotStaticError("ground-state classification requires static profiles")
    s1 = spectrum(params, 0.0, Subspace.ONE)
    s2 = spectrum(params, 0.0, Subspace.TWO)
    eta, zeta = s1.gap, s2.gap
    lz4 = 0.25 * params.lambda_z_value(0.0)
    margin = eta - (lz4 + zeta)
    tol = 1e-12 * max(1.0, abs(eta))
    if abs(margin) <= tol:
        kind = "degenerate_pair"
    elif margin > 0.0:
        kind = "phi2"
    else:
        kind = "phi4"
    return StaticGroundState(
        kind=kind,
        eta=eta,
        zeta=zeta,
        energy_one=s1.eps_minus,
        energy_two=s2.eps_minus,
    )
