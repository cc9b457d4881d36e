"""Closed-form propagators for the two integrable drive regimes.

Each 2x2 block of the Hamiltonian admits an exact propagator in two
situations:

* **Proportional drive** (:class:`IC1Setup`): the block coupling is a
  fixed multiple of the block field, so the instantaneous eigenvectors
  never rotate and evolution is a pure phase per eigenstate.
* **Rate-matched drive** (:class:`IC2Setup`): the eigenvector mixing
  angle rotates at a rate proportional to the instantaneous level
  splitting, which closes the equations of motion in the rotating
  eigenbasis.

Both produce the amplitude pairs of the four canonical initial
eigenstates, labelled ``x``/``y`` for subspace I and ``z``/``w`` for
subspace II.  The pairs are exactly unitary and mutually orthogonal
for all times.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from . import drive
from ._kernels import _pykernels
from .drive import Constant, DriveProfile
from .errors import ConfigError, BranchExitError, NotIntegrableError
from .model import ModelParams, Subspace

__all__ = [
    "PhaseConvention",
    "BlockAmplitudes",
    "IC1Setup",
    "IC2Setup",
    "Admissibility",
    "ic1_phase",
    "ic1_evolve",
    "ic2_admissible",
    "ic2_theta",
    "ic2_evolve",
    "ic2_derived_field",
    "ic2_breakpoints",
    "ic2_kernel_coeffs",
]

# initial eigenstate -> (amplitude label, subspace)
_INITIALS = {
    "phi1": ("x", Subspace.ONE),
    "phi2": ("y", Subspace.ONE),
    "phi3": ("z", Subspace.TWO),
    "phi4": ("w", Subspace.TWO),
}

_PROPORTIONALITY_TOL = 1e-10
_PROPORTIONALITY_SAMPLES = 1000
_BRANCH_SLACK = 1e-12


class PhaseConvention(Enum):
    """Sign treatment of the accumulated splitting phase.

    ``SIGNED`` integrates the signed splitting along the drive; with a
    frozen eigenvector angle this is the exact propagator phase, and it
    is the default.  ``NONNEGATIVE`` integrates the magnitude of the
    splitting instead, which reproduces plots drawn with the
    nonnegative gap; the two agree until the block field first changes
    sign.
    """

    SIGNED = "signed"
    NONNEGATIVE = "nonnegative"


@dataclass(frozen=True)
class BlockAmplitudes:
    """Amplitude pair of one propagated canonical eigenstate.

    Attributes
    ----------
    a1, a2 : complex
        Components on the block's ordered basis pair.
    subspace : Subspace
        Block the amplitudes live in.
    label : str
        ``"x"``/``"y"`` (subspace I) or ``"z"``/``"w"`` (subspace II).
    """

    a1: complex
    a2: complex
    subspace: Subspace
    label: str

    def norm(self) -> float:
        """|a1|**2 + |a2|**2; exactly 1 up to rounding for all propagators here."""
        return abs(self.a1) ** 2 + abs(self.a2) ** 2


@dataclass(frozen=True)
class IC1Setup:
    """Proportional-drive regime: block coupling tracks the block field.

    ``k`` is the subspace-I ratio coupling/field, and ``theta10`` the
    frozen mixing angle it implies; the two must agree via
    ``tan(2*theta10) = k``.  ``theta20`` plays the same role for
    subspace II (its implied ratio is ``tan(2*theta20)``).

    Parameters
    ----------
    k : float
        Ratio of the subspace-I coupling to the subspace-I field.
    theta10 : float
        Frozen subspace-I mixing angle, radians.
    theta20 : float, optional
        Frozen subspace-II mixing angle, radians.  Defaults to 0
        (subspace II uncoupled).
    """

    k: float
    theta10: float
    theta20: float = 0.0

    def __post_init__(self):
        resid = abs(math.tan(2.0 * self.theta10) - self.k)
        if resid > 1e-12 * max(1.0, abs(self.k)):
            raise ValueError(
                "theta10 inconsistent with k: tan(2*theta10) must equal k"
            )

    @classmethod
    def from_ratios(cls, k: float, k2: float = 0.0) -> "IC1Setup":
        """Build from the two coupling/field ratios on the principal branch."""
        return cls(k=k, theta10=0.5 * math.atan(k), theta20=0.5 * math.atan(k2))

    @property
    def k2(self) -> float:
        """Implied subspace-II ratio tan(2*theta20)."""
        return math.tan(2.0 * self.theta20)


def _horizon(t: float) -> float:
    # power-of-two bucket >= |t| so the cached proportionality scan
    # is reused across nearby evaluation times
    return 2.0 ** math.ceil(math.log2(max(abs(t), 1.0)))


@lru_cache(maxsize=256)
def _proportionality_residual(
    params: ModelParams, subspace: Subspace, cos2t: float, sin2t: float, horizon: float
) -> float:
    if subspace is Subspace.ONE:
        fld, cpl = params.omega_plus, params.lambda_m
    else:
        fld, cpl = params.omega_minus, params.lambda_p
    worst = 0.0
    scale = 1.0
    n = _PROPORTIONALITY_SAMPLES
    for i in range(n):
        ti = horizon * i / (n - 1)
        f = fld(ti)
        c = cpl(ti)
        worst = max(worst, abs(c * cos2t - f * sin2t))
        scale = max(scale, abs(f), abs(c))
    return worst / scale


def _require_proportional(
    setup: IC1Setup, params: ModelParams, subspace: Subspace, t: float
) -> None:
    theta0 = setup.theta10 if subspace is Subspace.ONE else setup.theta20
    resid = _proportionality_residual(
        params, subspace, math.cos(2.0 * theta0), math.sin(2.0 * theta0), _horizon(t)
    )
    if resid > _PROPORTIONALITY_TOL:
        raise NotIntegrableError(
            f"subspace {subspace.value} coupling is not proportional to its "
            f"field (max scaled residual {resid:.3e})"
        )


def _splitting_integral(
    params: ModelParams,
    subspace: Subspace,
    theta0: float,
    t: float,
    convention: PhaseConvention,
) -> float:
    # signed splitting along the frozen eigenbasis:
    # g(t) = cos(2*theta0)*field + sin(2*theta0)*coupling
    c2 = math.cos(2.0 * theta0)
    s2 = math.sin(2.0 * theta0)
    if subspace is Subspace.ONE:
        fname, cname = "omega_plus", "lambda_m"
        fval, cval = params.omega_plus, params.lambda_m
        fint = params.omega_plus_integral(t)
        cint = params.lambda_m_integral(t)
    else:
        fname, cname = "omega_minus", "lambda_p"
        fval, cval = params.omega_minus, params.lambda_p
        fint = params.omega_minus_integral(t)
        cint = params.lambda_p_integral(t)
    if convention is PhaseConvention.SIGNED:
        return c2 * fint + s2 * cint
    if t < 0.0:
        raise ValueError("the nonnegative phase convention requires t >= 0")
    prof = _single_combination(params, fname, cname, c2, s2)
    if prof is not None:
        return drive.integral_abs(prof, t)
    return drive.quadrature(lambda u: abs(c2 * fval(u) + s2 * cval(u)), 0.0, t)


def _single_combination(
    params: ModelParams, fname: str, cname: str, c2: float, s2: float
) -> DriveProfile | None:
    # c2*field + s2*coupling as one closed profile, or None
    a1, b1, p1, a2, b2, p2, o1 = params.derived_two_term(fname)
    a3, b3, p3, a4, b4, p4, o2 = params.derived_two_term(cname)
    terms: list[tuple[float, float, float]] = []
    for amp, freq, ph in (
        (c2 * a1, b1, p1),
        (c2 * a2, b2, p2),
        (s2 * a3, b3, p3),
        (s2 * a4, b4, p4),
    ):
        if amp == 0.0:
            continue
        for i, (amp0, freq0, ph0) in enumerate(terms):
            if (freq0, ph0) == (freq, ph):
                terms[i] = (amp0 + amp, freq, ph)
                break
        else:
            terms.append((amp, freq, ph))
    terms = [term for term in terms if term[0] != 0.0]
    offset = c2 * o1 + s2 * o2
    if not terms:
        return Constant(offset)
    if len(terms) == 1 and offset == 0.0:
        amp, freq, ph = terms[0]
        return drive.Sinusoid(amp, freq, ph)
    return None


def ic1_phase(
    setup: IC1Setup,
    params: ModelParams,
    t: float,
    j: int,
    convention: PhaseConvention = PhaseConvention.SIGNED,
) -> complex:
    """Unit-modulus evolution phase of the j-th canonical eigenstate.

    Parameters
    ----------
    setup : IC1Setup
        Frozen-angle configuration.
    params : ModelParams
        Drive profiles; each block's coupling must be proportional to
        its field with the ratio implied by ``setup``.
    t : float
        Evolution time.
    j : int
        Eigenstate index, 1..4 (1, 2 in subspace I; 3, 4 in subspace II).
    convention : PhaseConvention, optional
        Sign treatment of the splitting phase; see
        :class:`PhaseConvention`.

    Returns
    -------
    complex
        ``exp(-i * integral of the eigenvalue over [0, t])``.

    Raises
    ------
    NotIntegrableError
        If the proportionality fails anywhere on the sampled grid
        covering ``[0, t]``.
    """
    if j not in (1, 2, 3, 4):
        raise ValueError("eigenstate index must be 1, 2, 3 or 4")
    subspace = Subspace.ONE if j <= 2 else Subspace.TWO
    _require_proportional(setup, params, subspace, t)
    theta0 = setup.theta10 if subspace is Subspace.ONE else setup.theta20
    lz = 0.25 * params.lambda_z_integral(t)
    split = _splitting_integral(params, subspace, theta0, t, convention)
    if j == 1:
        phase = lz + split
    elif j == 2:
        phase = lz - split
    elif j == 3:
        phase = -lz + split
    else:
        phase = -lz - split
    return cmath.exp(-1j * phase)


def ic1_evolve(
    setup: IC1Setup,
    params: ModelParams,
    t: float,
    initial: str,
    convention: PhaseConvention = PhaseConvention.SIGNED,
) -> BlockAmplitudes:
    """Propagate one canonical eigenstate under proportional drive.

    ``initial`` selects the eigenstate: ``"phi1"``/``"phi2"`` span
    subspace I, ``"phi3"``/``"phi4"`` subspace II.  With a frozen
    mixing angle the components simply acquire the eigenphase:
    ``x(t) = (cos(theta10), sin(theta10)) * I1`` and
    ``y(t) = (-sin(theta10), cos(theta10)) * I2`` (analogous for
    subspace II with ``theta20``, ``I3``, ``I4``).

    Raises
    ------
    NotIntegrableError
        If the block's proportionality fails.
    """
    try:
        label, subspace = _INITIALS[initial]
    except KeyError:
        raise ValueError(
            f"initial must be one of {sorted(_INITIALS)}, got {initial!r}"
        ) from None
    theta0 = setup.theta10 if subspace is Subspace.ONE else setup.theta20
    c0, s0 = math.cos(theta0), math.sin(theta0)
    if label in ("x", "z"):
        ph = ic1_phase(setup, params, t, 1 if subspace is Subspace.ONE else 3, convention)
        return BlockAmplitudes(c0 * ph, s0 * ph, subspace, label)
    ph = ic1_phase(setup, params, t, 2 if subspace is Subspace.ONE else 4, convention)
    return BlockAmplitudes(-s0 * ph, c0 * ph, subspace, label)


@dataclass(frozen=True)
class IC2Setup:
    """Rate-matched regime: the mixing angle rotates with the splitting.

    Subspace I is driven by the coupling ``lambda_m`` with rate
    constant ``kappa``; subspace II by ``lambda_p`` with rate constant
    ``chi``.  ``lambda_z`` contributes only a common (subspace-signed)
    phase.  ``chi=0`` (the default) marks subspace II as unused;
    subspace-II operations then raise :class:`ConfigError`.

    Parameters
    ----------
    kappa : float
        Subspace-I rate constant, nonzero.
    theta10 : float
        Initial subspace-I mixing angle, in ``[0, pi/2]``.
    lambda_m : DriveProfile
        Subspace-I coupling drive.
    lambda_z : DriveProfile, optional
        Common diagonal drive; defaults to zero.
    chi : float, optional
        Subspace-II rate constant; 0 disables subspace II.
    theta20 : float, optional
        Initial subspace-II mixing angle, in ``[0, pi/2]``.
    lambda_p : DriveProfile, optional
        Subspace-II coupling drive.
    """

    kappa: float
    theta10: float
    lambda_m: DriveProfile
    lambda_z: DriveProfile = Constant(0.0)
    chi: float = 0.0
    theta20: float = 0.0
    lambda_p: DriveProfile = Constant(0.0)

    def __post_init__(self):
        if self.kappa == 0.0:
            raise ValueError("kappa must be nonzero")
        if not 0.0 <= self.theta10 <= 0.5 * math.pi:
            raise ValueError("theta10 must lie in [0, pi/2]")
        if not 0.0 <= self.theta20 <= 0.5 * math.pi:
            raise ValueError("theta20 must lie in [0, pi/2]")


@dataclass(frozen=True)
class Admissibility:
    """Verdict of the rate-matched branch-confinement inequality."""

    valid: bool
    reason: str | None = None


def _ic2_pair(setup: IC2Setup, subspace: Subspace) -> tuple[float, float, DriveProfile]:
    if subspace is Subspace.ONE:
        return setup.kappa, setup.theta10, setup.lambda_m
    if setup.chi == 0.0:
        raise ConfigError("subspace II requested but chi is 0 (unused)")
    return setup.chi, setup.theta20, setup.lambda_p


def _coupling_sinusoid(profile: DriveProfile) -> tuple[float, float, float] | None:
    # (amplitude, frequency, phase) with frequency > 0, or None if the
    # profile is not a pure sinusoid
    amp, freq, phase, offset = drive.single_term(profile)
    if freq == 0.0 or offset != 0.0 or amp == 0.0:
        return None
    if freq < 0.0:
        amp, freq, phase = -amp, -freq, -phase
    return amp, freq, phase


def ic2_admissible(setup: IC2Setup, subspace: Subspace = Subspace.ONE) -> Admissibility:
    """Check that the mixing angle stays on the principal branch for all t.

    The coupling drive must be a pure sinusoid ``mu*sin(beta*t + phi)``.
    For an interior initial angle the confinement inequality is
    ``beta/(2*rate*mu) >= max(2/(1+cos(2*theta0)), 2/(1-cos(2*theta0)))``;
    for ``theta0 = 0`` the phase must vanish and
    ``0 <= 4*rate*mu/beta <= 1``.  Returns a verdict, never raises.
    """
    try:
        rate, theta0, profile = _ic2_pair(setup, subspace)
    except ConfigError as exc:
        return Admissibility(False, str(exc))
    sinus = _coupling_sinusoid(profile)
    if sinus is None:
        return Admissibility(
            False, "coupling drive must be a pure sinusoid with nonzero amplitude"
        )
    mu, beta, phi = sinus
    if theta0 == 0.0:
        if phi != 0.0:
            return Admissibility(
                False, "initial phase must vanish when the angle starts at 0"
            )
        x = 4.0 * rate * mu / beta
        if x < 0.0:
            return Admissibility(
                False,
                "rate*amplitude/frequency must be nonnegative when the angle starts at 0",
            )
        if x > 1.0 + _BRANCH_SLACK:
            return Admissibility(
                False, f"|4*rate*amplitude/frequency| = {x:.6g} exceeds 1"
            )
        return Admissibility(True)
    c0 = math.cos(2.0 * theta0)
    hi = math.inf if 1.0 + c0 <= 0.0 else 2.0 / (1.0 + c0)
    lo = math.inf if 1.0 - c0 <= 0.0 else 2.0 / (1.0 - c0)
    bound = max(hi, lo)
    lhs = beta / (2.0 * rate * mu)
    # ">=" must survive rounding: equality is the tangent-touch case
    if lhs < bound - _BRANCH_SLACK * max(1.0, abs(bound)):
        return Admissibility(
            False,
            f"frequency/(2*rate*amplitude) = {lhs:.6g} is below the "
            f"confinement bound {bound:.6g}",
        )
    return Admissibility(True)


def ic2_theta(setup: IC2Setup, t: float, subspace: Subspace = Subspace.ONE) -> float:
    """Mixing angle at time t on the principal branch ``2*theta in [0, pi]``.

    ``cos(2*theta(t)) = cos(2*theta0) - 2*rate*integral(coupling, [0, t])``.

    Raises
    ------
    BranchExitError
        If the cosine argument leaves ``[-1, 1]`` by more than 1e-12
        (an admissible setup never does).
    """
    rate, theta0, profile = _ic2_pair(setup, subspace)
    c = math.cos(2.0 * theta0) - 2.0 * rate * drive.integral(profile, t)
    if c > 1.0:
        if c > 1.0 + _BRANCH_SLACK:
            raise BranchExitError(
                f"cos(2*theta) = {c!r} left the principal branch at t = {t!r}"
            )
        c = 1.0
    elif c < -1.0:
        if c < -1.0 - _BRANCH_SLACK:
            raise BranchExitError(
                f"cos(2*theta) = {c!r} left the principal branch at t = {t!r}"
            )
        c = -1.0
    return 0.5 * math.acos(c)


def ic2_evolve(setup: IC2Setup, t: float, initial: str) -> BlockAmplitudes:
    """Propagate one canonical eigenstate under rate-matched drive.

    With ``theta`` the angle from :func:`ic2_theta`,
    ``delta = (theta - theta0)*sqrt(1 + rate**-2)``,
    ``rbar = 1/sqrt(1 + rate**-2)`` and ``L`` the accumulated diagonal
    phase ``exp(-i*integral(lambda_z)/4)`` (conjugated for subspace II):

    ``x1 = L*(cos(theta)*(cos(delta) - i*rbar*sin(delta)/rate) + sin(theta)*rbar*sin(delta))``
    ``x2 = L*(sin(theta)*(cos(delta) - i*rbar*sin(delta)/rate) - cos(theta)*rbar*sin(delta))``

    and the orthogonal pair

    ``y1 = L*(-sin(theta)*(cos(delta) + i*rbar*sin(delta)/rate) + cos(theta)*rbar*sin(delta))``
    ``y2 = L*(cos(theta)*(cos(delta) + i*rbar*sin(delta)/rate) + sin(theta)*rbar*sin(delta))``.

    Subspace II follows the same expressions with its own rate, angle
    and coupling.  The pairs are exactly unitary and orthogonal.

    Raises
    ------
    BranchExitError
        If the angle leaves the principal branch (inadmissible setup).
    ConfigError
        If subspace II is requested while disabled.
    """
    try:
        label, subspace = _INITIALS[initial]
    except KeyError:
        raise ValueError(
            f"initial must be one of {sorted(_INITIALS)}, got {initial!r}"
        ) from None
    rate, theta0, _profile = _ic2_pair(setup, subspace)
    theta = ic2_theta(setup, t, subspace)
    stretch = math.sqrt(1.0 + rate**-2)
    rbar = 1.0 / stretch
    delta = (theta - theta0) * stretch
    lz = 0.25 * drive.integral(setup.lambda_z, t)
    lam = cmath.exp(-1j * lz) if subspace is Subspace.ONE else cmath.exp(1j * lz)
    cth, sth = math.cos(theta), math.sin(theta)
    cd, sd = math.cos(delta), math.sin(delta)
    inv = rbar / rate
    if label in ("x", "z"):
        a1 = lam * (cth * (cd - 1j * inv * sd) + sth * rbar * sd)
        a2 = lam * (sth * (cd - 1j * inv * sd) - cth * rbar * sd)
    else:
        a1 = lam * (-sth * (cd + 1j * inv * sd) + cth * rbar * sd)
        a2 = lam * (cth * (cd + 1j * inv * sd) + sth * rbar * sd)
    return BlockAmplitudes(a1, a2, subspace, label)


def ic2_derived_field(
    setup: IC2Setup, t: float, subspace: Subspace = Subspace.ONE
) -> float:
    """Block field implied by the rate matching: coupling/tan(2*theta).

    Evaluated cancellation-free; the removable singularity at
    ``theta = pi/4`` gives 0.  At isolated branch-touch times
    (:func:`ic2_breakpoints`) the field has a jump; evaluation exactly
    there raises :class:`BranchExitError` (take one-sided limits from
    inside a segment instead).

    Raises
    ------
    ConfigError
        If the coupling is not a pure sinusoid, or subspace II is
        requested while disabled.
    """
    rate, theta0, profile = _ic2_pair(setup, subspace)
    sinus = _coupling_sinusoid(profile)
    if sinus is None:
        raise ConfigError("derived field requires a pure sinusoidal coupling")
    mu, beta, phi = sinus
    c0 = math.cos(2.0 * theta0)
    try:
        # scalar helper; the compiled twin computes the identical value
        # inside its integration loop
        return _pykernels._ic2_field(mu, beta, phi, rate, c0, 1.0 - c0, t)
    except ValueError:
        raise BranchExitError(
            f"angle touches the branch edge at t = {t!r}; "
            "the derived field is one-sided there"
        ) from None


def ic2_breakpoints(
    setup: IC2Setup, t_end: float, subspace: Subspace = Subspace.ONE
) -> list[float]:
    """Times in (0, t_end) where the angle touches the branch edge.

    The derived field jumps at these times, so numeric integration
    must not step across them.  Solves ``cos(2*theta(t)) = +-1``
    exactly for sinusoidal and constant couplings.

    Raises
    ------
    ConfigError
        If the coupling is neither a pure sinusoid nor a constant, or
        subspace II is requested while disabled.
    """
    rate, theta0, profile = _ic2_pair(setup, subspace)
    if t_end <= 0.0:
        return []
    c0 = math.cos(2.0 * theta0)
    out: list[float] = []
    sinus = _coupling_sinusoid(profile)
    if sinus is not None:
        mu, beta, phi = sinus
        # cos(2*theta(t)) = c0 - (2*rate*mu/beta)*(cos(phi) - cos(beta*t + phi))
        scale = beta / (2.0 * rate * mu)
        for edge in (1.0, -1.0):
            target = math.cos(phi) + (edge - c0) * scale
            if abs(target) > 1.0:
                if abs(target) > 1.0 + _BRANCH_SLACK:
                    continue
                target = math.copysign(1.0, target)
            base = math.acos(target)
            for branch in (base, -base):
                # beta*t + phi = branch + 2*pi*n
                n0 = math.floor((phi - branch) / (2.0 * math.pi))
                n = n0
                while True:
                    tt = (branch + 2.0 * math.pi * n - phi) / beta
                    if tt >= t_end:
                        break
                    if tt > 0.0:
                        out.append(tt)
                    n += 1
    else:
        amp, freq, phase, offset = drive.single_term(profile)
        if freq != 0.0 or amp != 0.0:
            raise ConfigError(
                "breakpoints require a pure sinusoidal or constant coupling"
            )
        if offset != 0.0:
            for edge in (1.0, -1.0):
                tt = (c0 - edge) / (2.0 * rate * offset)
                if 0.0 < tt < t_end:
                    out.append(tt)
    out.sort()
    deduped: list[float] = []
    for tt in out:
        if not deduped or tt - deduped[-1] > 1e-12 * max(1.0, tt):
            deduped.append(tt)
    return deduped


def ic2_kernel_coeffs(
    setup: IC2Setup, subspace: Subspace = Subspace.ONE
) -> tuple[float, ...]:
    """Coefficient vector driving the rate-matched numeric kernel.

    Layout: ``(mu, beta, phi, rate, cos(2*theta0), 1 - cos(2*theta0))``
    followed by the two-term diagonal drive (negated for subspace II).
    Feed to :func:`spinpair.oracle.integrate_block_ic2` together with
    :func:`ic2_breakpoints`.

    Raises
    ------
    ConfigError
        If the coupling is not a pure sinusoid, or subspace II is
        requested while disabled.
    """
    rate, theta0, profile = _ic2_pair(setup, subspace)
    sinus = _coupling_sinusoid(profile)
    if sinus is None:
        raise ConfigError("kernel coefficients require a pure sinusoidal coupling")
    mu, beta, phi = sinus
    c0 = math.cos(2.0 * theta0)
    amp, freq, phase, offset = drive.single_term(setup.lambda_z)
    if subspace is Subspace.TWO:
        amp, offset = -amp, -offset
    return (mu, beta, phi, rate, c0, 1.0 - c0, amp, freq, phase, 0.0, 0.0, 0.0, offset)
