"""Interaction potentials for laser-dressed and bare Rydberg atoms.

Single source of truth for units: lengths in micrometers (um), times in
microseconds (us), energies and rates as angular frequencies in rad/us
(hbar = 1). Van der Waals coefficients are in rad/us * um^6 and always
enter through configuration input; this package ships no C6 tables.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    ParameterError,
    SingularityError,
    UnsupportedRegimeError,
    ValidityWarning,
)

__all__ = [
    "PotentialKind",
    "DressingParams",
    "InteractionPotential",
    "derive_potential",
    "evaluate_V",
    "blockade_number",
]

# |epsilon| above this is no longer a weak admixture; derive_potential warns.
DRESSING_FRACTION_WARN = 0.3


class PotentialKind(enum.Enum):
    """Which interaction law a potential follows."""

    SOFT_CORE = "soft_core"
    BARE_VDW = "bare_vdw"


@dataclass(frozen=True)
class DressingParams:
    """Parameters of the off-resonant drive admixing the Rydberg state.

    Attributes
    ----------
    rabi : float
        Effective Rabi frequency of the dressing transition, rad/us.
    detuning : float
        Signed detuning from the Rydberg state, rad/us.
    c6 : float
        Signed van der Waals coefficient of the bare Rydberg pair
        interaction, rad/us * um^6.
    """

    rabi: float
    detuning: float
    c6: float

    @property
    def epsilon(self) -> float:
        """Admixture fraction rabi / (2 * detuning)."""
        if self.detuning == 0.0:
            raise ParameterError("admixture fraction undefined at zero detuning")
        return self.rabi / (2.0 * self.detuning)


@dataclass(frozen=True)
class InteractionPotential:
    """A pair potential V(r), either soft-core (dressed) or bare 1/r^6.

    Attributes
    ----------
    kind : PotentialKind
    epsilon : float
        Admixture fraction; 1 in bare mode.
    r_c : float
        Soft-core radius, um; 0 in bare mode.
    v0 : float
        Core height, rad/us. Signed (inherits the detuning's sign); 0 in
        bare mode, which has no core scale.
    c6 : float
        Effective tail coefficient, rad/us * um^6, defined so that
        V(r) -> epsilon^4 * c6 / r^6 at large r. In soft-core mode this
        equals 2 * detuning * r_c^6, which carries the detuning's sign and
        makes V(0) = v0 an exact identity; it is therefore the NEGATED
        input c6 for the attractive-tail inputs this mode requires. In
        bare mode it is the input c6 unchanged.
    """

    kind: PotentialKind
    epsilon: float
    r_c: float
    v0: float
    c6: float


def derive_potential(p: DressingParams, kind: PotentialKind) -> InteractionPotential:
    """Build an :class:`InteractionPotential` from drive parameters.

    Parameters
    ----------
    p : DressingParams
    kind : PotentialKind
        SOFT_CORE requires detuning != 0 and detuning/c6 < 0;
        BARE_VDW requires c6 != 0 (rabi and detuning are ignored).

    Returns
    -------
    InteractionPotential
        Satisfying r_c = |c6/(2 detuning)|^(1/6) and v0 = epsilon^4 *
        (2 detuning) in soft-core mode, with the detuning's sign preserved;
        epsilon = 1, r_c = 0 in bare mode.

    Raises
    ------
    ParameterError
        Zero detuning in soft-core mode, or zero c6 in bare mode.
    UnsupportedRegimeError
        detuning/c6 >= 0 in soft-core mode (a repulsive-tail sign
        combination produces no soft core).
    """
    if kind is PotentialKind.BARE_VDW:
        if p.c6 == 0.0:
            raise ParameterError("bare van der Waals potential needs c6 != 0")
        return InteractionPotential(kind=kind, epsilon=1.0, r_c=0.0, v0=0.0, c6=p.c6)

    if p.detuning == 0.0:
        raise ParameterError("soft-core potential needs a nonzero detuning")
    if p.detuning * p.c6 >= 0.0:
        raise UnsupportedRegimeError(
            "soft-core mode requires detuning/c6 < 0; got detuning="
            f"{p.detuning!r} rad/us, c6={p.c6!r} rad um^6/us"
        )
    eps = p.epsilon
    if abs(eps) > DRESSING_FRACTION_WARN:
        warnings.warn(
            f"dressing fraction |epsilon| = {abs(eps):.3g} is not small; "
            "the projected spin model loses accuracy",
            ValidityWarning,
            stacklevel=2,
        )
    r_c = abs(p.c6 / (2.0 * p.detuning)) ** (1.0 / 6.0)
    v0 = eps**4 * (2.0 * p.detuning)
    # Tail coefficient chosen so V(0) = v0 holds exactly; see class docstring.
    c6_tail = 2.0 * p.detuning * r_c**6
    return InteractionPotential(kind=kind, epsilon=eps, r_c=r_c, v0=v0, c6=c6_tail)


def evaluate_V(pot: InteractionPotential, r):
    """Pair interaction V(r) in rad/us at distance(s) r (um).

    Soft-core: V = v0 / (1 + (r/r_c)^6), which is algebraically
    epsilon^4 * c6 / (r_c^6 + r^6) and satisfies V(0) = v0 and
    V(r_c) = v0/2 exactly. Bare: V = c6 / r^6.

    Parameters
    ----------
    pot : InteractionPotential
    r : float or ndarray
        Distance(s), um; r >= 0, and r > 0 in bare mode.

    Raises
    ------
    ParameterError
        Negative distance.
    SingularityError
        r = 0 in bare mode.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ParameterError("distances must be non-negative")
    if pot.kind is PotentialKind.BARE_VDW:
        if np.any(r == 0):
            raise SingularityError("bare 1/r^6 potential diverges at r = 0")
        out = pot.c6 / r**6
    else:
        if pot.r_c == 0.0:
            # epsilon = 0 with c6_tail = 0 would hit 0/0; only reachable by
            # hand-built instances, not via derive_potential.
            raise ParameterError("soft-core potential needs r_c > 0")
        out = pot.v0 / (1.0 + (r / pot.r_c) ** 6)
    return out if out.ndim else float(out)


def blockade_number(density: float, pot: InteractionPotential) -> float:
    """Mean atom count inside a soft-core radius, 4 pi density r_c^3 / 3.

    Returns 0 for the bare potential (r_c = 0). density in um^-3.
    """
    if density < 0:
        raise ParameterError("density must be non-negative")
    return 4.0 * math.pi * density * pot.r_c**3 / 3.0
