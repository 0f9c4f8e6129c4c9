"""Complex-Gaussian wavefunction algebra and the propagator/slit chain engine.

Every intermediate state of the interferometer is an unnormalized complex
Gaussian ``prefactor * exp(-a x^2 + b x + c)`` with Re(a) > 0. Free
propagation and Gaussian slit transmission map such forms to such forms via
the identity  integral exp(-A y^2 + B y) dy = sqrt(pi/A) exp(B^2/4A)  for
Re(A) > 0 (principal-branch square roots throughout). The chain evaluator
here is exact, so it doubles as the independent oracle for the closed-form
looped-path coefficients in :mod:`eltsim.closedform`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .params import PhysicsConfig, derive

# exp() overflow guard for the real part of the exponent
_EXP_LIMIT = 700.0


class DegenerateChainError(ValueError):
    """A Gaussian integration step hit Re(A) <= 0: the chain is invalid."""


class EvaluationError(ValueError):
    """Pointwise evaluation would overflow the real exponent."""


@dataclass(frozen=True)
class GaussianForm:
    """prefactor * exp(-a x^2 + b x + c); a in 1/m^2, b in 1/m, c dimensionless.

    The prefactor accumulates every chain normalization (propagator constants
    and Gaussian-integral factors) as a single complex number so that branch
    choices of the square roots cannot disagree between stages.
    """

    a: complex
    b: complex = 0.0j
    c: complex = 0.0j
    prefactor: complex = 1.0 + 0.0j

    def __post_init__(self):
        for name in ("a", "b", "c", "prefactor"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"non-finite coefficient {name}: {v!r}")
        if self.a.real <= 0:
            raise DegenerateChainError(f"Re(a) must be positive, got {self.a!r}")

    def evaluate(self, x):
        """Value at real position x (scalar or array)."""
        x = np.asarray(x, dtype=float)
        exponent = -self.a * x * x + self.b * x + self.c
        if np.any(exponent.real > _EXP_LIMIT):
            worst = float(np.max(exponent.real))
            raise EvaluationError(f"real exponent {worst:.3g} exceeds overflow limit {_EXP_LIMIT}")
        out = self.prefactor * np.exp(exponent)
        return complex(out) if out.ndim == 0 else out

    def norm_squared(self) -> float:
        """integral |form(x)|^2 dx, in closed form."""
        ar, br, cr = 2.0 * self.a.real, 2.0 * self.b.real, 2.0 * self.c.real
        return abs(self.prefactor) ** 2 * math.sqrt(math.pi / ar) * math.exp(br * br / (4.0 * ar) + cr)


def initial_packet(config: PhysicsConfig) -> GaussianForm:
    """Normalized source packet of transverse width sigma0, centered at x=0."""
    return GaussianForm(
        a=1.0 / (2.0 * config.sigma0**2) + 0.0j,
        prefactor=(config.sigma0 * math.sqrt(math.pi)) ** -0.5 + 0.0j,
    )


def apply_slit(form: GaussianForm, center: float, beta: float) -> GaussianForm:
    """Multiply by the Gaussian aperture exp(-(x-center)^2 / 2 beta^2)."""
    inv = 1.0 / (2.0 * beta**2)
    return replace(
        form,
        a=form.a + inv,
        b=form.b + center / beta**2,
        c=form.c - center * center * inv,
    )


def _integrate_quadratic(form: GaussianForm, kappa: float) -> GaussianForm:
    """Convolve with the kernel exp(i kappa (x-y)^2 / 2), no prefactor.

    Carries out integral exp(i kappa (x-y)^2 / 2) form(y) dy exactly; the
    caller supplies whatever propagator constant belongs to the kernel.
    """
    big_a = form.a - 0.5j * kappa
    if big_a.real <= 0:
        raise DegenerateChainError(f"integration step has Re(A) = {big_a.real:.3g} <= 0")
    return GaussianForm(
        a=kappa * kappa / (4.0 * big_a) - 0.5j * kappa,
        b=-1j * kappa * form.b / (2.0 * big_a),
        c=form.c + form.b * form.b / (4.0 * big_a),
        prefactor=form.prefactor * cmath.sqrt(cmath.pi / big_a),
    )


def propagate(form: GaussianForm, duration: float, config: PhysicsConfig) -> GaussianForm:
    """Free evolution for the given duration with the standard 1-D propagator
    sqrt(m / 2 pi i hbar dt) exp(i m (x-y)^2 / 2 hbar dt)."""
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration!r}")
    kappa = config.mass / (config.hbar * duration)
    out = _integrate_quadratic(form, kappa)
    constant = cmath.sqrt(config.mass / (2j * cmath.pi * config.hbar * duration))
    return replace(out, prefactor=out.prefactor * constant)


def looped_kernel_propagate(
    form: GaussianForm, config: PhysicsConfig, interior_slit_center: float
) -> GaussianForm:
    """Two-segment slit-to-slit-and-back kernel with an interior slit crossing.

    Integrates the first segment exp(i m (x2-x1)^2 / 4 hbar (eps+eta)),
    applies the interior aperture at ``interior_slit_center``, integrates the
    second segment, and multiplies the kernel constant
    sqrt(m / 4 pi i hbar (eps+eta)) exactly once for the whole two-segment
    kernel (not once per segment; the closed form shares this convention).
    """
    span = derive(config).epsilon + config.eta
    kappa = config.mass / (2.0 * config.hbar * span)
    out = _integrate_quadratic(form, kappa)
    out = apply_slit(out, interior_slit_center, config.beta)
    out = _integrate_quadratic(out, kappa)
    constant = cmath.sqrt(config.mass / (4j * cmath.pi * config.hbar * span))
    return replace(out, prefactor=out.prefactor * constant)


def chain_nonexotic(which: int, config: PhysicsConfig) -> GaussianForm:
    """Straight-through path through slit 1 (center +d/2) or slit 2 (-d/2)."""
    if which not in (1, 2):
        raise ValueError(f"slit index must be 1 or 2, got {which!r}")
    center = config.d / 2.0 if which == 1 else -config.d / 2.0
    form = initial_packet(config)
    form = propagate(form, config.t, config)
    form = apply_slit(form, center, config.beta)
    return propagate(form, config.tau, config)


def chain_exotic(loop: str, config: PhysicsConfig) -> GaussianForm:
    """Looped path: slit 1 -> slit 2 -> slit 1 -> screen for loop "12".

    Loop "21" is the same chain with d -> -d, so it mirrors "12" in x.
    """
    if loop not in ("12", "21"):
        raise ValueError(f'loop must be "12" or "21", got {loop!r}')
    d = config.d if loop == "12" else -config.d
    form = initial_packet(config)
    form = propagate(form, config.t, config)
    form = apply_slit(form, d / 2.0, config.beta)
    form = looped_kernel_propagate(form, config, -d / 2.0)
    form = apply_slit(form, d / 2.0, config.beta)
    return propagate(form, config.tau, config)
