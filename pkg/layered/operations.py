"""
Reflection off a step impedance, (a u')' + omega^2 a u = 0 on [0, b].

The incident and reflected waves at x = 0 are (u +- u'/(i omega)) / 2, and the
right end only radiates. The interfaces give Schur parameters
r_j = (a_{j-1} - a_j) / (a_{j-1} + a_j) allocated one per variable, and the
medium's reflection is the convergent f_d restricted to the torus line of
round-trip travel times: R(omega) = f_d(e^{2 i eta_1 omega}, ..., e^{2 i eta_d omega}).
"""
import logging

import numpy as np
from django.core.exceptions import ValidationError

from schur.models import SchurData
from schur.operations import eval_convergent
from torus_schur.exceptions import ConditioningError
from torusint.models import TorusLine
from torusint.operations import line_szego

from .models import LayeredMedium, ReflectionSpectrum

logger = logging.getLogger(__name__)

# A layer of thickness eta is crossed twice by the reflected wave.
TRAVEL_FACTOR = 2
INCIDENT_GUARD = 1e-12


def medium_to_schur(medium):
    """
    SchurData with r = (0, r_1, ..., r_d), nu = (1, ..., d), and the line of thicknesses eta.

    Reflection traverses this line at twice the frequency: R(omega) = f_d(l_eta(2 omega)),
    so a single interface gives r_1 e^{2 i eta_1 omega}.
    """
    data = SchurData(
        medium.interfaces,
        (0,) + medium.reflection_parameters,
        tuple(range(1, medium.interfaces + 1)),
    )
    return data, TorusLine(medium.thicknesses)


def reflection_schur(medium, omega):
    data, line = medium_to_schur(medium)
    return eval_convergent(data, data.m, line.at(TRAVEL_FACTOR * np.asarray(omega, dtype=float)))


def _frequencies(omega):
    frequencies = np.asarray(omega, dtype=float)
    if np.any(frequencies == 0):
        raise ValidationError({'omega': 'Reflection is defined for omega != 0 only.'}, code='zero_frequency')
    return frequencies


def _propagate(u, flux, omega, thickness, impedance):
    # state (u, a u') across a homogeneous layer; negative thickness steps leftwards
    c, s = np.cos(omega * thickness), np.sin(omega * thickness)
    return c * u + s / (impedance * omega) * flux, -impedance * omega * s * u + c * flux


def reflection_ode(medium, omega):
    """
    R(omega) from layer transfer matrices: start from the outgoing wave
    e^{i omega x} at x = b and carry (u, a u') back to x = 0.
    """
    frequencies = _frequencies(omega)
    u = np.ones(frequencies.shape, dtype=complex)
    flux = 1j * frequencies * medium.a[-1]
    for thickness, impedance in reversed(medium.segments()):
        u, flux = _propagate(u, flux, frequencies, -thickness, impedance)
    travelling = flux / (medium.a[0] * 1j * frequencies)
    incident = (u + travelling) / 2
    reflected = (u - travelling) / 2
    scale = np.abs(u) + np.abs(travelling)
    ratio = float(np.min(np.abs(incident) / scale))
    if ratio < INCIDENT_GUARD:
        raise ConditioningError(f'Transfer system is singular: incident amplitude ratio {ratio:.3e}.')
    values = reflected / incident
    return complex(values) if frequencies.ndim == 0 else values


def sweep(medium, omega_max, n, source='schur'):
    """ReflectionSpectrum on omega_k = k omega_max / n, k = 1..n."""
    if omega_max <= 0 or n < 1:
        raise ValidationError('omega_max and n must be positive.', code='bad_sweep')
    omegas = omega_max * np.arange(1, n + 1) / n
    evaluate = reflection_ode if source == 'ode' else reflection_schur
    logger.debug('Sweeping %d frequencies up to %g (%s)', n, omega_max, source)
    return ReflectionSpectrum(omegas, evaluate(medium, omegas), source)


def trace_check(medium, schedule, step=None):
    """
    Rows (L, average, reference, abs_error): the mean of log(1 - |R|^2) over
    [-L, L] against sum_j log(1 - r_j^2).
    """
    data, line = medium_to_schur(medium)
    rows = line_szego(data, line.scaled(TRAVEL_FACTOR), schedule, step)
    return [(L, -average, -reference, error) for L, average, reference, error in rows]


def reversed_medium(medium):
    """The mirror image x -> b - x: impedances and thicknesses read back to front."""
    return LayeredMedium(
        medium.b,
        tuple(medium.b - y for y in reversed(medium.y)),
        tuple(reversed(medium.a)),
    )


def modulus_discrepancy(medium, omegas):
    """max | |R_ode| - |R_schur| | over the frequencies."""
    frequencies = _frequencies(omegas)
    return float(np.max(np.abs(np.abs(reflection_ode(medium, frequencies)) - np.abs(reflection_schur(medium, frequencies)))))


def phase_discrepancy(medium, omegas):
    """max |R_ode - R_schur| as complex numbers."""
    frequencies = _frequencies(omegas)
    return float(np.max(np.abs(reflection_ode(medium, frequencies) - reflection_schur(medium, frequencies))))
