"""Idealized liquid-state NMR spin dynamics in the deviation-matrix picture.

Conventions, fixed once here:

* Rotating frame.  ``larmor[i]`` are resonance offsets in Hz, not absolute
  frequencies.  The free-evolution generator is

      H = (1/2) sum_i 2*pi*nu_i Z_i  +  (pi/2) sum_{i>j} J_ij Z_i Z_j

  in rad/s; it is diagonal in the computational basis.
* Rotations are ideal and instantaneous: conjugation by
  ``exp(-i angle sigma_axis / 2)`` on each listed spin.  A pi/2 rotation
  about +y takes a Z deviation to X.
* Coupling gates are pure ZZ evolution, ``exp(-i angle/2 Z_i Z_j)`` with the
  chemical-shift terms suppressed for the duration, standing in for the
  refocused coupling.  ``angle = pi/2`` is the controlled-phase-equivalent
  gate and corresponds to free evolution for time 1/(2 J_ij).
* Field-gradient crushers are ideal: they zero every matrix element that is
  off-diagonal in the computational basis of the crushed spins, which acts as
  a projective measurement without record.  The two-gradient-with-refocusing
  trick that protects the other spins is modeled as crushing only the listed
  subset.
* Detection of spin ``k`` is ``signal(t) = tr(rho(t) (X_k + i Y_k))``.  With
  the Hamiltonian above, a spin-k coherence against neighbors in |0> shows up
  at ``nu_k + sum_j J_kj / 2``.

States are deviation matrices: traceless Pauli terms plus projector factors,
written as symbol strings over {I, X, Y, Z, 0, 1} where 0 and 1 expand to
(1+Z)/2 and (1-Z)/2.  Unitaries act on the deviation exactly as on a density
matrix; positivity and unit trace are not required.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
import scipy.linalg

from .linalg import ATOL, ID2, PAULI, is_hermitian, kron

_SYMBOL_FACTORS = {
    "I": ID2,
    "X": PAULI["X"],
    "Y": PAULI["Y"],
    "Z": PAULI["Z"],
    "0": (ID2 + PAULI["Z"]) / 2,
    "1": (ID2 - PAULI["Z"]) / 2,
}

AXES = ("x", "y", "z")


@dataclass(frozen=True)
class SpinSystem:
    """Rotating-frame offsets (Hz) and the symmetric J-coupling matrix (Hz)."""

    larmor: tuple[float, ...]
    j: np.ndarray

    def __post_init__(self):
        larmor = tuple(float(v) for v in self.larmor)
        if len(larmor) < 1:
            raise ValueError("a spin system needs at least one spin")
        j = np.asarray(self.j, dtype=float)
        n = len(larmor)
        if j.shape != (n, n):
            raise ValueError(f"J matrix must be {n} x {n}")
        if np.max(np.abs(j - j.T)) > 0:
            raise ValueError("J matrix must be symmetric")
        if np.max(np.abs(np.diag(j))) > 0:
            raise ValueError("J matrix must have a zero diagonal")
        object.__setattr__(self, "larmor", larmor)
        object.__setattr__(self, "j", j)

    @property
    def n(self) -> int:
        return len(self.larmor)

    @classmethod
    def from_couplings(cls, larmor, couplings: dict) -> "SpinSystem":
        """Build from offsets and a {(i, j): J_ij} dict (0-based, either order)."""
        n = len(larmor)
        j = np.zeros((n, n))
        for (a, b), val in couplings.items():
            if a == b:
                raise ValueError("self-coupling is not allowed")
            j[a, b] = j[b, a] = float(val)
        return cls(tuple(larmor), j)


@dataclass(frozen=True)
class Rotation:
    """Ideal rotation of ``angle`` radians about ``axis`` on the listed spins.

    ``axis`` is one of x, y, z, optionally prefixed with a minus sign, which
    flips the sense of rotation.
    """

    spins: tuple[int, ...]
    axis: str
    angle: float


@dataclass(frozen=True)
class JCoupling:
    """Pure ZZ evolution of the given phase angle (rad) on a spin pair."""

    pair: tuple[int, int]
    angle: float


@dataclass(frozen=True)
class Delay:
    """Free evolution under the system Hamiltonian for ``duration`` seconds."""

    duration: float


@dataclass(frozen=True)
class Gradient:
    """Ideal crusher on the listed spin subset."""

    spins: tuple[int, ...]


PulseEvent = Rotation | JCoupling | Delay | Gradient


def build_hamiltonian(s: SpinSystem) -> np.ndarray:
    """Free-evolution generator in rad/s; diagonal in the computational basis."""
    n = s.n
    dim = 2**n
    idx = np.arange(dim)
    zs = [1.0 - 2.0 * ((idx >> (n - 1 - i)) & 1) for i in range(n)]
    diag = np.zeros(dim)
    for i in range(n):
        diag += np.pi * s.larmor[i] * zs[i]
    for i in range(n):
        for jx in range(i):
            diag += (np.pi / 2) * s.j[i, jx] * zs[i] * zs[jx]
    return np.diag(diag).astype(complex)


def evolve(rho: np.ndarray, h: np.ndarray, t: float) -> np.ndarray:
    """Conjugation by exp(-i h t); preserves trace and eigenvalues."""
    rho = np.asarray(rho)
    h = np.asarray(h)
    if not is_hermitian(h, ATOL):
        raise ValueError("generator must be Hermitian")
    u = scipy.linalg.expm(-1j * h * t)
    return u @ rho @ u.conj().T


def _embed(op: np.ndarray, spin: int, n: int) -> np.ndarray:
    mats = [ID2] * n
    mats[spin] = op
    out = mats[0]
    for m in mats[1:]:
        out = kron(out, m)
    return out


def _rotation_gate(axis: str, angle: float) -> np.ndarray:
    sign = 1.0
    ax = axis.lower()
    if ax.startswith(("-", "+")):
        sign = -1.0 if ax[0] == "-" else 1.0
        ax = ax[1:]
    if ax not in AXES:
        raise ValueError(f"axis must be one of {AXES} (optionally signed), got {axis!r}")
    theta = sign * angle
    return np.cos(theta / 2) * ID2 - 1j * np.sin(theta / 2) * PAULI[ax.upper()]


def apply_rotation(rho: np.ndarray, spins, axis: str, angle: float) -> np.ndarray:
    """Rotate the listed spins by ``angle`` about ``axis`` (same pulse on each)."""
    rho = np.asarray(rho)
    n = int(np.log2(rho.shape[0]))
    gate = _rotation_gate(axis, angle)
    u = np.eye(rho.shape[0], dtype=complex)
    for spin in spins:
        if not 0 <= spin < n:
            raise ValueError(f"spin index {spin} out of range")
        u = _embed(gate, spin, n) @ u
    return u @ rho @ u.conj().T


def apply_jcoupling(rho: np.ndarray, pair, angle: float) -> np.ndarray:
    """Pure ZZ phase evolution exp(-i angle/2 Z_i Z_j) on a spin pair."""
    rho = np.asarray(rho)
    n = int(np.log2(rho.shape[0]))
    i, jx = pair
    if i == jx:
        raise ValueError("coupling needs two distinct spins")
    for spin in (i, jx):
        if not 0 <= spin < n:
            raise ValueError(f"spin index {spin} out of range")
    idx = np.arange(rho.shape[0])
    zi = 1.0 - 2.0 * ((idx >> (n - 1 - i)) & 1)
    zj = 1.0 - 2.0 * ((idx >> (n - 1 - jx)) & 1)
    phase = np.exp(-1j * (angle / 2) * zi * zj)
    return rho * np.outer(phase, phase.conj())


def gradient_crush(rho: np.ndarray, spins) -> np.ndarray:
    """Zero every element off-diagonal in the listed spins' computational basis.

    A full crusher acts as a projective measurement without record; the
    operation is idempotent and trace-preserving.
    """
    rho = np.asarray(rho)
    n = int(np.log2(rho.shape[0]))
    spins = tuple(spins)
    if not spins:
        raise ValueError("gradient needs a nonempty spin subset")
    idx = np.arange(rho.shape[0])
    mask = np.ones((rho.shape[0], rho.shape[0]), dtype=bool)
    for spin in spins:
        if not 0 <= spin < n:
            raise ValueError(f"spin index {spin} out of range")
        bits = (idx >> (n - 1 - spin)) & 1
        mask &= bits[:, None] == bits[None, :]
    return rho * mask


def validate_label(label: str, n: int | None = None) -> str:
    label = label.strip().upper()
    if n is not None and len(label) != n:
        raise ValueError(f"label {label!r} must have length {n}")
    for ch in label:
        if ch not in _SYMBOL_FACTORS:
            raise ValueError(f"invalid symbol {ch!r}; allowed: I X Y Z 0 1")
    return label


def pseudopure_init(label: str) -> np.ndarray:
    """Deviation matrix of a symbol string, e.g. X00X -> X (1+Z)/2 (1+Z)/2 X."""
    label = validate_label(label)
    if not label:
        raise ValueError("empty label")
    out = _SYMBOL_FACTORS[label[0]]
    for ch in label[1:]:
        out = kron(out, _SYMBOL_FACTORS[ch])
    return out


def pauli_decompose(rho: np.ndarray, tol: float = 1e-10) -> list[tuple[str, float]]:
    """Expansion over the n-spin Pauli product basis.

    Returns ``(label, coefficient)`` pairs with ``coefficient =
    tr(rho P) / 2**n``, omitting terms at or below ``tol``; Hermitian input
    gives real coefficients.  Cost grows as 4**n, fine for the small systems
    used here.
    """
    rho = np.asarray(rho)
    n = int(np.log2(rho.shape[0]))
    if 2**n != rho.shape[0]:
        raise ValueError("matrix side must be a power of two")
    terms = []
    for labels in product("IXYZ", repeat=n):
        p = PAULI[labels[0]]
        for ch in labels[1:]:
            p = kron(p, PAULI[ch])
        c = np.trace(rho @ p).real / 2**n
        if abs(c) > tol:
            terms.append(("".join(labels), float(c)))
    return terms


def run_sequence(s: SpinSystem, init: str, seq) -> np.ndarray:
    """Fold a pulse sequence over the initial deviation state.

    Rotations and couplings are ideal; free evolution happens only at
    explicit Delay events.  Coupling gates require a nonzero J on the pair,
    since their duration 1/(2 J) would otherwise diverge.
    """
    rho = pseudopure_init(validate_label(init, s.n))
    h = None
    for ev in seq:
        if isinstance(ev, Rotation):
            rho = apply_rotation(rho, ev.spins, ev.axis, ev.angle)
        elif isinstance(ev, JCoupling):
            i, jx = ev.pair
            if s.j[i, jx] == 0.0:
                raise ValueError(f"spins {i} and {jx} have no J coupling")
            rho = apply_jcoupling(rho, ev.pair, ev.angle)
        elif isinstance(ev, Delay):
            if h is None:
                h = build_hamiltonian(s)
            rho = evolve(rho, h, ev.duration)
        elif isinstance(ev, Gradient):
            rho = gradient_crush(rho, ev.spins)
        else:
            raise ValueError(f"unknown pulse event {ev!r}")
    return rho


def acausality_sequence(flip: bool) -> list[PulseEvent]:
    """The four-spin sequence whose first spin ends up orthogonally different
    depending on a rotation applied later and elsewhere.

    Spins are 0-based: C1, C2, C3, C4 = 0, 1, 2, 3.  Starting from the X00X
    deviation state the blocks are: (a) entangle C2 and C3; (b) couple C1 to
    C2; (c) optionally rotate C4, the conditional choice; (d) map the C3/C4
    pair back to the computational basis and crush it, the simulated
    entangled-basis measurement.  The final state is the single term XXIZ
    without the flip and YIZI with it, at a quarter of the initial coherence
    amplitude.  The rotation phases of block (d) are a reconstruction; their
    signs are chosen so both final amplitudes come out positive.
    """
    half = np.pi / 2
    seq: list[PulseEvent] = [
        Rotation((1,), "y", half),
        Rotation((2,), "y", half),
        JCoupling((1, 2), half),
        JCoupling((0, 1), half),
    ]
    if flip:
        seq.append(Rotation((3,), "y", -half))
    seq += [
        Rotation((2,), "y", -half),
        JCoupling((2, 3), half),
        Rotation((2,), "y", half),
        Rotation((3,), "x", half),
        Gradient((2, 3)),
    ]
    return seq


def coherence_amplitude(rho: np.ndarray, spin: int, tol: float = 1e-12) -> float:
    """Total magnitude of deviation terms transverse on the given spin.

    Sums |coefficient| over Pauli terms carrying X or Y at ``spin``: the
    part of the state that suitable readout rotations can turn into signal
    on that spin.
    """
    total = 0.0
    for label, c in pauli_decompose(rho, tol=tol):
        if label[spin] in ("X", "Y"):
            total += abs(c)
    return total


def fid(
    s: SpinSystem, rho0: np.ndarray, detect: int, duration: float, points: int
) -> np.ndarray:
    """Complex detection signal of one spin under free evolution.

    Samples ``tr(rho(t) (X_d + i Y_d))`` at ``points`` uniform times starting
    at 0 with spacing ``duration / points``.
    """
    if duration <= 0:
        raise ValueError("duration must be positive")
    if points < 2:
        raise ValueError("need at least two points")
    rho0 = np.asarray(rho0)
    n = s.n
    if rho0.shape != (2**n, 2**n):
        raise ValueError("state size does not match the spin system")
    if not 0 <= detect < n:
        raise ValueError(f"detect spin {detect} out of range")
    energies = np.diag(build_hamiltonian(s)).real
    op = _embed(PAULI["X"] + 1j * PAULI["Y"], detect, n)
    weights = rho0 * op.T
    rows, cols = np.nonzero(np.abs(weights) > 1e-300)
    w = weights[rows, cols]
    freq = energies[rows] - energies[cols]
    times = np.arange(points) * (duration / points)
    return np.exp(-1j * np.outer(times, freq)) @ w


@dataclass(frozen=True)
class Spectrum:
    """A discrete complex spectrum on a uniform frequency grid (Hz)."""

    frequencies: np.ndarray
    intensities: np.ndarray
    dwell: float
    points: int
    line_broadening: float

    def __post_init__(self):
        if len(self.frequencies) != len(self.intensities):
            raise ValueError("frequency and intensity grids differ in length")


def spectrum(signal: np.ndarray, dwell: float, line_broadening: float = 0.0) -> Spectrum:
    """Fourier transform of the exponentially apodized detection signal.

    ``line_broadening`` is the Lorentzian full width at half maximum in Hz
    added by the apodization; the frequency axis is centered around zero
    following the dwell-time convention.
    """
    signal = np.asarray(signal)
    n = signal.shape[0]
    times = np.arange(n) * dwell
    apodized = signal * np.exp(-np.pi * line_broadening * times)
    intensities = np.fft.fftshift(np.fft.fft(apodized))
    freqs = np.fft.fftshift(np.fft.fftfreq(n, d=dwell))
    return Spectrum(
        frequencies=freqs,
        intensities=intensities,
        dwell=float(dwell),
        points=n,
        line_broadening=float(line_broadening),
    )


def spectral_overlap(a: Spectrum, b: Spectrum) -> float:
    """Normalized inner product of two intensity profiles, in [0, 1]."""
    if a.points != b.points or np.max(np.abs(a.frequencies - b.frequencies)) > 0:
        raise ValueError("spectra are not on the same frequency grid")
    na = np.linalg.norm(a.intensities)
    nb = np.linalg.norm(b.intensities)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.abs(np.vdot(a.intensities, b.intensities)) / (na * nb))


def phased_real(spec: Spectrum) -> np.ndarray:
    """Real intensity profile after the zero-order phase that maximizes the
    tallest peak."""
    k = int(np.argmax(np.abs(spec.intensities)))
    ph = np.exp(-1j * np.angle(spec.intensities[k]))
    return (spec.intensities * ph).real
