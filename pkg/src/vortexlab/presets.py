"""Named beam presets and species beam construction.

The six presets pair a weakly focused ("a") and strongly focused ("b")
configuration per species, all at a +-15 topological-charge
superposition:

    fig1a / fig1b  photon    lambda = 800 nm, w0 = 149 um / 6.2 um
    fig2a / fig2b  electron  (b, gamma) = (1500, 1+5e-5) / (142.1, 1.9)
    fig3a / fig3b  GW        Omega = 150 Hz, w0 = 63.1 / 7.41 wavelengths

Unit conversion from CLI-facing physical units happens here, in one
place.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .electron import ElectronBeam
from .gw import GravitationalWaveBeam
from .photon import PhotonBeam
from .potentials import (
    C_LIGHT,
    ElectronPacketParams,
    PhotonPotentialParams,
    SuperpositionSpec,
)

__all__ = [
    "PresetError",
    "PRESETS",
    "preset_names",
    "build_beam",
    "build_photon",
    "build_electron",
    "build_gw",
    "SPECIES_BUILDERS",
]

SPECIES = ("photon", "electron", "gw")


class PresetError(KeyError):
    """Unknown preset name; the message lists the valid ones."""


@dataclass(frozen=True)
class PresetDef:
    name: str
    species: str
    description: str
    params: dict


PRESETS: dict[str, PresetDef] = {
    "fig1a": PresetDef(
        "fig1a",
        "photon",
        "photon, ell = +-15, lambda = 800 nm, w0 = 149 um (weak focusing)",
        {"ell": 15, "w0_um": 149.0, "lambda_nm": 800.0},
    ),
    "fig1b": PresetDef(
        "fig1b",
        "photon",
        "photon, ell = +-15, lambda = 800 nm, w0 = 6.2 um (strong focusing)",
        {"ell": 15, "w0_um": 6.2, "lambda_nm": 800.0},
    ),
    "fig2a": PresetDef(
        "fig2a",
        "electron",
        "electron, ell = +-15, b = 1500, gamma = 1 + 5e-5 (nonrelativistic)",
        {"ell": 15, "b": 1500.0, "gamma": 1.0 + 5e-5},
    ),
    "fig2b": PresetDef(
        "fig2b",
        "electron",
        "electron, ell = +-15, b = 142.1, gamma = 1.9 (relativistic)",
        {"ell": 15, "b": 142.1, "gamma": 1.9},
    ),
    "fig3a": PresetDef(
        "fig3a",
        "gw",
        "gravitational wave, ell = +-15, Omega = 150 Hz, w0 = 63.1 lambda",
        {"ell": 15, "w0_lambda": 63.1, "omega_hz": 150.0},
    ),
    "fig3b": PresetDef(
        "fig3b",
        "gw",
        "gravitational wave, ell = +-15, Omega = 150 Hz, w0 = 7.41 lambda",
        {"ell": 15, "w0_lambda": 7.41, "omega_hz": 150.0},
    ),
}


def preset_names() -> tuple[str, ...]:
    return tuple(PRESETS)


def _superposition(ell: int, weighting: str) -> SuperpositionSpec | None:
    if weighting == "cos":
        return SuperpositionSpec.cosine(ell)
    if weighting == "sin":
        return SuperpositionSpec.sine(ell)
    if weighting == "single":
        return SuperpositionSpec.single(ell)
    raise ValueError(f"unknown weighting {weighting!r}; use cos, sin or single")


def build_photon(
    ell: int,
    w0_um: float | None = None,
    lambda_nm: float | None = None,
    w0_lambda: float | None = None,
    sigma: int = 1,
    weighting: str = "cos",
) -> PhotonBeam:
    """Photon beam from physical (um/nm) or wavelength-scaled waist."""
    if w0_lambda is not None:
        params = PhotonPotentialParams(ell=ell, w0=w0_lambda, wavelength=1.0, sigma=sigma)
    else:
        if w0_um is None or lambda_nm is None:
            raise ValueError("photon needs either w0_lambda or both w0_um and lambda_nm")
        params = PhotonPotentialParams(
            ell=ell, w0=w0_um * 1e-6, wavelength=lambda_nm * 1e-9, sigma=sigma
        )
    return PhotonBeam(params, _superposition(ell, weighting))


def build_electron(
    ell: int, b: float, gamma: float, weighting: str = "cos"
) -> ElectronBeam:
    params = ElectronPacketParams(ell=ell, b=b, gamma=gamma)
    return ElectronBeam(params, _superposition(ell, weighting))


def build_gw(
    ell: int,
    w0_lambda: float,
    omega_hz: float = 150.0,
    sigma: int = 1,
    weighting: str = "cos",
) -> GravitationalWaveBeam:
    """GW beam; the waist is given in wavelengths (lambda = c / Omega)."""
    wavelength_m = C_LIGHT / omega_hz
    params = PhotonPotentialParams(
        ell=ell, w0=w0_lambda * wavelength_m, wavelength=wavelength_m, sigma=sigma
    )
    return GravitationalWaveBeam(params, _superposition(ell, weighting))


SPECIES_BUILDERS: dict[str, Callable] = {
    "photon": build_photon,
    "electron": build_electron,
    "gw": build_gw,
}


@lru_cache(maxsize=32)
def build_beam(name: str, weighting: str = "cos"):
    """Construct (and cache) the beam for a named preset."""
    if name not in PRESETS:
        raise PresetError(
            f"unknown preset {name!r}; valid presets: {', '.join(preset_names())}"
        )
    preset = PRESETS[name]
    builder = SPECIES_BUILDERS[preset.species]
    beam = builder(**preset.params, weighting=weighting)
    return beam
