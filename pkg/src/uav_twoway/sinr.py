"""Worst-case SINR/SNR bounds as functions of spin and altitudes.

All bounds put the served user at the main-lobe edge (slant distance
h/cos(phi_b)) and every interferer at its closest admissible position:
the interfering UAV directly above the receiver (distance = its altitude),
the interfering ground user at the minimal grid separation d_min. The
deterministic mean-dB shadowing factor is used throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

from . import channel
from .params import DerivedConstants, SystemParams


@dataclass(frozen=True)
class Configuration:
    """Joint decision variable: relative spin and the two UAV altitudes.

    ``r`` is the XOR of the per-link spins: 0 when both two-way links use
    the same transmission direction in each slot, 1 when opposite. The
    per-link spins p1/p2 are optional; when absent, link 1 defaults to
    downlink-first and link 2 follows from ``r``.
    """

    r: int
    h1: float
    h2: float
    p1: int | None = None
    p2: int | None = None

    def __post_init__(self):
        if self.r not in (0, 1):
            raise ValueError(f"relative spin must be 0 or 1, got {self.r!r}")
        if (self.p1 is None) != (self.p2 is None):
            raise ValueError("per-link spins must be given together or not at all")
        if self.p1 is not None and (self.p1 ^ self.p2) != self.r:
            raise ValueError(
                f"per-link spins ({self.p1}, {self.p2}) inconsistent with relative spin {self.r}")

    def spins(self) -> tuple[int, int]:
        if self.p1 is not None:
            return self.p1, self.p2
        return 0, self.r


def altitude_indicator(h: float, derived: DerivedConstants) -> int:
    """1 if ``h`` is the high altitude, 0 if the low one."""
    if math.isclose(h, derived.h_low, rel_tol=1e-9, abs_tol=1e-9):
        return 0
    if math.isclose(h, derived.h_high, rel_tol=1e-9, abs_tol=1e-9):
        return 1
    raise ValueError(
        f"altitude {h!r} m is neither h_low={derived.h_low!r} nor h_high={derived.h_high!r}")


def altitude_label(h: float, derived: DerivedConstants) -> str:
    return "H_h" if altitude_indicator(h, derived) else "H_l"


def config_label(cfg: Configuration, derived: DerivedConstants) -> str:
    low_high = ("Hl", "Hh")
    return (f"r{cfg.r}_{low_high[altitude_indicator(cfg.h1, derived)]}"
            f"_{low_high[altitude_indicator(cfg.h2, derived)]}")


def candidate_configurations(derived: DerivedConstants) -> dict[str, Configuration]:
    """The three configurations that can attain the maximal throughput."""
    candidates = (
        Configuration(1, derived.h_low, derived.h_high),
        Configuration(1, derived.h_high, derived.h_low),
        Configuration(0, derived.h_low, derived.h_low),
    )
    return {config_label(cfg, derived): cfg for cfg in candidates}


def all_configurations(derived: DerivedConstants) -> dict[str, Configuration]:
    """All 8 (r, h1, h2) tuples, for exhaustive verification sweeps."""
    levels = (derived.h_low, derived.h_high)
    configs = {}
    for r, h1, h2 in product((0, 1), levels, levels):
        cfg = Configuration(r, h1, h2)
        configs[config_label(cfg, derived)] = cfg
    return configs


def _serving_and_other(cfg: Configuration, link: int) -> tuple[float, float]:
    if link == 1:
        return cfg.h1, cfg.h2
    if link == 2:
        return cfg.h2, cfg.h1
    raise ValueError(f"link must be 1 or 2, got {link!r}")


def sinr_dl_diff(cfg: Configuration, params: SystemParams, derived: DerivedConstants,
                 link: int = 1) -> float:
    """Downlink SINR bound when the co-channel users sit in different cells.

    With r=1 the interference is ground-to-ground at d_min; with r=0 the
    other UAV interferes only if it is high enough for its lobe to cover
    the receiver's cell.
    """
    h_serve, h_other = _serving_and_other(cfg, link)
    signal = channel.rx_power_uav_to_ground(h_serve / math.cos(params.phi_b), params, derived)
    t_other = altitude_indicator(h_other, derived)
    denom = (cfg.r * channel.rx_power_ground_to_ground(derived.d_min, params, derived)
             + t_other * (1 - cfg.r) * channel.rx_power_uav_to_ground(h_other, params, derived)
             + params.noise_power)
    return signal / denom


def sinr_ul_diff(cfg: Configuration, params: SystemParams, derived: DerivedConstants,
                 link: int = 1) -> float:
    """Uplink SINR bound, different-cell scenario.

    The other cell's simultaneous uplink (r=0) is heard only when the
    receiving UAV is high; a low UAV's receive cone excludes the other cell.
    """
    h_serve, _ = _serving_and_other(cfg, link)
    signal = channel.rx_power_ground_to_uav(h_serve / math.cos(params.phi_b), params, derived)
    t_serve = altitude_indicator(h_serve, derived)
    denom = (t_serve * (1 - cfg.r) * channel.rx_power_ground_to_uav(h_serve, params, derived)
             + params.noise_power)
    return signal / denom


def sinr_dl_same(cfg: Configuration, params: SystemParams, derived: DerivedConstants,
                 link: int = 1) -> float:
    """Downlink SINR bound when both co-channel users share one cell.

    The partner UAV serves the same cell, so with r=0 its downlink always
    interferes regardless of the altitude indicator.
    """
    h_serve, h_other = _serving_and_other(cfg, link)
    signal = channel.rx_power_uav_to_ground(h_serve / math.cos(params.phi_b), params, derived)
    denom = (cfg.r * channel.rx_power_ground_to_ground(derived.d_min, params, derived)
             + (1 - cfg.r) * channel.rx_power_uav_to_ground(h_other, params, derived)
             + params.noise_power)
    return signal / denom


def sinr_ul_same(cfg: Configuration, params: SystemParams, derived: DerivedConstants,
                 link: int = 1) -> float:
    """Uplink SINR bound, same-cell scenario: the co-channel user is always
    inside the receiving UAV's cone, so only r=1 silences it."""
    h_serve, _ = _serving_and_other(cfg, link)
    signal = channel.rx_power_ground_to_uav(h_serve / math.cos(params.phi_b), params, derived)
    denom = ((1 - cfg.r) * channel.rx_power_ground_to_uav(h_serve, params, derived)
             + params.noise_power)
    return signal / denom


def snr_individual(h: float, params: SystemParams, derived: DerivedConstants) -> tuple[float, float]:
    """(downlink, uplink) SNR of an individually served user at altitude h [m]."""
    d = h / math.cos(params.phi_b)
    snr_dl = channel.rx_power_uav_to_ground(d, params, derived) / params.noise_power
    snr_ul = channel.rx_power_ground_to_uav(d, params, derived) / params.noise_power
    return snr_dl, snr_ul
