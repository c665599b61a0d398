"""Bistatic echo power, thermal noise, echo strength indicator and UE SNR.

The received echo strength indicator (RESI) is the ratio of received echo
power to expected noise power, in dB. With a fixed dwell per sensing
iteration the energy ratio reduces to a power ratio, so no dwell time
appears here. Measurements perturb the noise-free value with zero-mean
Gaussian noise in the dB domain, drawn from a caller-supplied stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

BOLTZMANN_J_PER_K = 1.380649e-23
REFERENCE_TEMP_K = 290.0
SPEED_OF_LIGHT_M_S = 2.998e8

# Sentinel for a zero echo: log of zero is floored here instead of -inf so
# traces stay finite and comparable.
RESI_FLOOR_DB = -300.0


@dataclass(frozen=True)
class LinkParams:
    """Radio parameters shared by all link computations.

    wall_loss_db is the scalar reflection loss applied to echoes that
    bounce off the wall; resi_noise_std_db is the dB-domain measurement
    noise on RESI.
    """

    tx_power_w: float
    bandwidth_hz: float
    noise_figure_db: float
    rcs_m2: float
    carrier_hz: float
    wall_loss_db: float = 3.0
    resi_noise_std_db: float = 1.0

    def __post_init__(self) -> None:
        if self.tx_power_w <= 0:
            raise ValueError("tx_power_w must be positive")
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth_hz must be positive")
        if self.noise_figure_db < 0:
            raise ValueError("noise_figure_db must be >= 0")
        if self.rcs_m2 <= 0:
            raise ValueError("rcs_m2 must be positive")
        if self.carrier_hz <= 0:
            raise ValueError("carrier_hz must be positive")
        if self.wall_loss_db < 0:
            raise ValueError("wall_loss_db must be >= 0")
        if self.resi_noise_std_db < 0:
            raise ValueError("resi_noise_std_db must be >= 0")

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT_M_S / self.carrier_hz


def noise_power(bandwidth_hz: float, noise_figure_db: float) -> float:
    """Thermal noise power k*T0*B*F in watts."""
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth must be positive")
    factor = 10.0 ** (noise_figure_db / 10.0)
    return BOLTZMANN_J_PER_K * REFERENCE_TEMP_K * bandwidth_hz * factor


def bistatic_echo_power(
    params: LinkParams,
    gain_tx: float,
    gain_rx: float,
    r_tx_m: float,
    r_rx_m: float,
) -> float:
    """Echo power from the bistatic radar equation.

    P_r = P_t G_t G_r lambda^2 sigma / ((4 pi)^3 r_tx^2 r_rx^2)
    """
    if r_tx_m <= 0 or r_rx_m <= 0:
        raise ValueError("ranges must be positive")
    if gain_tx < 0 or gain_rx < 0:
        raise ValueError("gains must be >= 0")
    lam = params.wavelength_m
    numerator = params.tx_power_w * gain_tx * gain_rx * lam * lam * params.rcs_m2
    denominator = (4.0 * math.pi) ** 3 * r_tx_m * r_tx_m * r_rx_m * r_rx_m
    return numerator / denominator


def resi(echo_power_w: float, noise_power_w: float) -> float:
    """Received-echo-strength indicator 10*log10(echo/noise) in dB.

    A zero echo maps to RESI_FLOOR_DB.
    """
    if noise_power_w <= 0:
        raise ValueError("noise power must be positive")
    if echo_power_w < 0:
        raise ValueError("echo power must be >= 0")
    if echo_power_w == 0:
        return RESI_FLOOR_DB
    return max(10.0 * math.log10(echo_power_w / noise_power_w), RESI_FLOOR_DB)


def perturbed_resi(resi_db: float, noise_std_db: float, rng: np.random.Generator) -> float:
    """Measured RESI: the noise-free value plus one Gaussian dB-domain draw.

    Always consumes exactly one draw from the stream so that per-step draw
    counts stay fixed across configurations.
    """
    return resi_db + noise_std_db * float(rng.standard_normal())


def ue_snr(params: LinkParams, gain_tx_toward_ue: float, distance_m: float) -> float:
    """Communication SNR in dB at an isotropic UE at the given distance.

    Free-space received power over k*T0*B*F noise; a zero gain maps to the
    same floor as RESI.
    """
    if distance_m <= 0:
        raise ValueError("distance must be positive")
    if gain_tx_toward_ue < 0:
        raise ValueError("gain must be >= 0")
    lam = params.wavelength_m
    rx_power = (
        params.tx_power_w * gain_tx_toward_ue * lam * lam
        / (4.0 * math.pi * distance_m) ** 2
    )
    noise = noise_power(params.bandwidth_hz, params.noise_figure_db)
    if rx_power == 0:
        return RESI_FLOOR_DB
    return max(10.0 * math.log10(rx_power / noise), RESI_FLOOR_DB)
