import numpy as np
import pytest

import sfdnoise as sf


@pytest.fixture(scope="session")
def square_plate():
    return sf.PlateGeometry(length_m=200e-6, width_m=200e-6, gap_m=2e-6)


@pytest.fixture(scope="session")
def air():
    return sf.GasProperties(pressure_pa=101325.0, viscosity_pa_s=1.85e-5,
                            temperature_k=300.0)


@pytest.fixture(scope="session")
def synth_table(square_plate, air):
    grid = np.geomspace(1e2, 1e7, 80)
    return sf.synth_spectrum(square_plate, air, grid)


@pytest.fixture(scope="session")
def synth_interp(synth_table):
    return sf.build_interpolant(synth_table)


@pytest.fixture(scope="session")
def resonator():
    # ~1 ug proof mass, resonance near 50 kHz mechanically
    return sf.ResonatorParams(mass_kg=1e-9, k_spring_n_per_m=100.0,
                              temperature_k=300.0)
