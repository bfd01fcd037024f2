import pytest

from diracwave.spectrum import ModeSpec, WavepacketSpec


@pytest.fixture(scope="session")
def reference_spec() -> WavepacketSpec:
    """The demo parameter set: m=1, v_a=2, P_bar=2, w=0.1, delta_zeta=1400, k=8."""
    return WavepacketSpec(m=1.0, v_a=2.0, P_bar=2.0, w=0.1, delta_zeta=1400.0,
                          envelope_exponent=8, modes=(ModeSpec(0, 0),))


@pytest.fixture(scope="session")
def compact_spec() -> WavepacketSpec:
    """A shorter packet for fast propagation and grid tests."""
    return WavepacketSpec(m=1.0, v_a=2.0, P_bar=2.0, w=0.1, delta_zeta=200.0,
                          envelope_exponent=8, modes=(ModeSpec(0, 0),))
