import pytest

from radiomap import CorrelationModel, Point, build_square_scenario


@pytest.fixture
def table_model():
    """Exponential kernel at the reference square's scale (spacing ratio 1)."""
    return CorrelationModel("exponential", sigma=5.0, xc=640.0)


@pytest.fixture
def table_scenario(table_model):
    """Reference square: side 640 m, emitter at (-100, 0), urban-macro constants."""
    return build_square_scenario(640.0, Point(-100.0, 0.0), 15.3, 3.76, table_model)
