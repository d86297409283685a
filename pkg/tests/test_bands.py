import pytest

from phonotale.distance import BandThresholds, QualityBand, band_of
from phonotale.errors import NegativeDistance


@pytest.mark.parametrize(
    ("distance", "band"),
    [
        (0.0, QualityBand.EXCELLENT),
        (2 / 24, QualityBand.EXCELLENT),      # 0.083
        (0.1, QualityBand.EXCELLENT),         # boundary stays in the better band
        (5 / 24, QualityBand.GOOD),           # 0.208
        (1.0, QualityBand.GOOD),
        (26 / 24, QualityBand.FAIR),          # 1.083
        (2.0, QualityBand.FAIR),
        (50 / 24, QualityBand.NEEDS_PRACTICE),  # 2.083
        (5.0, QualityBand.NEEDS_PRACTICE),
    ],
)
def test_band_mapping(distance, band):
    assert band_of(distance) is band


def test_band_monotone_in_distance():
    grid = [k / 24 for k in range(0, 130)]
    bands = [band_of(d) for d in grid]
    assert bands == sorted(bands)


def test_band_order_and_display():
    assert QualityBand.EXCELLENT < QualityBand.GOOD < QualityBand.FAIR < QualityBand.NEEDS_PRACTICE
    assert QualityBand.NEEDS_PRACTICE.display == "Need Practice"
    assert QualityBand.NEEDS_PRACTICE.value == "needs_practice"


def test_negative_distance_rejected():
    with pytest.raises(NegativeDistance):
        band_of(-0.01)


def test_custom_thresholds():
    loose = BandThresholds(excellent_max=0.5, good_max=1.5, fair_max=3.0)
    assert band_of(0.4, loose) is QualityBand.EXCELLENT
    assert band_of(2.5, loose) is QualityBand.FAIR


def test_thresholds_must_increase():
    with pytest.raises(ValueError):
        BandThresholds(excellent_max=1.0, good_max=1.0, fair_max=2.0)
    with pytest.raises(ValueError):
        BandThresholds(excellent_max=-0.1, good_max=1.0, fair_max=2.0)
