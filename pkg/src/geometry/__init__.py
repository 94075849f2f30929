# Geometry package initialization
from src.geometry.body import ChordSplit, ConvexBody
from src.geometry.direction import Direction
from src.geometry.scans import holder_estimate, min_chord_scan, two_chord_scan, worst_chord
from src.geometry.spec import BodySpec
from src.geometry.zoo import MAX_CIRCUMRADIUS, make_body

__all__ = [
    "BodySpec",
    "ChordSplit",
    "ConvexBody",
    "Direction",
    "MAX_CIRCUMRADIUS",
    "holder_estimate",
    "make_body",
    "min_chord_scan",
    "two_chord_scan",
    "worst_chord",
]
