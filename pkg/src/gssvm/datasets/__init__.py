"""Data files shipped with the package."""

from importlib.resources import files

from ..data import Dataset, parse_svmlight


def load_toy() -> Dataset:
    """The 180-point two-Gaussian set drawn with the default toy config, seed 0."""
    return parse_svmlight(files(__name__).joinpath("toy.txt").read_bytes(), name="toy")
