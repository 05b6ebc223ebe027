"""Computational toolkit for multibrot sets M_d = {c : 0 has bounded orbit under z^d + c}.

Submodules: angles, rotation_sets, boettcher, rays, pcf, arithmetic, curves,
render, figures (matplotlib), acceptance and cli.
"""

__version__ = "0.1.0"

__all__ = ["Angle", "parse_angle", "MultibrotError", "__version__"]

from .angles import Angle, parse_angle  # noqa: E402,F401
from .errors import MultibrotError  # noqa: E402,F401
