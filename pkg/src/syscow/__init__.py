"""Stable 2-systole bounds from positive scalar curvature, made executable.

Submodules:

* :mod:`syscow.bivector` - canonical form, mass and comass of 2-vectors/2-forms
* :mod:`syscow.normed_lattice` - successive minima, dual lattices and norms, transference
* :mod:`syscow.nonzero_combination` - small integer combinations with no zero coordinate
* :mod:`syscow.charclass` - exact A-hat / Chern character arithmetic
* :mod:`syscow.flat_model` - stable 2-systoles of flat tori and sphere products
* :mod:`syscow.bounds` - the curvature -> cowaist -> systole chain
"""

__version__ = "0.1.0"

from .kernels import BACKEND  # noqa: E402

__all__ = ["BACKEND", "__version__"]
