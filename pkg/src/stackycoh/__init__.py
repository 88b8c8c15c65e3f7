"""Cohomology of the multiplicative group on tame stacky curves."""

from .descriptor import CurveDescriptor, DescriptorError, validate_descriptor
from .gcoh import bar_cohomology, cyclic_cohomology, group_cohomology, transfer_map
from .groups import FiniteGroup
from .stackcurve import CohomologyValue, PicardValue, cohomology
from .zlin import AbelianGroup, smith_normal_form

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup",
    "CohomologyValue",
    "CurveDescriptor",
    "DescriptorError",
    "FiniteGroup",
    "PicardValue",
    "bar_cohomology",
    "cohomology",
    "cyclic_cohomology",
    "group_cohomology",
    "smith_normal_form",
    "transfer_map",
    "validate_descriptor",
]
