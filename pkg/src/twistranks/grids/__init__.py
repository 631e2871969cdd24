"""Grid combinatorics over truncations of Z_ell[xi]."""

from .grid import (Grid, RElement, basis_bound, basis_construct, closure,
                   closure_by_kernel, delta_element, find_basis, integer_kernel,
                   is_closed, zs_basis, zs_full_generators)
from .modules import (EtaTerm, ModuleElement, eta_decompose, eta_element, eta_sum,
                      full_ideal, in_torsion, nib_extend, nib_membership,
                      random_member, restrict, zs_ib_basis)
from .ramsey import (ConstructionError, IncompatibleError, NotClosedError,
                     RamseyCheck, RamseyResult, bye_ramsey_check,
                     bye_ramsey_construct, random_battery, ramsey_bound)
from .ring import RingSpec
from .textfmt import example_grid, format_grid, format_points, parse_grid, parse_points

__all__ = [
    "Grid", "RElement", "basis_bound", "basis_construct", "closure",
    "closure_by_kernel", "delta_element", "find_basis", "integer_kernel",
    "is_closed", "zs_basis", "zs_full_generators",
    "EtaTerm", "ModuleElement", "eta_decompose", "eta_element", "eta_sum",
    "full_ideal", "in_torsion", "nib_extend", "nib_membership",
    "random_member", "restrict", "zs_ib_basis",
    "ConstructionError", "IncompatibleError", "NotClosedError", "RamseyCheck",
    "RamseyResult", "bye_ramsey_check", "bye_ramsey_construct",
    "random_battery", "ramsey_bound",
    "RingSpec",
    "example_grid", "format_grid", "format_points", "parse_grid", "parse_points",
]
