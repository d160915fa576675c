"""Exact-arithmetic derived brackets for simultaneous deformation problems.

The package builds shifted homotopy-Lie structures out of quadruples
(graded Lie algebra, abelian part, projection, structure element) and uses
them to check and explore deformations of Lie algebras, Lie bialgebras,
associative algebras, homotopy algebras, and their morphisms and
subalgebras, all over exact rational scalars.
"""

from .engine import (BigLInfty, DerivedLInfty, ExplicitLInfty, GLie, LPlusA,
                     MachineCheck, Report, TruncationError, TwistLog, VData,
                     check_filtration, thm_machine_check, validate_vdata)
from .graded import GradedSpace, koszul_sign, unshuffles
from .multilinear import (MultilinearMap, decalage_from_shifted,
                          decalage_to_shifted)
from .newton import MCSystem, NewtonResult, solve_mc_newton
from .scalars import Eps, rationalize, scalar_from_string, scalar_to_string

__all__ = [
    "BigLInfty", "DerivedLInfty", "Eps", "ExplicitLInfty", "GLie",
    "GradedSpace", "LPlusA", "MCSystem", "MachineCheck", "MultilinearMap",
    "NewtonResult", "Report", "TruncationError", "TwistLog", "VData",
    "check_filtration", "decalage_from_shifted", "decalage_to_shifted",
    "koszul_sign", "rationalize", "scalar_from_string", "scalar_to_string",
    "solve_mc_newton", "thm_machine_check", "unshuffles", "validate_vdata",
]

__version__ = "0.1.0"
