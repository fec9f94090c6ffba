"""Rank-metric codes of linearized polynomials over finite-field towers.

Library layout:

  fields   -- exact tower arithmetic F_p < F_q < F_{q^n}
  linpoly  -- q-polynomials: evaluation, composition, adjoint, rank
  codes    -- support/general codes, duals, adjoints, idealisers, distance
  moore    -- Moore matrices, determinants, independence and MRD criteria
  verify   -- scan/trinomial/witness engines, classification, certificates
  curves   -- plane-curve point counts tied to the {0,1,3} support
  cli      -- the `mrdcodes` command
"""

from .fields import CapExceeded, FieldTower, make_tower
from .linpoly import LinPoly
from .codes import (GeneralCode, IdealiserReport, SupportCode, gabidulin,
                    named_family)
from .verify import (Certificate, classify, exhaustive_scan, gcd_filter,
                     hasse_weil_gap, n9_witness, shift_canonical,
                     shift_equivalent, trinomial_criterion,
                     validate_certificate)

__version__ = "0.1.0"

__all__ = [
    "CapExceeded", "Certificate", "FieldTower", "GeneralCode",
    "IdealiserReport", "LinPoly", "SupportCode", "classify",
    "exhaustive_scan", "gabidulin", "gcd_filter", "hasse_weil_gap",
    "make_tower", "n9_witness", "named_family", "shift_canonical",
    "shift_equivalent", "trinomial_criterion", "validate_certificate",
]
