from .ffield import Fq, FqElem
from .polyring import (PolyA, RatK, RatField, PrimePoly, parse_poly,
                       parse_ratk, poly_gcd, monic_polys, monic_irreducibles,
                       count_irreducibles, reduce_at_theta)
from .tseries import TSeries
from .carlitz import (AdditivePoly, carlitz_phi, torsion_exponential,
                      t_sub_a, GossTable, goss_table, goss_mod_T_closed_form)
from .modforms import (ModForm, ModTForm, BasisMonomial, eisenstein_g, cusp_h,
                       false_eisenstein, monomial_basis, monomial_form,
                       decompose_in_basis, serre_derivative, reduce_mod_theta,
                       mu)
from .exactla import (MatrixK, UniPoly, minimal_polynomial, formal_derivative,
                      is_separable, is_nilpotent)
from .hecke import (HeckeMatrix, ModTHeckeMatrix, required_input_precision,
                    hecke_on_series, hecke_matrix, hecke_matrix_mod_T,
                    hecke_mod_T_on_power, eigenform_check, hecke_product_mod_T,
                    commutation_check, hecke_composite, StructureError)
