# -*- coding: utf-8 -*-
"""
@description: P1 finite element matrices, load vectors and L2 errors
"""
from ocpfem.assembly.dofmap import DofMap, EmptySystemError, build_dofmap
from ocpfem.assembly.integration import (assemble_load, element_l2_error_sq, element_l2_errors_sq,
                                         global_l2_error, regularization_energy, target_moments)
from ocpfem.assembly.matrices import (assemble_mass, assemble_stiffness, assemble_weighted_stiffness, diag_mass,
                                      lump_mass)
from ocpfem.assembly.quadrature import QuadratureSpec
from ocpfem.assembly.regularization import (CONSTANT, SCALED_LOCAL, VARIABLE_LOCAL, RegularizationField,
                                            build_regularization_field)
from ocpfem.assembly.targets import BoxIndicator, Smooth, TargetFunction, linear_target, sine_product, zero_target
