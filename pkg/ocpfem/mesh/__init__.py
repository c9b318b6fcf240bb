# -*- coding: utf-8 -*-
"""
@description: simplicial meshes of the unit cube and their adaptive refinement
"""
from ocpfem.mesh.builders import (build_initial_mesh, build_interval_mesh, build_reference_simplex,
                                  build_unit_cube_mesh, build_unit_square_mesh)
from ocpfem.mesh.refinement import refine, uniform_refine
from ocpfem.mesh.simplicial_mesh import (ElementGeometry, SimplicialMesh, element_geometry, is_conforming,
                                         min_angle, shape_quality)
