# -*- coding: utf-8 -*-
"""
@description: file output of meshes, solution vectors, matrices and tables
"""
import os

import meshio
import numpy as np
import pandas as pd
import scipy.io
import scipy.sparse as sp

from ocpfem.mesh.simplicial_mesh import SimplicialMesh

CELL_TYPES = {1: 'line', 2: 'triangle', 3: 'tetra'}


def ensure_dir(path):
    """Creates the parent directory of a file path."""
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    return path


def write_vtk(path, mesh: SimplicialMesh, point_data=None, cell_data=None):
    """
    Legacy ASCII VTK unstructured grid.

    point_data: name -> vertex values; cell_data: name -> element values.
    """
    points = np.zeros((mesh.num_vertices, 3))
    points[:, :mesh.dim] = mesh.vertices
    point_data = {k: np.asarray(v, dtype=float) for k, v in (point_data or {}).items()}
    cell_data = {k: [np.asarray(v, dtype=float)] for k, v in (cell_data or {}).items()}
    for name, values in point_data.items():
        if values.shape[0] != mesh.num_vertices:
            raise ValueError("point data {} has {} values for {} vertices".format(
                name, values.shape[0], mesh.num_vertices))
    for name, (values,) in cell_data.items():
        if values.shape[0] != mesh.num_elements:
            raise ValueError("cell data {} has {} values for {} elements".format(
                name, values.shape[0], mesh.num_elements))
    grid = meshio.Mesh(points, [(CELL_TYPES[mesh.dim], np.asarray(mesh.elements))], point_data=point_data,
                       cell_data=cell_data)
    meshio.write(ensure_dir(path), grid, file_format="vtk", binary=False)
    return path


def read_vtk_points(path):
    """(points, cells, point_data) of a VTK file written by write_vtk."""
    grid = meshio.read(path)
    return grid.points, grid.cells[0].data, dict(grid.point_data)


def save_level(path, mesh: SimplicialMesh, **vectors):
    """Mesh arrays and named vectors of one level in a compressed npz."""
    np.savez_compressed(ensure_dir(path), vertices=mesh.vertices, elements=mesh.elements, tags=mesh.tags,
                        generation=mesh.generation, revision=np.array(mesh.revision),
                        **{k: np.asarray(v) for k, v in vectors.items() if v is not None})
    return path


def load_level(path):
    """(mesh, vectors) saved by save_level."""
    with np.load(path) as data:
        arrays = {k: data[k] for k in data.files}
    mesh = SimplicialMesh(arrays.pop('vertices'), arrays.pop('elements'), arrays.pop('tags'),
                          arrays.pop('generation'), {'source': os.path.basename(path)})
    revision = str(arrays.pop('revision'))
    if revision != mesh.revision:
        raise ValueError("level file {} is corrupt: revision {} vs {}".format(path, revision, mesh.revision))
    return mesh, arrays


def write_matrix_market(path, matrix, comment=''):
    scipy.io.mmwrite(ensure_dir(path), sp.coo_matrix(matrix), comment=comment)
    return path


def read_matrix_market(path) -> sp.csr_matrix:
    return sp.csr_matrix(scipy.io.mmread(path))


def write_csv(path, rows, columns=None):
    """Rows (dicts or a DataFrame) as csv without index."""
    frame = rows if isinstance(rows, pd.DataFrame) else pd.DataFrame(list(rows), columns=columns)
    frame.to_csv(ensure_dir(path), index=False, float_format='%.10g')
    return path


def read_csv(path) -> pd.DataFrame:
    return pd.read_csv(path)
