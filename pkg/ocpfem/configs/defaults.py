from yacs.config import CfgNode

# -----------------------------------------------------------------------------
# Convention about configuration keys
# -----------------------------------------------------------------------------
# Keys are grouped by the layer that consumes them. Every key can be set from
# a yml preset (merge_from_file), a flat `KEY.SUB = value` text file or the
# command line; later sources override earlier ones.

# -----------------------------------------------------------------------------
# Config definition
# -----------------------------------------------------------------------------

_C = CfgNode()

# -----------------------------------------------------------------------------
# Experiment
# -----------------------------------------------------------------------------
_C.EXPERIMENT = CfgNode()
# Space dimension of the unit domain, 1, 2 or 3
_C.EXPERIMENT.DIM = 2
# Name of the desired state in the target registry, "box" picks the
# indicator of (0.25, 0.75)^n for the configured dimension
_C.EXPERIMENT.TARGET = "box"
# diffusion (rho_l = h_l^2), energy (rho = h^2) or l2 (rho = h^4)
_C.EXPERIMENT.REGULARIZATION = "diffusion"
# adaptive or uniform
_C.EXPERIMENT.REFINEMENT = "adaptive"
# Number of refinement steps, -1 uses 60 / 14 / 10 for 1D / 2D / 3D
_C.EXPERIMENT.MAX_LEVELS = -1
# Levels whose mesh has more interior vertices are skipped
_C.EXPERIMENT.DOF_BUDGET = 2000000
_C.EXPERIMENT.SEED = 0
_C.EXPERIMENT.OUTPUT_DIR = "output"

# -----------------------------------------------------------------------------
# Adaptivity
# -----------------------------------------------------------------------------
_C.ADAPT = CfgNode()
# Maximum marking: eta_l > THETA * max eta
_C.ADAPT.THETA = 0.5
# Bisections of every marked element per level, 0 for one per dimension
# (halves h_l of the marked elements)
_C.ADAPT.BISECTIONS = 0
# Stop the loop after the first level whose solver did not converge
_C.ADAPT.ABORT_ON_FAILURE = True

# ---------------------------------------------------------------------------- #
# Solver
# ---------------------------------------------------------------------------- #
_C.SOLVER = CfgNode()
# Solvers run on every level, the first one drives the refinement:
# cg, pcg, pcg_diag, gmres, bpcg, direct
_C.SOLVER.NAMES = ("pcg",)
# Reduction of the relative preconditioned residual
_C.SOLVER.TOL = 1e-6
_C.SOLVER.MAXIT = 10000
# Action of K_rho^{-1}: cholesky or pcg (Jacobi, INNER_TOL)
_C.SOLVER.INNER = "cholesky"
_C.SOLVER.INNER_TOL = 1e-12
# Scaling of C = delta * K_rho in Bramble-Pasciak CG
_C.SOLVER.BP_DELTA = 0.5
_C.SOLVER.GMRES_STAGNATION = 50
_C.SOLVER.LANCZOS_STEPS = 20

# -----------------------------------------------------------------------------
# Quadrature
# -----------------------------------------------------------------------------
_C.QUADRATURE = CfgNode()
# Bisection depth of the midpoint rule on elements cut by a discontinuity
_C.QUADRATURE.DEPTH = 6
_C.QUADRATURE.MAX_POINTS = 4096
# Depth of the composite degree-2 rule for smooth targets
_C.QUADRATURE.SMOOTH_DEPTH = 1

# -----------------------------------------------------------------------------
# Initial meshes
# -----------------------------------------------------------------------------
_C.MESH = CfgNode()
# alternate (checkerboard diagonals) or kuhn (all diagonals parallel)
_C.MESH.INITIAL_2D_DIAGONAL = "alternate"
# Cubes per axis of the initial Kuhn mesh, 4 gives 125 vertices
_C.MESH.CUBE_DIVISIONS = 4
_C.MESH.INTERVAL_ELEMENTS = 4

# -----------------------------------------------------------------------------
# Export
# -----------------------------------------------------------------------------
_C.EXPORT = CfgNode()
# Legacy VTK snapshot per level
_C.EXPORT.VTK = False
# u, p, z vectors per level, keyed by mesh revision
_C.EXPORT.VECTORS = False

# -----------------------------------------------------------------------------
# Logging
# -----------------------------------------------------------------------------
_C.LOG = CfgNode()
_C.LOG.LEVEL = "INFO"
# Iterations between debug lines of the Krylov solvers
_C.LOG.PERIOD = 100
