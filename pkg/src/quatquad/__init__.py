"""Quaternion quadratic equations: exact roots, iterations, basins.

The package solves x^2 + b x + c = 0 over the quaternions exactly by
way of a companion real quartic, studies the left/right Newton and
Halley iterations for the same equation (including the Jacobian
structure at roots and the locally invariant planes it induces), and
renders escape-time images of the iteration basins under several
tracing modes.
"""

from .errors import (CoincidentClassesError, ConfigError,
                     ConjugationAssemblyError, NonConvergenceError,
                     NonFiniteError, ParseError, PreconditionViolatedError,
                     QuatQuadError, RankAmbiguousError,
                     SingularDerivativeError, SingularHalleyDeltaError,
                     SingularStencilError, ZeroInverseError)
from .quat import (Quaternion, congruent_distance, distance,
                   format_quaternion, from_complex, parse_quaternion,
                   proj_c, proj_s)
from .qpoly import (QuadraticPoly, RealQuartic, alternative_b, char_poly,
                    from_roots, taylor_remainder)
from .quartic import (CertifiedPair, QuarticRoots, RecoveredRoot, RootCase,
                      certify, cluster_roots, recover_roots, solve_quartic)
from .iterfun import (IterationMethod, Orbit, TerminalClass, TerminalKind,
                      Termination, canonical_cycle_key, classify_terminal,
                      detect_cycle, orbit, step)
from .invplane import (EigenDecomposition, EigenPair, InvariantPlane,
                       Jacobian4, eigen4, invariant_plane, jacobian,
                       principal_angles)
from .render import (CycleClass, HybridSchedule, PixelRecord, Raster,
                     RenderJob, Tracing, composed_step, encode_png,
                     encode_ppm, hybrid_trace, metadata_text, render,
                     resolve_job, seed_for_pixel, trace_pixel)
from .config import (BenchSpec, Config, JobSpec, OutputSpec, load_config,
                     parse_config, serialize_config)

from ._kernels import backend_name as kernel_backend

__version__ = "1.0.0"
