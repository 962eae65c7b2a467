"""Exact recovery of 3D convex polytopes from congruent projections or sections."""
from .congruence import (CongruenceWitness, Orientation, StablePermutation, canonical_code,
                         congruence_witnesses, stable_permutation)
from .directions import (Arrangement, DirectionCell, GreatCircle, Mode, arrangement, cells,
                         exceptional_projection_set, exceptional_section_set,
                         degenerate_mask, is_degenerate_direction, sample_cell)
from .errors import (EmptyIntersection, InputError, NoConsistentPatch, ProjcongError,
                     RetryableFailure, SamplingExhausted)
from .kernel import Frame, Polytope, frame, hull, radial, support
from .pipeline import (Config, Identity, NotCongruent, Reflection, ReflectTranslate, Relation,
                       Translate, decide, verify)
from .recovery import (ParamLine, PatchRecord, global_patch, line_pair_classify, minkowski_2d,
                       right_angle_guard, segment_pair_test)
from .shadow import PlanarBody, ShadowBoundary, project, section, shadow_boundary

__all__ = [name for name in dir() if not name.startswith("_")]
