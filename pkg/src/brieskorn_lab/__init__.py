"""Verification toolkit for the contact geometry of Brieskorn manifolds.

Numerical checks (contact conditions, open books, branched coverings) run on
deterministically sampled points of the relevant level sets; monodromy and
join-complex homology are computed in exact integer arithmetic.
"""

__version__ = "0.1.0"

from .exterior import (
    DiagonalOneForm,
    ConstraintSet,
    Constraint,
    TangentFrame,
    contact_value,
    eval_one_form,
    eval_two_form,
    first_angular_form,
    level_contact_form,
    negative_weight_form,
    newton_project,
    pfaffian,
    standard_contact_form,
    tangent_frame,
    top_form_value,
    weighted_contact_form,
)
from .geometry import (
    LevelSpec,
    brieskorn_poly,
    flow_time_to_level,
    isotopy_from_level,
    isotopy_to_level,
    jacobian_full_rank,
    sample_level_set,
    scaling_field,
    transversality_value,
)

__all__ = [
    "__version__",
    "DiagonalOneForm",
    "ConstraintSet",
    "Constraint",
    "TangentFrame",
    "contact_value",
    "eval_one_form",
    "eval_two_form",
    "first_angular_form",
    "level_contact_form",
    "negative_weight_form",
    "newton_project",
    "pfaffian",
    "standard_contact_form",
    "tangent_frame",
    "top_form_value",
    "weighted_contact_form",
    "LevelSpec",
    "brieskorn_poly",
    "flow_time_to_level",
    "isotopy_from_level",
    "isotopy_to_level",
    "jacobian_full_rank",
    "sample_level_set",
    "scaling_field",
    "transversality_value",
]
