"""Truncated tensor algebra, shuffle Hopf algebra and signatures of sampled paths."""
from ._backend import BACKEND
from ._layout import DEFAULT_ENTRY_CAP, entry_cap, get_entry_cap, set_entry_cap
from .errors import (
    CapacityError,
    DomainError,
    InputError,
    RoughPathError,
    ShapeError,
)
from .grouplike import (
    grouplike_inverse,
    is_grouplike,
    is_lie,
    lie_bracket,
    lie_project_dims,
)
from .io import read_csv, read_tensor_json, write_tensor_json
from .rough import (
    MultiplicativeFunctional,
    graded_holder,
    holder_norm,
    is_multiplicative,
    minimal_depth,
    rho_holder,
    young_integral,
)
from .signature import (
    SampledPath,
    SignaturePath,
    brute_force_sig,
    levy_area,
    log_signature,
    path_signature,
    reverse,
    segment_sig,
    signature_path,
)
from .tensor import (
    GroupElement,
    TruncatedTensor,
    add,
    dilation,
    exp,
    from_vector,
    homogeneous,
    homogeneous_norm,
    hs_norm,
    hs_norm_level,
    inverse,
    log,
    mul,
    project,
    rho_metric,
    scale,
    unit,
    zero,
)
from .words import (
    WordPoly,
    antipode,
    deconcat,
    enumerate_words,
    pair,
    pair_poly,
    shuffle,
    word,
)

__version__ = "0.1.0"
