"""Exact tools for centrally essential matrix algebras over Q and F_p."""

from .algebra import (
    DEFAULT_BUDGET,
    MatAlgebra,
    adjoin_identity,
    center,
    centralizer,
    close_under_multiplication,
    enumerate_idempotents,
    is_commutative,
    local_split,
    nil_index,
    power_chain,
)
from .ce import (
    CE,
    NOT_CE,
    UNKNOWN,
    CEVerdict,
    SoSCertificate,
    ce_certificate_verify,
    ce_element_test,
    ce_exhaustive,
    ce_random_search,
)
from .constructions import (
    FamilySpec,
    build,
    build_example_4_1,
    build_exterior_regular,
    build_jordan_nilpotent,
    build_prop32_forms,
    build_q8_group_algebra,
    build_standard,
    build_theorem_1_2,
    theorem_1_2_certificate,
)
from .errors import BudgetExceeded, CealgError, FormatError, NotClosedError, NotLocalError, NotNilpotentError
from .explorer import CampaignConfig, random_subalgebra, run_ce_implies_commutative_campaign, run_oq54_search
from .field import GF, QQ, FieldSpec, Scalar
from .fileio import load_algebra, load_certificate, save_algebra, save_certificate
from .linalg import Mat, Subspace, matrix_unit, nilpotent_jordan, rank, rref, solve_kernel, span_echelon

__version__ = "0.1.0"
