"""Decision procedures: exact frame validity, bounded search, transfer."""
from .core import (  # noqa: F401
    ConsistencyError, Verdict, Witness, frame_valid, frame_valid_many, needs_twin,
    relevant_atoms, strong_valid_direct,
)
from .search import (  # noqa: F401
    LOGICS, SearchBounds, candidate_frames, check_bitransfer, check_transfer, sat_bounded,
    valid_bounded,
)
from .oracle import sample_refutation  # noqa: F401
