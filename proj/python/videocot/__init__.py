"""Python surface of the videocot pipeline.

The heavy lifting lives in the compiled extension ``videocot._core``: the
32-frame grid, metric kernels, the restricted program language, rationale
parsing, and offline (oracle + stub) pipeline runs. Batch operation belongs to
the ``videocot`` CLI; these bindings cover the kernels and small end-to-end
runs from notebooks and tests.
"""

from ._core import (  # noqa: F401
    MC_ANSWER_SUFFIX,
    NORM_FRAME_COUNT,
    OE_ANSWER_SUFFIX,
    RATIONALE_SUFFIX,
    CodeExtractionError,
    DomainError,
    ProgramParseError,
    ProgramValidateError,
    best_text_match,
    box_iou,
    canonical_program,
    denormalize_span,
    emit_dataset,
    extract_code,
    generate_synthetic_corpus,
    keyframe_recall,
    mc_answer_letter,
    normalize_frame_index,
    parse_rationale,
    render_box,
    render_span,
    run_generate,
    temporal_iou,
    token_f1,
    validate_program,
)

__version__ = "0.1.0"
