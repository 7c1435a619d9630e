"""Knowledge-graph question answering: build a typed graph from QA pairs,
retrieve by embedding, node type, and fuzzy name match, then synthesize and
judge answers. Runs fully offline on deterministic fallback providers."""

from kgqa._core import (
    DEFAULT_BATCH_SIZE,
    EXTRACTION_INSTRUCTIONS,
    FALLBACK_EMBEDDING_DIM,
    JUDGE_PROMPT_VERSION,
    Error,
    KnowledgeGraph,
    Pipeline,
    cosine,
    embed_text,
    levenshtein,
    parse_verdict,
    perturb_question,
    render_judge_prompt,
    segment,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_BATCH_SIZE",
    "EXTRACTION_INSTRUCTIONS",
    "FALLBACK_EMBEDDING_DIM",
    "JUDGE_PROMPT_VERSION",
    "Error",
    "KnowledgeGraph",
    "Pipeline",
    "cosine",
    "embed_text",
    "levenshtein",
    "parse_verdict",
    "perturb_question",
    "render_judge_prompt",
    "segment",
]
