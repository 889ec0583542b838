"""Temporally weighted first-neighbor clustering for action segmentation."""

from ._twseg import (
    TwsegError,
    build_hierarchy,
    connected_components,
    equal_split,
    evaluate,
    feature_distances,
    finch,
    hungarian_match,
    kmeans,
    load_features,
    load_labels,
    nearest_neighbors,
    purity,
    refine_to_k,
    save_features,
    segment,
    select_level,
    synth_generate,
    temporal_distances,
    weighted_distances,
)

__all__ = [name for name in dir() if not name.startswith("_")]
