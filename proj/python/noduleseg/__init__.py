"""Coarse-to-fine morphological segmentation of pulmonary-nodule ROI crops."""

try:
    from ._core import (  # installed wheel layout
        binarize_mean,
        dsc,
        generate_phantom,
        load_mask,
        load_pgm,
        otsu_threshold,
        remove_pleural_surface,
        save_mask,
        save_pgm,
        segment,
    )
except ImportError:  # build-tree layout: _core on PYTHONPATH next to the lib
    from _core import (
        binarize_mean,
        dsc,
        generate_phantom,
        load_mask,
        load_pgm,
        otsu_threshold,
        remove_pleural_surface,
        save_mask,
        save_pgm,
        segment,
    )

__all__ = [
    "binarize_mean",
    "dsc",
    "generate_phantom",
    "load_mask",
    "load_pgm",
    "otsu_threshold",
    "remove_pleural_surface",
    "save_mask",
    "save_pgm",
    "segment",
]
