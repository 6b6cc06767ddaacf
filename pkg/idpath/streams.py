"""
Counter-based random streams.

All randomness flows from one master seed. A path's stream is addressed by
(component, path_id), so a path is reproducible no matter which worker builds it
or in which order.
"""

import numpy as np

# Component tags keep the principal series, the bands and the Gaussian
# refinement on disjoint streams even when they share a path id.
PRINCIPAL = 0
Q_BAND = 1
R_BAND = 2
REFINEMENT = 3
DIAGNOSTICS = 4


def path_stream(seed: int, path_id: int, component: int = PRINCIPAL) -> np.random.Generator:
    """
    Return the generator for one path.

    Args:
        seed: Master seed of the run.
        path_id: Index of the path within the batch (the stream counter).
        component: Stream tag, one of the module constants.

    Returns:
        A Philox-backed numpy Generator.
    """
    if seed < 0 or path_id < 0 or component < 0:
        raise ValueError("seed, path_id and component must be nonnegative")
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(component, path_id))
    return np.random.Generator(np.random.Philox(seq))
