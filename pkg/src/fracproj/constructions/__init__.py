"""Finite-depth generators for the explicit sets of the laboratory.

Submodules
----------
blocks
    Star products, factorial grid blocks Q_n / L_n / U_n / B_n, skeletons,
    the direction families D_n, and the line-intersection verifiers.
cascade
    The dense-direction ball cascade (diagonal ordering, diameter-sum one).
circle
    The nested-arc circle set with properties (P0)-(P3).
gridsq
    The square/arc pair with invariants (i)-(iv) and exact grid certificates.
tree
    The bounded-depth direction tree with per-vertex covering certificates.
"""

from importlib import import_module

_EXPORTS = {
    "block_B": "blocks", "block_L": "blocks", "block_Q": "blocks",
    "block_U": "blocks", "directions_D": "blocks", "skeleton": "blocks",
    "star_power": "blocks", "star_product": "blocks",
    "star_product_squares": "blocks",
    "verify_column_richness": "blocks", "verify_line_intersect": "blocks",
    "verify_skeleton_columns": "blocks",
    "MainParams": "cascade", "construct_main": "cascade",
    "default_directions": "cascade", "diagonal_pairs": "cascade",
    "SetEParams": "circle", "construct_setE": "circle",
    "default_setE_params": "circle",
    "Main2Params": "gridsq", "Main2State": "gridsq",
    "construct_main2": "gridsq",
    "BigExTree": "tree", "BigExVertex": "tree", "construct_bigex": "tree",
}

__all__ = sorted(_EXPORTS)


def __getattr__(name):
    try:
        mod = _EXPORTS[name]
    except KeyError:
        raise AttributeError(name) from None
    return getattr(import_module(f".{mod}", __name__), name)
