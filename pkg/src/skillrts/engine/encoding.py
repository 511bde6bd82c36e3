"""Flat one-hot action tensors.

Each cell contributes 78 components: action type (6), move (4), harvest (4),
return (4), produce direction (4), produce type (7), relative attack
position (49). Cells are concatenated in row-major order.
"""
from __future__ import annotations

import numpy as np

from .types import ATTACK_WINDOW, ActionVector, AtomicAction

GROUP_SIZES = (6, 4, 4, 4, 4, 7, ATTACK_WINDOW * ATTACK_WINDOW)
CELL_WIDTH = sum(GROUP_SIZES)
GROUP_OFFSETS = tuple(int(v) for v in np.cumsum((0,) + GROUP_SIZES[:-1]))


class EncodingError(ValueError):
    pass


def vector_rows(v: ActionVector) -> np.ndarray:
    """Pre-one-hot ``(w*h, 7)`` integer rows."""
    rows = np.zeros((v.width * v.height, len(GROUP_SIZES)), dtype=np.int64)
    for c, a in v.actions.items():
        rows[c] = a.to_row()
    return rows


def one_hot_rows(rows: np.ndarray) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    if rows.ndim != 2 or rows.shape[1] != len(GROUP_SIZES):
        raise EncodingError(f"expected (cells, 7) rows, got shape {rows.shape}")
    sizes = np.asarray(GROUP_SIZES)
    if (rows < 0).any() or (rows >= sizes).any():
        bad = np.argwhere((rows < 0) | (rows >= sizes))[0]
        raise EncodingError(f"cell {bad[0]} component {bad[1]} value {rows[tuple(bad)]} out of range")
    out = np.zeros((rows.shape[0], CELL_WIDTH), dtype=np.uint8)
    cols = rows + np.asarray(GROUP_OFFSETS)
    out[np.arange(rows.shape[0])[:, None], cols] = 1
    return out.reshape(-1)


def encode_action_vector(v: ActionVector) -> np.ndarray:
    return one_hot_rows(vector_rows(v))


def tensor_rows(tensor, width: int, height: int) -> np.ndarray:
    """Collapse a one-hot tensor back to pre-one-hot rows (empty groups read as 0)."""
    t = np.asarray(tensor)
    if t.ndim != 1 or t.shape[0] != CELL_WIDTH * width * height:
        raise EncodingError(
            f"tensor length {t.shape[0] if t.ndim == 1 else t.shape} != {CELL_WIDTH}*{width}*{height}"
        )
    if ((t != 0) & (t != 1)).any():
        raise EncodingError("tensor entries must be 0 or 1")
    cells = t.reshape(width * height, CELL_WIDTH).astype(np.int64)
    rows = np.zeros((width * height, len(GROUP_SIZES)), dtype=np.int64)
    for g, (off, size) in enumerate(zip(GROUP_OFFSETS, GROUP_SIZES)):
        block = cells[:, off:off + size]
        hot = block.sum(axis=1)
        if (hot > 1).any():
            cell = int(np.argmax(hot > 1))
            raise EncodingError(f"cell {cell}: group {g} has {int(hot[cell])} active components")
        rows[:, g] = block.argmax(axis=1)
    return rows


def decode_action_vector(tensor, width: int, height: int) -> ActionVector:
    rows = tensor_rows(tensor, width, height)
    actions = {}
    for c in np.flatnonzero(rows.any(axis=1)):
        try:
            actions[int(c)] = AtomicAction.from_row(rows[c])
        except ValueError as exc:
            raise EncodingError(f"cell {int(c)}: {exc}") from None
    return ActionVector(width, height, actions)
