#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Rebuild data/color_names.bin, the 11-name color-naming probability table.

OpenCV's tracking module ships the color-naming table only in its reduced
10-column form: each probability row p (11 names, summing to 1) stored as
(p - 1/11) @ P, where P is an 11x10 orthonormal contrast basis orthogonal to
the all-ones vector. P is a Haar-style tree over the 11 names (8 + 3 leaves),
so the probabilities are recovered exactly as 1/11 + reduced @ P.T.

Usage: make_cn_table.py [path/to/libopencv_tracking.a] [out.bin]
"""
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

SYMBOL = "_ZN2cv6detail8tracking10ColorNamesE"
ROWS, REDUCED, NAMES = 32768, 10, 11


def reduced_table(archive: Path) -> np.ndarray:
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(["ar", "x", str(archive), "featureColorName.cpp.o"], cwd=tmp, check=True)
        blob = Path(tmp) / "cn.bin"
        subprocess.run(["objcopy", "-O", "binary", f"--only-section=.rodata.{SYMBOL}",
                        "featureColorName.cpp.o", str(blob)], cwd=tmp, check=True)
        return np.fromfile(blob, dtype="<f4").reshape(ROWS, REDUCED).astype(np.float64)


def contrast_basis() -> np.ndarray:
    pair, quad, octet = 1 / np.sqrt(2), 0.5, 1 / np.sqrt(8)
    big, small = np.sqrt(3 / 88), -8 * np.sqrt(3 / 88) / 3
    basis = np.zeros((NAMES, REDUCED))
    leaf = 0
    for quad_col, octet_sign, pairs in ((6, 1, (0, 1)), (7, -1, (2, 3))):
        for k, pair_col in enumerate(pairs):
            for sign in (1, -1):
                basis[leaf, pair_col] = sign * pair
                basis[leaf, quad_col] = (1 if k == 0 else -1) * quad
                basis[leaf, 8] = octet_sign * octet
                basis[leaf, 9] = big
                leaf += 1
    basis[8:, 9] = small
    basis[8, 4], basis[9, 4] = pair, -pair
    third = np.sqrt(1 / 6)
    basis[8, 5], basis[9, 5], basis[10, 5] = third, third, -2 * third
    assert np.allclose(basis.T @ basis, np.eye(REDUCED))
    assert np.allclose(basis.sum(axis=0), 0)
    return basis


def main() -> None:
    archive = Path(sys.argv[1] if len(sys.argv) > 1 else "/usr/lib/x86_64-linux-gnu/libopencv_tracking.a")
    out = Path(sys.argv[2] if len(sys.argv) > 2 else Path(__file__).resolve().parent.parent / "data" / "color_names.bin")
    probs = 1.0 / NAMES + reduced_table(archive) @ contrast_basis().T
    # float32 rounding in the reduced table leaves entries around -1e-5
    assert probs.min() > -1e-4, probs.min()
    probs = np.clip(probs, 0.0, None)
    probs /= probs.sum(axis=1, keepdims=True)
    probs.astype("<f4").tofile(out)
    print(f"wrote {out} ({ROWS}x{NAMES} float32)")


if __name__ == "__main__":
    main()
