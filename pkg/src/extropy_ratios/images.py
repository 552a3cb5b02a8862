"""Grayscale image similarity under exposure scaling, and black-reference classification.

Pixel intensities in [0, 1] are treated as samples of a nonnegative random
variable.  Multiplying every pixel by ``0 < c <= 1`` (an exposure change) is a
scale transform, so all three similarity estimates are unchanged by it.

Classification compares each image with a uniformly black reference image
``Z`` whose survival function is taken as identically 1 on ``[0, m]``, where
``m`` is the image's brightest pixel.  The resulting survival extropy
similarity depends only on the image's relative contrast, which makes it an
exposure-invariant fingerprint.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .distributions import SampleData
from .errors import AmbiguousAnchorsError, DegenerateInputError, ImageFormatError
from .estimators import KDEConfig, estimate_similarity

UNMATCHED = "unmatched"
DEFAULT_MATCH_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class GrayscaleImage:
    pixels: np.ndarray  # shape (height, width), values in [0, 1]

    def __post_init__(self):
        px = np.array(self.pixels, dtype=float)
        if px.ndim != 2:
            raise ValueError("pixels must be a 2-D array (height x width)")
        if px.size < 4:
            raise ValueError("image needs at least 4 pixels")
        if not np.all(np.isfinite(px)) or px.min() < 0 or px.max() > 1:
            raise ValueError("pixel intensities must lie in [0, 1]")
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def as_sample(self) -> SampleData:
        return SampleData(self.pixels.ravel())


def scale_exposure(img: GrayscaleImage, c: float) -> GrayscaleImage:
    if not 0 < c <= 1:
        raise ValueError(f"exposure factor must lie in (0, 1], got {c}")
    return GrayscaleImage(img.pixels * c)


# ---------------------------------------------------------------------------
# file formats

_PGM_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def _pgm_tokens(data: bytes, count: int, pos: int = 0):
    tokens = []
    for _ in range(count):
        m = _PGM_TOKEN.match(data, pos)
        if m is None:
            raise ImageFormatError("truncated PGM header")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens, pos


def _parse_pgm(data: bytes) -> GrayscaleImage:
    (magic, w, h, maxval), pos = _pgm_tokens(data, 4)
    if magic not in (b"P2", b"P5"):
        raise ImageFormatError(f"unsupported PGM magic {magic!r}")
    try:
        width, height, maxv = int(w), int(h), int(maxval)
    except ValueError:
        raise ImageFormatError("non-integer PGM header field") from None
    if width <= 0 or height <= 0:
        raise ImageFormatError("empty image")
    if not 0 < maxv < 65536:
        raise ImageFormatError(f"invalid maxval {maxv}")
    count = width * height
    if magic == b"P2":
        body = data[pos:].split()
        if len(body) != count:
            raise ImageFormatError(f"expected {count} pixels, found {len(body)}")
        try:
            raw = np.array([int(t) for t in body], dtype=float)
        except ValueError:
            raise ImageFormatError("non-integer pixel value") from None
    else:
        # exactly one whitespace byte separates the header from binary data
        pos += 1
        dtype = np.dtype(">u2") if maxv > 255 else np.dtype("u1")
        body = data[pos:pos + count * dtype.itemsize]
        if len(body) != count * dtype.itemsize:
            raise ImageFormatError("truncated PGM pixel data")
        raw = np.frombuffer(body, dtype=dtype).astype(float)
    if raw.min() < 0 or raw.max() > maxv:
        raise ImageFormatError(f"pixel value outside [0, {maxv}]")
    return GrayscaleImage((raw / maxv).reshape(height, width))


def _parse_csv(text: str) -> GrayscaleImage:
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(tok) for tok in line.split(",")])
        except ValueError:
            raise ImageFormatError(f"line {lineno}: non-numeric pixel") from None
    if not rows:
        raise ImageFormatError("empty image")
    if len({len(r) for r in rows}) != 1:
        raise ImageFormatError("ragged CSV matrix")
    px = np.array(rows)
    if px.min() < 0 or px.max() > 1:
        raise ImageFormatError("CSV intensities must lie in [0, 1]")
    return GrayscaleImage(px)


def load_image(path, fmt: Optional[str] = None) -> GrayscaleImage:
    """Read a PGM (P2 / P5) or CSV-matrix image and normalize to [0, 1].

    ``fmt`` is ``"pgm"`` or ``"csv"``; by default it is inferred from the
    file's magic bytes.
    """
    data = Path(path).read_bytes()
    if fmt is None:
        fmt = "pgm" if data.lstrip()[:2] in (b"P2", b"P5") else "csv"
    try:
        if fmt in ("pgm", "pgm-ascii", "pgm-binary"):
            return _parse_pgm(data)
        if fmt in ("csv", "csv-matrix"):
            return _parse_csv(data.decode("utf-8"))
    except ValueError as exc:
        if isinstance(exc, ImageFormatError):
            raise
        raise ImageFormatError(f"{path}: {exc}") from exc
    raise ValueError(f"unknown image format {fmt!r}")


def save_pgm(img: GrayscaleImage, path, binary: bool = True, maxval: int = 255):
    """Write ``img`` quantized to ``maxval`` levels."""
    levels = np.rint(img.pixels * maxval).astype(int)
    header = f"{'P5' if binary else 'P2'}\n{img.width} {img.height}\n{maxval}\n".encode()
    if binary:
        dtype = ">u2" if maxval > 255 else "u1"
        body = levels.astype(dtype).tobytes()
    else:
        body = "\n".join(" ".join(str(v) for v in row) for row in levels).encode() + b"\n"
    Path(path).write_bytes(header + body)


def save_csv(img: GrayscaleImage, path):
    np.savetxt(path, img.pixels, delimiter=",", fmt="%.17g")


# ---------------------------------------------------------------------------
# similarity


def image_similarity(img_a: GrayscaleImage, img_b: GrayscaleImage, kind, kde: KDEConfig = KDEConfig()) -> float:
    """Similarity estimate between the grey-level distributions of two images."""
    return estimate_similarity(img_a.as_sample(), img_b.as_sample(), kind, cfg=kde).similarity


def similarity_to_reference(img: GrayscaleImage) -> float:
    """Survival extropy similarity between ``img`` and the black reference image.

    With ``m`` the brightest pixel, the reference survival function is 1 on
    ``[0, m]`` so ``J_s(Z) = -m/2``.  The cross term and ``J_s(img)`` are
    left-endpoint sums over the grid ``{0} U sorted pixels``.
    """
    values = np.sort(img.pixels.ravel())
    m = float(values[-1])
    if not m > 0:
        raise DegenerateInputError("image is entirely black; reference similarity undefined")
    grid = np.concatenate([[0.0], values])
    gaps = np.diff(grid)
    sf = (values.size - np.searchsorted(values, grid[:-1], side="right")) / values.size
    cross = -0.5 * float(np.dot(sf, gaps))
    j_img = -0.5 * float(np.dot(sf * sf, gaps))
    j_ref = -0.5 * m
    s = cross * cross / (j_ref * j_img)
    # Cauchy-Schwarz bound; only rounding can exceed it
    return 1.0 if 1.0 < s <= 1.0 + 1e-9 else s


@dataclass(frozen=True)
class ReferenceResult:
    image_id: str
    similarity: float
    group: str
    anchor_similarity: float
    relative_gap: float


def _relative_gap(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b))


def classify(
    mixed: Sequence[tuple[str, GrayscaleImage]],
    anchors: Sequence[tuple[str, GrayscaleImage]],
    eps: float = DEFAULT_MATCH_TOLERANCE,
) -> list[ReferenceResult]:
    """Assign each image to the anchor group whose reference similarity matches it.

    Anchors must have pairwise reference similarities more than ``2 * eps``
    apart (relative); otherwise :class:`AmbiguousAnchorsError` is raised before
    any image is classified.  Images with no anchor within ``eps`` are
    labelled ``"unmatched"``.
    """
    if not eps > 0:
        raise ValueError("matching tolerance must be positive")
    if not anchors:
        raise ValueError("need at least one anchor image")
    anchor_ids = [gid for gid, _ in anchors]
    anchor_s = np.array([similarity_to_reference(img) for _, img in anchors])
    for i in range(len(anchor_s)):
        for j in range(i + 1, len(anchor_s)):
            if _relative_gap(anchor_s[i], anchor_s[j]) <= 2 * eps:
                raise AmbiguousAnchorsError(
                    f"anchors {anchor_ids[i]!r} and {anchor_ids[j]!r} are indistinguishable "
                    f"(S={anchor_s[i]:.12g} vs {anchor_s[j]:.12g})"
                )
    results = []
    for image_id, img in mixed:
        s = similarity_to_reference(img)
        gaps = np.array([_relative_gap(s, a) for a in anchor_s])
        best = int(np.argmin(gaps))
        group = anchor_ids[best] if gaps[best] <= eps else UNMATCHED
        results.append(ReferenceResult(image_id, s, group, float(anchor_s[best]), float(gaps[best])))
    return results


def classification_csv(results: Sequence[ReferenceResult], precision: int = 7) -> str:
    def fmt(v):
        return repr(float(v)) if precision <= 0 else f"{v:.{precision}g}"

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["image", "S", "group", "anchor_S", "relative_gap"])
    for r in results:
        writer.writerow([r.image_id, fmt(r.similarity), r.group, fmt(r.anchor_similarity), fmt(r.relative_gap)])
    return buf.getvalue()


def synthetic_image(seed: int, height: int = 64, width: int = 64, shape: float = 2.0) -> GrayscaleImage:
    """Deterministic test image: smooth gradient plus beta-distributed texture."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:height, 0:width]
    gradient = 0.5 * (xx / max(width - 1, 1)) * (0.5 + 0.5 * np.sin(yy / max(height, 1) * math.pi))
    texture = rng.beta(shape, 2.0, size=(height, width))
    px = 0.5 * gradient + 0.5 * texture
    return GrayscaleImage(px / px.max())
