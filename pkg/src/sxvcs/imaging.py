"""Share images: encoding a binary secret, XOR stacking, noise measurement, PBM I/O.

Pixels are booleans with ``True`` = black.  A secret pixel at ``(x, y)``
expands to an ``a x b`` block of subpixels in every share (``a * b = m``);
subpixel ``c`` of a share-matrix row lands at block offset
``(c // b, c % b)``.
"""

from __future__ import annotations

import hashlib
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from pathlib import Path
from typing import Sequence

import numpy as np

from .access import format_set, to_mask
from .gf2 import iter_bits, sample_solution
from .scheme import LinearScheme, StackUndetermined, stack_result


class PBMError(ValueError):
    pass


class ShareImage:
    """A binary raster held as an ``(height, width)`` boolean array."""

    __slots__ = ("pixels",)

    def __init__(self, pixels):
        arr = np.asarray(pixels)
        if arr.ndim != 2:
            raise ValueError("an image must be two-dimensional")
        self.pixels = arr.astype(bool, copy=True)
        self.pixels.flags.writeable = False

    @classmethod
    def blank(cls, width: int, height: int) -> "ShareImage":
        return cls(np.zeros((height, width), dtype=bool))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    def black_fraction(self) -> Fraction:
        return Fraction(int(self.pixels.sum()), self.pixels.size or 1)

    def __xor__(self, other: "ShareImage") -> "ShareImage":
        if self.shape != other.shape:
            raise ValueError(f"image sizes differ: {self.shape} vs {other.shape}")
        return ShareImage(self.pixels ^ other.pixels)

    def __eq__(self, other) -> bool:
        return isinstance(other, ShareImage) and np.array_equal(self.pixels, other.pixels)

    def __hash__(self):
        return hash((self.shape, self.pixels.tobytes()))

    def __repr__(self) -> str:
        return f"ShareImage({self.width}x{self.height})"


@dataclass(frozen=True)
class SubpixelLayout:
    """``rows x cols`` arrangement of the ``m`` subpixels of one pixel."""

    rows: int
    cols: int
    mode: str = "strip"

    @classmethod
    def strip(cls, m: int) -> "SubpixelLayout":
        return cls(1, m, "strip")

    @classmethod
    def block(cls, m: int) -> "SubpixelLayout":
        a = max(d for d in range(1, isqrt(m) + 1) if m % d == 0)
        return cls(a, m // a, "block")

    @classmethod
    def named(cls, mode: str, m: int) -> "SubpixelLayout":
        if mode == "strip":
            return cls.strip(m)
        if mode == "block":
            return cls.block(m)
        raise ValueError(f"unknown layout {mode!r} (expected 'strip' or 'block')")

    @property
    def m(self) -> int:
        return self.rows * self.cols

    def expand(self, width: int, height: int) -> tuple[int, int]:
        return width * self.cols, height * self.rows


def _pixel_rng(seed: int, x: int, y: int) -> random.Random:
    digest = hashlib.blake2b(f"{seed}/{x}/{y}".encode(), digest_size=16).digest()
    return random.Random(int.from_bytes(digest, "little"))


def _check_layout(s: LinearScheme, layout: SubpixelLayout | None) -> SubpixelLayout:
    layout = SubpixelLayout.strip(s.m) if layout is None else layout
    if layout.m != s.m:
        raise ValueError(f"layout holds {layout.m} subpixels but the scheme has m={s.m}")
    return layout


def _blocks(img: ShareImage, layout: SubpixelLayout, width: int, height: int) -> np.ndarray:
    """``(height, width, m)`` view of an expanded image's subpixel blocks."""
    if img.shape != (height * layout.rows, width * layout.cols):
        raise ValueError(
            f"image is {img.width}x{img.height}, expected {width * layout.cols}x{height * layout.rows}"
        )
    arr = img.pixels.reshape(height, layout.rows, width, layout.cols)
    return arr.transpose(0, 2, 1, 3).reshape(height, width, layout.m)


def _unblocks(blocks: np.ndarray, layout: SubpixelLayout) -> np.ndarray:
    height, width, _ = blocks.shape
    arr = blocks.reshape(height, width, layout.rows, layout.cols).transpose(0, 2, 1, 3)
    return arr.reshape(height * layout.rows, width * layout.cols)


def encode(
    secret: ShareImage,
    s: LinearScheme,
    layout: SubpixelLayout | None = None,
    seed: int = 0,
) -> list[ShareImage]:
    """Split ``secret`` into ``n`` shares.

    Each pixel draws a system index uniformly and then a uniform member
    of that system's solution set, using a generator keyed on
    ``(seed, x, y)`` so every pixel is independent of traversal order.
    """
    layout = _check_layout(s, layout)
    if secret.width == 0 or secret.height == 0:
        raise ValueError("secret image is empty")
    h, w = secret.shape
    blocks = np.zeros((s.n, h, w, s.m), dtype=bool)
    bit_table = None
    if s.m <= 12:
        bit_table = np.array([[(r >> c) & 1 for c in range(s.m)] for r in range(1 << s.m)], dtype=bool)
    for y in range(h):
        for x in range(w):
            rng = _pixel_rng(seed, x, y)
            systems = s.solve1 if secret.pixels[y, x] else s.solve0
            sol = sample_solution(systems[rng.randrange(len(systems))], seed=rng)
            for i, row in enumerate(sol.rows):
                if bit_table is not None:
                    blocks[i, y, x] = bit_table[row]
                else:
                    blocks[i, y, x] = [(row >> c) & 1 for c in range(s.m)]
    return [ShareImage(_unblocks(blocks[i], layout)) for i in range(s.n)]


def stack(shares: Sequence[ShareImage]) -> ShareImage:
    if not shares:
        raise ValueError("nothing to stack")
    out = shares[0].pixels.copy()
    for sh in shares[1:]:
        if sh.shape != shares[0].shape:
            raise ValueError(f"image sizes differ: {shares[0].shape} vs {sh.shape}")
        out ^= sh.pixels
    return ShareImage(out)


def _templates(s: LinearScheme, q) -> tuple[np.ndarray, np.ndarray]:
    mask = q if isinstance(q, int) else to_mask(q, s.n)
    if s.structure.is_forbidden(mask):
        raise StackUndetermined(f"{format_set(mask)} is forbidden; its stack carries no expected pattern")
    e0, e1 = stack_result(s, mask)
    bits = lambda v: np.array([(v >> c) & 1 for c in range(s.m)], dtype=bool)  # noqa: E731
    # reference pattern: the first system of each colour
    return bits(e0[0]), bits(e1[0])


def measure_noise(
    reconstructed: ShareImage,
    secret: ShareImage,
    s: LinearScheme,
    q,
    layout: SubpixelLayout | None = None,
    region: str = "all",
) -> Fraction:
    """Fraction of pixels whose reconstructed block differs from the expected stack.

    ``region`` restricts the count to ``"black"`` or ``"white"`` secret
    pixels.  For ``k > 1`` schemes the expected stack of each colour is the
    one produced by its first system.
    """
    layout = _check_layout(s, layout)
    t0, t1 = _templates(s, q)
    blocks = _blocks(reconstructed, layout, secret.width, secret.height)
    expected = np.where(secret.pixels[..., None], t1, t0)
    wrong = (blocks != expected).any(axis=2)
    if region == "all":
        sel = np.ones_like(secret.pixels)
    elif region == "black":
        sel = secret.pixels
    elif region == "white":
        sel = ~secret.pixels
    else:
        raise ValueError(f"unknown region {region!r}")
    total = int(sel.sum())
    return Fraction(int((wrong & sel).sum()), total) if total else Fraction(0)


def decode_by_template(
    reconstructed: ShareImage,
    s: LinearScheme,
    q,
    width: int,
    height: int,
    layout: SubpixelLayout | None = None,
) -> ShareImage:
    """Recover a secret: a pixel is white iff its block equals the white stack of ``q``."""
    layout = _check_layout(s, layout)
    t0, _ = _templates(s, q)
    blocks = _blocks(reconstructed, layout, width, height)
    return ShareImage(~(blocks == t0).all(axis=2))


def reconstruct(shares: Sequence[ShareImage], q) -> ShareImage:
    """Stack the shares of the participants in ``q`` (1-based indices or bitmask)."""
    idx = list(iter_bits(q)) if isinstance(q, int) else [i - 1 for i in q]
    return stack([shares[i] for i in idx])


# -- PBM ---------------------------------------------------------------------------

_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def _header(data: bytes) -> tuple[bytes, int, int, int]:
    pos = 0
    tokens = []
    for _ in range(3):
        m = _TOKEN.match(data, pos)
        if not m:
            raise PBMError("truncated PBM header")
        tokens.append(m.group(1))
        pos = m.end()
    magic = tokens[0]
    if magic not in (b"P1", b"P4"):
        raise PBMError(f"not a PBM file (magic {magic!r})")
    try:
        width, height = int(tokens[1]), int(tokens[2])
    except ValueError:
        raise PBMError("bad PBM dimensions") from None
    if width < 0 or height < 0:
        raise PBMError("negative PBM dimensions")
    return magic, width, height, pos


def parse_pbm(data: bytes) -> ShareImage:
    magic, width, height, pos = _header(data)
    if magic == b"P4":
        if width * height and not data[pos:pos + 1].isspace():
            raise PBMError("missing whitespace after PBM header")
        pos += 1
        stride = (width + 7) // 8
        body = data[pos:pos + stride * height]
        if len(body) < stride * height:
            raise PBMError("truncated P4 raster")
        raw = np.frombuffer(body, dtype=np.uint8).reshape(height, stride)
        return ShareImage(np.unpackbits(raw, axis=1)[:, :width].astype(bool))
    body = re.sub(rb"#[^\n]*", b"", data[pos:])
    bits = [c for c in body if not chr(c).isspace()]
    if len(bits) < width * height:
        raise PBMError("truncated P1 raster")
    if any(c not in b"01" for c in bits[: width * height]):
        raise PBMError("P1 raster holds characters other than 0 and 1")
    arr = np.array([c == ord("1") for c in bits[: width * height]], dtype=bool)
    return ShareImage(arr.reshape(height, width))


def format_pbm(img: ShareImage, plain: bool = False) -> bytes:
    if plain:
        out = [f"P1\n{img.width} {img.height}\n"]
        for row in img.pixels:
            digits = ["1" if v else "0" for v in row]
            # 35 digits per line keeps lines under 70 characters
            for i in range(0, len(digits), 35):
                out.append(" ".join(digits[i:i + 35]) + "\n")
        return "".join(out).encode()
    header = f"P4\n{img.width} {img.height}\n".encode()
    return header + np.packbits(img.pixels, axis=1).tobytes()


def read_pbm(path) -> ShareImage:
    return parse_pbm(Path(path).read_bytes())


def write_pbm(img: ShareImage, path, plain: bool = False) -> None:
    Path(path).write_bytes(format_pbm(img, plain))
