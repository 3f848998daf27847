"""Image decoding and encoding through Pillow."""

from pathlib import Path
from typing import Union
import io
import logging

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..core.types import GrayImage, ImageFormatError, ImageNotFoundError
from ..imaging.transforms import to_gray
from .files import write_atomic

logger = logging.getLogger(__name__)

# Pillow modes holding more than 8 bits per gray sample
_WIDE_GRAY_MODES = ("I", "I;16", "I;16B", "I;16L", "I;16N")


def _to_gray_image(im: Image.Image) -> GrayImage:
    if im.mode == "L":
        return GrayImage(np.array(im, dtype=np.uint8))
    if im.mode in _WIDE_GRAY_MODES:
        wide = np.array(im).astype(np.int64) >> 8
        return GrayImage(np.clip(wide, 0, 255).astype(np.uint8))
    if im.mode in ("1", "LA"):
        return GrayImage(np.array(im.convert("L"), dtype=np.uint8))
    if im.mode != "RGB":
        im = im.convert("RGB")
    return to_gray(np.array(im, dtype=np.uint8))


def load_image(path: Union[str, Path]) -> GrayImage:
    """Decode a PNG, JPEG, PGM or BMP file into a GrayImage.

    Color images go through Rec.601 luma; 16-bit gray is shifted down to
    8 bits.
    """
    path = Path(path)
    if not path.is_file():
        raise ImageNotFoundError(f"image not found: {path}")
    try:
        with Image.open(path) as im:
            im.load()
            img = _to_gray_image(im)
    except (UnidentifiedImageError, OSError, ValueError) as e:
        raise ImageFormatError(f"cannot decode image {path}: {e}") from e
    logger.debug("Loaded %s (%dx%d)", path, img.width, img.height)
    return img


def save_image(img: GrayImage, path: Union[str, Path]) -> Path:
    """Write an 8-bit grayscale PNG atomically."""
    buffer = io.BytesIO()
    Image.fromarray(np.ascontiguousarray(img.pixels)).save(buffer, format="PNG")
    return write_atomic(path, buffer.getvalue())
